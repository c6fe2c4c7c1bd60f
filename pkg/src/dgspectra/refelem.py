"""Nodal polynomial bases and local operators on reference elements.

The 1D reference element is the interval [-1, 1] with Gauss-Lobatto nodes.
The 2D reference element is the bi-unit triangle with vertices
(-1,-1), (1,-1), (-1,1), using warp-and-blend interpolation nodes and the
orthonormal Dubiner basis.
"""

from dataclasses import dataclass, field
from math import gamma as _gamma
from math import sqrt

import numpy as np
from scipy.special import eval_jacobi, roots_jacobi

# Blending exponents for warp-and-blend triangle nodes, indexed by degree 1..15.
_ALPHA_OPT = [
    0.0000, 0.0000, 1.4152, 0.1001, 0.2751, 0.9800, 1.0999, 1.2832,
    1.3648, 1.4773, 1.4959, 1.5743, 1.5770, 1.6223, 1.6258,
]


def jacobi_normalized(x, n, alpha=0.0, beta=0.0):
    """Jacobi polynomial P_n^(alpha,beta) normalized to unit L2 weight-norm on [-1,1]."""
    x = np.asarray(x, dtype=float)
    num = 2.0 ** (alpha + beta + 1) / (2 * n + alpha + beta + 1)
    num *= _gamma(n + alpha + 1) * _gamma(n + beta + 1)
    num /= _gamma(n + alpha + beta + 1) * _gamma(n + 1)
    return eval_jacobi(n, alpha, beta, x) / sqrt(num)


def grad_jacobi_normalized(x, n, alpha=0.0, beta=0.0):
    """Derivative of the normalized Jacobi polynomial."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.zeros_like(x)
    return sqrt(n * (n + alpha + beta + 1)) * jacobi_normalized(x, n - 1, alpha + 1, beta + 1)


def gauss_lobatto_nodes(degree):
    """Gauss-Lobatto nodes on [-1, 1] for polynomial degree ``degree``."""
    if degree == 0:
        return np.array([0.0])
    if degree == 1:
        return np.array([-1.0, 1.0])
    interior, _ = roots_jacobi(degree - 1, 1.0, 1.0)
    return np.concatenate(([-1.0], np.sort(interior), [1.0]))


def vandermonde_1d(degree, x):
    """Vandermonde matrix of normalized Legendre polynomials at points ``x``."""
    x = np.asarray(x, dtype=float)
    return np.column_stack([jacobi_normalized(x, j) for j in range(degree + 1)])


def grad_vandermonde_1d(degree, x):
    x = np.asarray(x, dtype=float)
    return np.column_stack([grad_jacobi_normalized(x, j) for j in range(degree + 1)])


def _rstoab(r, s):
    """Collapsed coordinates (a, b) of triangle points (r, s)."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    singular = np.abs(1.0 - s) < 1e-14
    denom = np.where(singular, 1.0, 1.0 - s)
    a = np.where(singular, -1.0, 2.0 * (1.0 + r) / denom - 1.0)
    return a, s.copy()


def dubiner_2d(r, s, i, j):
    """Orthonormal Dubiner basis function (i, j) on the bi-unit triangle."""
    a, b = _rstoab(np.asarray(r, float), np.asarray(s, float))
    h1 = jacobi_normalized(a, i)
    h2 = jacobi_normalized(b, j, 2 * i + 1, 0)
    return sqrt(2.0) * h1 * h2 * (1.0 - b) ** i


def grad_dubiner_2d(r, s, i, j):
    """Gradient (d/dr, d/ds) of the Dubiner basis function (i, j)."""
    a, b = _rstoab(np.asarray(r, float), np.asarray(s, float))
    fa = jacobi_normalized(a, i)
    dfa = grad_jacobi_normalized(a, i)
    gb = jacobi_normalized(b, j, 2 * i + 1, 0)
    dgb = grad_jacobi_normalized(b, j, 2 * i + 1, 0)

    # d/dr: da/dr = 2/(1-b)
    dmodedr = dfa * gb
    if i > 0:
        dmodedr *= (0.5 * (1.0 - b)) ** (i - 1)
    # d/ds: da/ds = (1+a)/2 * 2/(1-b)
    dmodeds = dfa * (gb * 0.5 * (1.0 + a))
    if i > 0:
        dmodeds *= (0.5 * (1.0 - b)) ** (i - 1)
    tmp = dgb * (0.5 * (1.0 - b)) ** i
    if i > 0:
        tmp -= 0.5 * i * gb * (0.5 * (1.0 - b)) ** (i - 1)
    dmodeds += fa * tmp

    dmodedr *= 2.0 ** (i + 0.5)
    dmodeds *= 2.0 ** (i + 0.5)
    return dmodedr, dmodeds


def _warp_factor(degree, rout):
    """1D warp from equidistant to Gauss-Lobatto node positions, evaluated at rout."""
    lgl = gauss_lobatto_nodes(degree)
    req = np.linspace(-1.0, 1.0, degree + 1)
    veq = vandermonde_1d(degree, req)
    pmat = np.array([jacobi_normalized(rout, j) for j in range(degree + 1)])
    lmat = np.linalg.solve(veq.T, pmat)
    warp = lmat.T @ (lgl - req)
    zerof = (np.abs(rout) < 1.0 - 1e-10).astype(float)
    sf = 1.0 - (zerof * rout) ** 2
    return warp / sf + warp * (zerof - 1.0)


def triangle_nodes(degree):
    """Warp-and-blend interpolation nodes (r, s) on the bi-unit triangle."""
    if degree == 0:
        return np.array([-1.0 / 3.0]), np.array([-1.0 / 3.0])
    alpha = _ALPHA_OPT[degree - 1] if degree <= 15 else 5.0 / 3.0

    np_ = (degree + 1) * (degree + 2) // 2
    l1 = np.zeros(np_)
    l3 = np.zeros(np_)
    k = 0
    for n in range(degree + 1):
        for m in range(degree + 1 - n):
            l1[k] = n / degree
            l3[k] = m / degree
            k += 1
    l2 = 1.0 - l1 - l3
    x = -l2 + l3
    y = (-l2 - l3 + 2.0 * l1) / sqrt(3.0)

    blend1 = 4.0 * l2 * l3
    blend2 = 4.0 * l1 * l3
    blend3 = 4.0 * l1 * l2
    warpf1 = _warp_factor(degree, l3 - l2)
    warpf2 = _warp_factor(degree, l1 - l3)
    warpf3 = _warp_factor(degree, l2 - l1)
    warp1 = blend1 * warpf1 * (1.0 + (alpha * l1) ** 2)
    warp2 = blend2 * warpf2 * (1.0 + (alpha * l2) ** 2)
    warp3 = blend3 * warpf3 * (1.0 + (alpha * l3) ** 2)

    x = x + warp1 + np.cos(2.0 * np.pi / 3.0) * warp2 + np.cos(4.0 * np.pi / 3.0) * warp3
    y = y + np.sin(2.0 * np.pi / 3.0) * warp2 + np.sin(4.0 * np.pi / 3.0) * warp3

    # Map from the equilateral triangle back to the bi-unit right triangle.
    l1 = (sqrt(3.0) * y + 1.0) / 3.0
    l2 = (-3.0 * x - sqrt(3.0) * y + 2.0) / 6.0
    l3 = (3.0 * x - sqrt(3.0) * y + 2.0) / 6.0
    r = -l2 + l3 - l1
    s = -l2 - l3 + l1
    return r, s


def vandermonde_2d(degree, r, s):
    """Vandermonde matrix of the orthonormal Dubiner basis at (r, s)."""
    cols = []
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            cols.append(dubiner_2d(r, s, i, j))
    return np.column_stack(cols)


def grad_vandermonde_2d(degree, r, s):
    vr, vs = [], []
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            dr, ds = grad_dubiner_2d(r, s, i, j)
            vr.append(dr)
            vs.append(ds)
    return np.column_stack(vr), np.column_stack(vs)


@dataclass(frozen=True)
class ReferenceElement:
    """Immutable nodal basis data on a reference interval or triangle."""

    dim: int
    degree: int
    nodes: np.ndarray            # (Np, dim)
    vandermonde: np.ndarray      # (Np, Np), modal -> nodal
    diff_matrices: tuple         # one (Np, Np) matrix per reference direction
    mass: np.ndarray             # (Np, Np), SPD
    face_nodes: tuple            # per-face index arrays into nodes
    face_mass: tuple = field(repr=False, default=())   # per-face trace mass matrices
    lift: np.ndarray = field(repr=False, default=None)  # (Np, n_faces * Nfp)

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_faces(self):
        return 2 if self.dim == 1 else 3

    @property
    def n_face_nodes(self):
        return len(self.face_nodes[0])


class BasisConditionError(ValueError):
    """Raised when the requested nodal basis is numerically unusable."""


def build_reference_element(dim, degree, cond_cap=1e8):
    """Construct a :class:`ReferenceElement` for the given dimension and degree.

    Raises :class:`BasisConditionError` when the Vandermonde condition number
    exceeds ``cond_cap``.
    """
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")

    if dim == 1:
        x = gauss_lobatto_nodes(degree)
        v = vandermonde_1d(degree, x)
        vr = grad_vandermonde_1d(degree, x)
        nodes = x[:, None]
        diff = (vr @ np.linalg.inv(v),)
        # Faces are the endpoints; in degree 0 both faces share the single node.
        face_nodes = (np.array([0]), np.array([len(x) - 1]))
        face_mass = (np.array([[1.0]]), np.array([[1.0]]))
    else:
        r, s = triangle_nodes(degree)
        v = vandermonde_2d(degree, r, s)
        vr, vs = grad_vandermonde_2d(degree, r, s)
        vinv = np.linalg.inv(v)
        nodes = np.column_stack([r, s])
        diff = (vr @ vinv, vs @ vinv)
        tol = 1e-10
        f1 = np.where(np.abs(s + 1.0) < tol)[0]
        f2 = np.where(np.abs(r + s) < tol)[0]
        f3 = np.where(np.abs(r + 1.0) < tol)[0]
        # Order trace nodes counter-clockwise along each face.
        f1 = f1[np.argsort(r[f1])]
        f2 = f2[np.argsort(s[f2])]
        f3 = f3[np.argsort(-s[f3])]
        if degree == 0:
            f1 = f2 = f3 = np.array([0])
        face_nodes = (f1, f2, f3)
        face_mass = tuple(_edge_mass(degree, nodes, f) for f in face_nodes)

    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > cond_cap:
        raise BasisConditionError(
            f"Vandermonde condition number {cond:.3e} exceeds cap {cond_cap:.1e} "
            f"for dim={dim}, degree={degree}"
        )

    mass = np.linalg.inv(v @ v.T)
    lift = _build_lift(mass, face_nodes, face_mass, nodes.shape[0])
    return ReferenceElement(
        dim=dim,
        degree=degree,
        nodes=nodes,
        vandermonde=v,
        diff_matrices=diff,
        mass=mass,
        face_nodes=face_nodes,
        face_mass=face_mass,
        lift=lift,
    )


def _edge_mass(degree, nodes, face_idx):
    """1D mass matrix of the polynomial trace along a triangle edge."""
    if degree == 0:
        return np.array([[2.0]])
    pts = nodes[face_idx]
    # Arc-length parameter scaled to [-1, 1].
    t = np.linalg.norm(pts - pts[0], axis=1)
    t = 2.0 * t / t[-1] - 1.0
    v1 = vandermonde_1d(degree, t)
    return np.linalg.inv(v1 @ v1.T)


def _build_lift(mass, face_nodes, face_mass, n_nodes):
    nfp = len(face_nodes[0])
    emat = np.zeros((n_nodes, len(face_nodes) * nfp))
    for f, (idx, fm) in enumerate(zip(face_nodes, face_mass)):
        emat[idx, f * nfp:(f + 1) * nfp] = fm
    return np.linalg.solve(mass, emat)
