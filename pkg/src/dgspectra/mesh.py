"""Interval and bisected-quad triangular meshes with face connectivity.

Faces carry neighbor/side information and, for periodic identifications, the
translation taking the minus-side trace onto the plus side. Meshes are
immutable after construction.
"""

import json
from dataclasses import dataclass, field

import numpy as np

BOUNDARY = -1


@dataclass(frozen=True)
class Face:
    """One mesh face.

    Interior (and periodic) faces store both sides; boundary faces have
    ``elem_plus == BOUNDARY`` and a ``boundary_tag``.
    ``shift`` is the translation from minus-side coordinates to plus-side
    coordinates (nonzero only for periodic faces).
    """

    elem_minus: int
    face_minus: int
    elem_plus: int = BOUNDARY
    face_plus: int = BOUNDARY
    boundary_tag: str | None = None
    shift: tuple = (0.0, 0.0)

    @property
    def is_boundary(self):
        return self.elem_plus == BOUNDARY


@dataclass(frozen=True)
class Mesh:
    dim: int
    vertices: np.ndarray         # (n_vertices, dim)
    elements: np.ndarray         # (n_elements, dim + 1) vertex indices, CCW in 2D
    faces: tuple                 # of Face
    normals: np.ndarray          # (n_elements, n_local_faces, dim) outward unit normals
    jacobians: np.ndarray        # (n_elements,) affine map determinant
    surface_jacobians: np.ndarray  # (n_elements, n_local_faces)
    domain: tuple
    bc: str
    # (elem, local_face) -> (face index, side); side 0 = minus, 1 = plus
    face_lookup: dict = field(repr=False, default_factory=dict)

    @property
    def n_elements(self):
        return self.elements.shape[0]

    @property
    def n_local_faces(self):
        return self.dim + 1 if self.dim == 2 else 2

    def element_vertices(self, k):
        return self.vertices[self.elements[k]]

    def to_json(self):
        """Serialize the mesh description to a JSON string."""
        doc = {
            "dim": self.dim,
            "bc": self.bc,
            "domain": list(self.domain),
            "vertices": self.vertices.tolist(),
            "elements": self.elements.tolist(),
            "faces": [
                {
                    "elem_minus": f.elem_minus,
                    "face_minus": f.face_minus,
                    "elem_plus": f.elem_plus,
                    "face_plus": f.face_plus,
                    "boundary_tag": f.boundary_tag,
                    "shift": list(f.shift),
                }
                for f in self.faces
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _finish(dim, vertices, elements, faces, normals, jacobians, sjac, domain, bc):
    lookup = {}
    for i, f in enumerate(faces):
        lookup[(f.elem_minus, f.face_minus)] = (i, 0)
        if not f.is_boundary:
            lookup[(f.elem_plus, f.face_plus)] = (i, 1)
    return Mesh(
        dim=dim,
        vertices=vertices,
        elements=elements,
        faces=tuple(faces),
        normals=normals,
        jacobians=jacobians,
        surface_jacobians=sjac,
        domain=domain,
        bc=bc,
        face_lookup=lookup,
    )


def build_mesh_1d(n_elements, domain=(-1.0, 1.0), bc="periodic"):
    """Uniform 1D mesh on [a, b] with periodic or bounded faces."""
    a, b = float(domain[0]), float(domain[1])
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    if bc not in ("periodic", "bounded"):
        raise ValueError(f"unknown bc {bc!r}")

    vertices = np.linspace(a, b, n_elements + 1)[:, None]
    elements = np.column_stack([np.arange(n_elements), np.arange(1, n_elements + 1)])

    # Local face 0 = left endpoint, 1 = right endpoint.
    faces = []
    for k in range(n_elements - 1):
        faces.append(Face(elem_minus=k, face_minus=1, elem_plus=k + 1, face_plus=0))
    if bc == "periodic":
        faces.append(
            Face(
                elem_minus=n_elements - 1,
                face_minus=1,
                elem_plus=0,
                face_plus=0,
                shift=(a - b, 0.0),
            )
        )
    else:
        faces.append(Face(elem_minus=0, face_minus=0, boundary_tag="left"))
        faces.append(Face(elem_minus=n_elements - 1, face_minus=1, boundary_tag="right"))

    h = (b - a) / n_elements
    normals = np.tile(np.array([[[-1.0], [1.0]]]), (n_elements, 1, 1))
    jacobians = np.full(n_elements, h / 2.0)
    sjac = np.ones((n_elements, 2))
    return _finish(1, vertices, elements, faces, normals, jacobians, sjac, (a, b), bc)


def build_mesh_2d_bisected(nx, ny, domain=((-1.0, 1.0), (-1.0, 1.0)), bc="periodic"):
    """Triangular mesh from bisecting an nx-by-ny quad grid along the
    lower-left to upper-right diagonal of each quad."""
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be >= 1")
    (xa, xb), (ya, yb) = domain
    if not (xb > xa and yb > ya):
        raise ValueError(f"degenerate domain {domain}")
    if bc not in ("periodic", "wall"):
        raise ValueError(f"unknown bc {bc!r}")

    xs = np.linspace(xa, xb, nx + 1)
    ys = np.linspace(ya, yb, ny + 1)
    vid = lambda i, j: j * (nx + 1) + i
    vertices = np.array([[xs[i], ys[j]] for j in range(ny + 1) for i in range(nx + 1)])

    elements = []
    for j in range(ny):
        for i in range(nx):
            p00, p10 = vid(i, j), vid(i + 1, j)
            p11, p01 = vid(i + 1, j + 1), vid(i, j + 1)
            elements.append([p00, p10, p11])  # lower-right triangle
            elements.append([p00, p11, p01])  # upper-left triangle
    elements = np.array(elements)

    # Local face f joins local vertices (f, (f+1) % 3).
    edge_table = {}
    faces = []
    for k, tri in enumerate(elements):
        for lf in range(3):
            key = tuple(sorted((tri[lf], tri[(lf + 1) % 3])))
            if key in edge_table:
                km, lfm = edge_table.pop(key)
                faces.append(Face(elem_minus=km, face_minus=lfm, elem_plus=k, face_plus=lf))
            else:
                edge_table[key] = (k, lf)

    if bc == "periodic":
        faces.extend(_pair_periodic_edges(edge_table, elements, vertices, xa, xb, ya, yb))
        if edge_table:
            raise RuntimeError("unmatched boundary edges after periodic pairing")
    else:
        for (k, lf) in edge_table.values():
            faces.append(Face(elem_minus=k, face_minus=lf, boundary_tag="wall"))

    n_el = elements.shape[0]
    normals = np.zeros((n_el, 3, 2))
    jacobians = np.zeros(n_el)
    sjac = np.zeros((n_el, 3))
    for k, tri in enumerate(elements):
        v = vertices[tri]
        e1 = v[1] - v[0]
        e2 = v[2] - v[0]
        det = e1[0] * e2[1] - e1[1] * e2[0]
        if det <= 0:
            raise RuntimeError(f"element {k} is not counter-clockwise")
        jacobians[k] = det / 4.0  # ref triangle has area 2
        for lf in range(3):
            edge = vertices[tri[(lf + 1) % 3]] - vertices[tri[lf]]
            length = np.hypot(*edge)
            normals[k, lf] = np.array([edge[1], -edge[0]]) / length
            sjac[k, lf] = length / 2.0

    return _finish(
        2, vertices, elements, faces, normals, jacobians, sjac,
        (xa, xb, ya, yb), bc,
    )


def _pair_periodic_edges(edge_table, elements, vertices, xa, xb, ya, yb):
    """Match leftover boundary edges across the periodic box."""
    entries = []
    for key, (k, lf) in edge_table.items():
        a = vertices[elements[k][lf]]
        b = vertices[elements[k][(lf + 1) % 3]]
        entries.append(((k, lf), 0.5 * (a + b)))

    tol = 1e-10 * max(xb - xa, yb - ya)
    shifts = [np.array([xb - xa, 0.0]), np.array([0.0, yb - ya])]
    faces = []
    used = set()
    for i, ((k, lf), mid) in enumerate(entries):
        if i in used:
            continue
        for shift in shifts:
            match = None
            for j, ((k2, lf2), mid2) in enumerate(entries):
                if j == i or j in used:
                    continue
                if np.linalg.norm(mid + shift - mid2) < tol:
                    match = j
                    break
            if match is not None:
                k2, lf2 = entries[match][0]
                faces.append(
                    Face(
                        elem_minus=k,
                        face_minus=lf,
                        elem_plus=k2,
                        face_plus=lf2,
                        shift=tuple(shift),
                    )
                )
                used.add(i)
                used.add(match)
                break
        else:
            raise RuntimeError(f"no periodic partner for edge of element {k}")
    edge_table.clear()
    return faces


def element_coords(mesh, ref):
    """Physical coordinates of all reference nodes, shape (n_elements, Np, dim)."""
    if mesh.dim == 1:
        r = ref.nodes[:, 0]
        out = np.zeros((mesh.n_elements, ref.n_nodes, 1))
        for k in range(mesh.n_elements):
            v = mesh.element_vertices(k)[:, 0]
            out[k, :, 0] = v[0] + (r + 1.0) / 2.0 * (v[1] - v[0])
        return out
    r, s = ref.nodes[:, 0], ref.nodes[:, 1]
    out = np.zeros((mesh.n_elements, ref.n_nodes, 2))
    for k in range(mesh.n_elements):
        v = mesh.element_vertices(k)
        out[k] = (
            np.outer(-(r + s) / 2.0, v[0])
            + np.outer((1.0 + r) / 2.0, v[1])
            + np.outer((1.0 + s) / 2.0, v[2])
        )
    return out


def geometric_factors(mesh, ref):
    """dr_i/dx_j per element, shape (n_elements, dim, dim); entry [k, i, j]
    is the derivative of reference coordinate i w.r.t. physical coordinate j."""
    n_el = mesh.n_elements
    out = np.zeros((n_el, mesh.dim, mesh.dim))
    for k in range(n_el):
        v = mesh.element_vertices(k)
        if mesh.dim == 1:
            out[k, 0, 0] = 2.0 / (v[1, 0] - v[0, 0])
        else:
            # x = x(r, s) affine: dx/dr = (v2 - v1)/2, dx/ds = (v3 - v1)/2
            jac = np.column_stack([(v[1] - v[0]) / 2.0, (v[2] - v[0]) / 2.0])
            out[k] = np.linalg.inv(jac)
    return out


def face_trace_permutation(mesh, ref, face_index):
    """Permutation aligning the minus-side trace nodes with the plus side.

    Returns ``perm`` such that plus-trace node ``perm[m]`` coincides
    geometrically with minus-trace node ``m`` (after the periodic shift).
    """
    face = mesh.faces[face_index]
    if face.is_boundary:
        raise ValueError("boundary faces have no plus side")
    if ref.degree == 0:
        # The single node sits at the element centroid, not on the face;
        # a constant trace needs no alignment.
        return np.zeros(len(ref.face_nodes[face.face_minus]), dtype=int)
    coords = element_coords(mesh, ref)
    xm = coords[face.elem_minus][ref.face_nodes[face.face_minus]]
    xp = coords[face.elem_plus][ref.face_nodes[face.face_plus]]
    shift = np.asarray(face.shift[: mesh.dim])
    target = xm + shift
    perm = np.empty(len(xm), dtype=int)
    scale = max(1.0, np.abs(xp).max())
    for m, x in enumerate(target):
        d = np.linalg.norm(xp - x, axis=1)
        j = int(np.argmin(d))
        if d[j] > 1e-12 * scale:
            raise RuntimeError(
                f"trace nodes of face {face_index} do not match: residual {d[j]:.3e}"
            )
        perm[m] = j
    if len(set(perm.tolist())) != len(perm):
        raise RuntimeError(f"degenerate trace matching on face {face_index}")
    return perm
