"""Hyperbolic systems, normal matrices, and numerical flux penalizations.

Supported systems: 1D/2D constant-coefficient advection and 1D/2D acoustics
in pressure-velocity form with unit wavespeed. Flux kinds: central, penalty,
upwind, and component-wise Lax-Friedrichs.
"""

from dataclasses import dataclass

import numpy as np

FLUX_KINDS = ("central", "penalty", "upwind", "lf")


@dataclass(frozen=True)
class HyperbolicSystem:
    """First-order system u_t + sum_i A_i u_{x_i} = 0 with symmetric constant A_i."""

    name: str
    dim: int
    n_fields: int
    coeff_matrices: tuple      # one (M, M) symmetric matrix per direction
    advection_vector: tuple | None = None

    def normal_matrix(self, n):
        """A_n = sum_i A_i n_i for a unit normal n."""
        n = np.atleast_1d(np.asarray(n, dtype=float))
        an = np.zeros((self.n_fields, self.n_fields))
        for i in range(self.dim):
            an += self.coeff_matrices[i] * n[i]
        return an

    def wall_mirror(self, n):
        """Ghost-state matrix G with u_ghost = G u_inner at a rigid wall.

        Acoustics only: pressure is copied, normal velocity flipped.
        """
        if not self.name.startswith("acoustics"):
            raise ValueError(f"no boundary rule for system {self.name!r}")
        n = np.atleast_1d(np.asarray(n, dtype=float))
        g = np.eye(self.n_fields)
        # velocity fields occupy indices 1..dim
        nv = n[: self.dim]
        g[1:, 1:] -= 2.0 * np.outer(nv, nv)
        return g


def make_system(name, beta=None):
    """Build a named system: advection1d, advection2d, acoustics1d, acoustics2d.

    ``beta`` is the advection vector (defaults: 1.0 in 1D, (1, 0) in 2D).
    """
    if name == "advection1d":
        b = (1.0,) if beta is None else (float(np.atleast_1d(beta)[0]),)
        return HyperbolicSystem(name, 1, 1, (np.array([[b[0]]]),), b)
    if name == "advection2d":
        b = (1.0, 0.0) if beta is None else tuple(float(x) for x in beta)
        return HyperbolicSystem(
            name, 2, 1, (np.array([[b[0]]]), np.array([[b[1]]])), b
        )
    if name == "acoustics1d":
        ax = np.array([[0.0, 1.0], [1.0, 0.0]])
        return HyperbolicSystem(name, 1, 2, (ax,))
    if name == "acoustics2d":
        ax = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        ay = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
        return HyperbolicSystem(name, 2, 3, (ax, ay))
    raise ValueError(f"unknown system {name!r}")


@dataclass(frozen=True)
class FluxConfig:
    kind: str
    tau: float = 0.0

    def __post_init__(self):
        if self.kind not in FLUX_KINDS:
            raise ValueError(f"unknown flux kind {self.kind!r}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")


@dataclass(frozen=True)
class NormalFluxData:
    """Per-normal flux data: A_n, its eigendecomposition, and the matrix
    multiplying the jump in the numerical flux."""

    a_n: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    penalization: np.ndarray


def normal_flux_data(system, n, flux):
    """Assemble :class:`NormalFluxData` for a unit normal and flux config."""
    n = np.atleast_1d(np.asarray(n, dtype=float))
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("normal must have unit length")
    an = system.normal_matrix(n)
    lam, vec = _real_eigendecomposition(an)

    if flux.kind == "central":
        pen = np.zeros_like(an)
    elif flux.kind == "penalty":
        pen = flux.tau / 2.0 * an.T @ an
    elif flux.kind == "upwind":
        pen = 0.5 * vec @ np.diag(np.abs(lam)) @ np.linalg.inv(vec)
    else:  # component-wise Lax-Friedrichs
        pen = flux.tau / 2.0 * np.eye(system.n_fields)
    return NormalFluxData(a_n=an, eigenvalues=lam, eigenvectors=vec, penalization=pen)


def _real_eigendecomposition(an):
    if np.allclose(an, an.T, atol=1e-14):
        lam, vec = np.linalg.eigh(an)
        return lam, vec
    lam, vec = np.linalg.eig(an)
    if np.abs(lam.imag).max() > 1e-10:
        raise ValueError("normal matrix has complex eigenvalues; system not hyperbolic")
    return lam.real, vec.real


def upwind_split(system, n):
    """A_n^+ and A_n^- built from the positive/negative eigenvalues."""
    data = normal_flux_data(system, n, FluxConfig("central"))
    lam, vec = data.eigenvalues, data.eigenvectors
    vinv = np.linalg.inv(vec)
    ap = 0.5 * vec @ np.diag(lam + np.abs(lam)) @ vinv
    am = 0.5 * vec @ np.diag(lam - np.abs(lam)) @ vinv
    return ap, am


def recommend_tau(system, n):
    """Penalty parameter 1 / (max_i |lambda_i| * cond(V)) for the normal n.

    Returns +inf when A_n vanishes (e.g. advection with beta orthogonal to n).
    """
    data = normal_flux_data(system, n, FluxConfig("central"))
    lam_max = np.abs(data.eigenvalues).max()
    if lam_max == 0.0:
        return np.inf
    cond_v = np.linalg.cond(data.eigenvectors)
    return 1.0 / (lam_max * cond_v)
