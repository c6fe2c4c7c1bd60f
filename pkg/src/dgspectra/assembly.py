"""Global DG matrix assembly.

Assembles the semi-discrete system M du/dt = K u for a mesh, reference
element, hyperbolic system, and numerical flux. K is stored dense and split
as K = K_base + scale * K_pen, where K_base is the tau-independent
(central-flux) part and K_pen the jump penalization assembled at unit
parameter; for penalty and Lax-Friedrichs kinds scale = tau, for upwind
fluxes the penalization is fixed (scale = 1).

Global dof layout: index = (element * n_fields + field) * Np + node.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .mesh import element_coords, face_trace_permutation, geometric_factors
from .pde import FluxConfig, normal_flux_data


@dataclass(frozen=True)
class FaceData:
    """Precomputed geometric and flux data for one unique mesh face."""

    elem_minus: int
    face_minus: int
    elem_plus: int            # -1 for boundary
    face_plus: int
    perm: np.ndarray | None   # plus trace index matching each minus trace node
    face_mass: np.ndarray     # physical trace mass matrix (minus side)
    a_n: np.ndarray           # normal matrix, minus-side normal
    penalization: np.ndarray  # jump penalization at unit parameter
    ghost: np.ndarray | None  # boundary mirror matrix, or None

    @property
    def is_boundary(self):
        return self.elem_plus < 0


@dataclass(frozen=True)
class DGOperator:
    """Assembled DG operator with the mass matrix and dof metadata."""

    k_base: np.ndarray = field(repr=False)
    k_pen: np.ndarray = field(repr=False)
    m_matrix: np.ndarray = field(repr=False)
    mesh: object
    ref: object
    system: object
    flux: FluxConfig
    face_data: tuple = field(repr=False, default=())
    _cache: dict = field(repr=False, default_factory=dict)

    @property
    def n(self):
        return self.k_base.shape[0]

    @property
    def k_matrix(self):
        return self.k_at(self.flux.tau)

    def k_at(self, tau):
        """K at penalty parameter tau (exact: K is affine in tau)."""
        if self.flux.kind == "central":
            return self.k_base.copy()
        if self.flux.kind == "upwind":
            return self.k_base + self.k_pen
        return self.k_base + tau * self.k_pen

    def global_index(self, elem, fld, node):
        np_ = self.ref.n_nodes
        return (elem * self.system.n_fields + fld) * np_ + node

    def dof_info(self, i):
        """Inverse dof map: global index -> (element, field, node)."""
        np_ = self.ref.n_nodes
        node = i % np_
        rest = i // np_
        return rest // self.system.n_fields, rest % self.system.n_fields, node

    def field_slice(self, elem, fld):
        np_ = self.ref.n_nodes
        base = (elem * self.system.n_fields + fld) * np_
        return np.arange(base, base + np_)

    def mass_cholesky(self):
        """Lower Cholesky factor of M, cached."""
        if "chol" not in self._cache:
            self._cache["chol"] = np.linalg.cholesky(self.m_matrix)
        return self._cache["chol"]

    def apply(self, u):
        """M^{-1} K u for a state vector u."""
        u = np.asarray(u)
        if u.shape[0] != self.n:
            raise ValueError(f"state length {u.shape[0]} != {self.n}")
        if "cho" not in self._cache:
            self._cache["cho"] = cho_factor(self.m_matrix, lower=True)
        return cho_solve(self._cache["cho"], self.k_matrix @ u)


def assemble(mesh, ref, system, flux):
    """Assemble the global DG operator for the given configuration."""
    if mesh.dim != ref.dim:
        raise ValueError(f"mesh dim {mesh.dim} != reference element dim {ref.dim}")
    if system.dim != mesh.dim:
        raise ValueError(f"system dim {system.dim} != mesh dim {mesh.dim}")
    has_boundary = any(f.is_boundary for f in mesh.faces)
    if has_boundary and not system.name.startswith("acoustics"):
        raise ValueError(
            f"mesh has boundary faces but system {system.name!r} has no boundary rule"
        )

    nf = system.n_fields
    np_ = ref.n_nodes
    n = mesh.n_elements * nf * np_
    k_base = np.zeros((n, n))
    k_pen = np.zeros((n, n))
    m_glob = np.zeros((n, n))

    gf = geometric_factors(mesh, ref)
    jac = mesh.jacobians

    def rows(k, f):
        base = (k * nf + f) * np_
        return base

    # Volume terms: (A_i U, dV/dx_i) and the per-field mass blocks.
    for k in range(mesh.n_elements):
        mk = jac[k] * ref.mass
        for f in range(nf):
            b = rows(k, f)
            m_glob[b:b + np_, b:b + np_] = mk
        for i in range(mesh.dim):
            dx = sum(gf[k, j, i] * ref.diff_matrices[j] for j in range(mesh.dim))
            gmat = dx.T @ mk
            ai = system.coeff_matrices[i]
            for f in range(nf):
                for g in range(nf):
                    if ai[f, g] != 0.0:
                        rb, cb = rows(k, f), rows(k, g)
                        k_base[rb:rb + np_, cb:cb + np_] += ai[f, g] * gmat

    # Surface terms: -<A_n {U} - T [U], V^-> per element face.
    unit_flux = FluxConfig(flux.kind, tau=1.0) if flux.kind in ("penalty", "lf") else flux
    face_data = []
    for fi, face in enumerate(mesh.faces):
        perm = None if face.is_boundary else face_trace_permutation(mesh, ref, fi)
        nvec = mesh.normals[face.elem_minus, face.face_minus]
        nfd = normal_flux_data(system, nvec, unit_flux)
        sj = mesh.surface_jacobians[face.elem_minus, face.face_minus]
        mf = sj * ref.face_mass[face.face_minus]
        ghost = system.wall_mirror(nvec) if face.is_boundary else None
        fd = FaceData(
            elem_minus=face.elem_minus,
            face_minus=face.face_minus,
            elem_plus=face.elem_plus,
            face_plus=face.face_plus,
            perm=perm,
            face_mass=mf,
            a_n=nfd.a_n,
            penalization=nfd.penalization,
            ghost=ghost,
        )
        face_data.append(fd)

        if face.is_boundary:
            _add_face_terms(
                k_base, k_pen, ref, fd, nf, np_,
                side_elem=face.elem_minus, side_face=face.face_minus,
                nb_elem=None, nb_face=None, nb_perm=None,
                a_n=fd.a_n, pen=fd.penalization, mf=mf, ghost=ghost,
            )
        else:
            # Minus side.
            _add_face_terms(
                k_base, k_pen, ref, fd, nf, np_,
                side_elem=face.elem_minus, side_face=face.face_minus,
                nb_elem=face.elem_plus, nb_face=face.face_plus, nb_perm=perm,
                a_n=fd.a_n, pen=fd.penalization, mf=mf, ghost=None,
            )
            # Plus side: opposite normal, inverse trace permutation.
            inv_perm = np.empty_like(perm)
            inv_perm[perm] = np.arange(len(perm))
            sj_p = mesh.surface_jacobians[face.elem_plus, face.face_plus]
            mf_p = sj_p * ref.face_mass[face.face_plus]
            nvec_p = mesh.normals[face.elem_plus, face.face_plus]
            nfd_p = normal_flux_data(system, nvec_p, unit_flux)
            _add_face_terms(
                k_base, k_pen, ref, fd, nf, np_,
                side_elem=face.elem_plus, side_face=face.face_plus,
                nb_elem=face.elem_minus, nb_face=face.face_minus, nb_perm=inv_perm,
                a_n=nfd_p.a_n, pen=nfd_p.penalization, mf=mf_p, ghost=None,
            )

    return DGOperator(
        k_base=k_base,
        k_pen=k_pen,
        m_matrix=m_glob,
        mesh=mesh,
        ref=ref,
        system=system,
        flux=flux,
        face_data=tuple(face_data),
    )


def _add_face_terms(k_base, k_pen, ref, fd, nf, np_, *, side_elem, side_face,
                    nb_elem, nb_face, nb_perm, a_n, pen, mf, ghost):
    fm_self = ref.face_nodes[side_face]

    def block(mat, f, g, elem, face_nodes, coef):
        r = (side_elem * nf + f) * np_ + fm_self
        c = (elem * nf + g) * np_ + face_nodes
        mat[np.ix_(r, c)] += coef * mf

    half_an = 0.5 * a_n
    if ghost is not None:
        central = half_an @ (np.eye(nf) + ghost)
        pencoef = pen @ (ghost - np.eye(nf))
        for f in range(nf):
            for g in range(nf):
                if central[f, g] != 0.0:
                    block(k_base, f, g, side_elem, fm_self, -central[f, g])
                if pencoef[f, g] != 0.0:
                    block(k_pen, f, g, side_elem, fm_self, pencoef[f, g])
        return

    fm_nb = ref.face_nodes[nb_face][nb_perm]
    for f in range(nf):
        for g in range(nf):
            if half_an[f, g] != 0.0:
                block(k_base, f, g, side_elem, fm_self, -half_an[f, g])
                block(k_base, f, g, nb_elem, fm_nb, -half_an[f, g])
            if pen[f, g] != 0.0:
                block(k_pen, f, g, side_elem, fm_self, -pen[f, g])
                block(k_pen, f, g, nb_elem, fm_nb, pen[f, g])


def face_jump_energy(op, u):
    """Sum over unique faces of ||A_n [u]||^2 in the face L2 norm.

    The semi-discrete energy satisfies d/dt ||u||_M^2 = -tau * (this value)
    for the penalty flux.
    """
    u = np.asarray(u, dtype=float)
    nf = op.system.n_fields
    total = 0.0
    for fd in op.face_data:
        fm = op.ref.face_nodes[fd.face_minus]
        nfp = len(fm)
        trace_minus = np.empty((nfp, nf))
        for g in range(nf):
            trace_minus[:, g] = u[op.field_slice(fd.elem_minus, g)[fm]]
        if fd.is_boundary:
            jump = trace_minus @ (fd.ghost - np.eye(nf)).T
        else:
            fm_p = op.ref.face_nodes[fd.face_plus][fd.perm]
            trace_plus = np.empty((nfp, nf))
            for g in range(nf):
                trace_plus[:, g] = u[op.field_slice(fd.elem_plus, g)[fm_p]]
            jump = trace_plus - trace_minus
        anj = jump @ fd.a_n.T
        contrib = np.einsum("mf,mn,nf->", anj, fd.face_mass, anj)
        # Boundary faces are visited once in the element-boundary sum,
        # interior faces twice.
        total += 0.5 * contrib if fd.is_boundary else contrib
    return total


def export_matrices(op, path_prefix):
    """Write K and M in Matrix Market format: <prefix>_K.mtx, <prefix>_M.mtx."""
    from scipy.io import mmwrite
    from scipy.sparse import csr_matrix

    k_path = f"{path_prefix}_K.mtx"
    m_path = f"{path_prefix}_M.mtx"
    mmwrite(k_path, csr_matrix(op.k_matrix))
    mmwrite(m_path, csr_matrix(op.m_matrix))
    return k_path, m_path
