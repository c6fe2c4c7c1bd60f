"""Flux-induced conforming subspace and the A/B/C/S block decomposition.

The conforming space is the nullspace of the jump-penalization constraints
collected over all faces; the non-conforming space is its M-orthogonal
complement. Bases are M-orthonormal, so projecting K onto them preserves
the generalized spectrum.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla


class RankAmbiguityError(RuntimeError):
    """Raised when the constraint rank cannot be determined reliably."""


@dataclass(frozen=True)
class ConformingSplit:
    constraint_matrix: np.ndarray = field(repr=False)
    basis_c: np.ndarray = field(repr=False)    # (n, N^C), M-orthonormal
    basis_nc: np.ndarray = field(repr=False)   # (n, N^{NC}), M-orthonormal
    m_matrix: np.ndarray = field(repr=False)

    @property
    def dims(self):
        return self.basis_c.shape[1], self.basis_nc.shape[1]


@dataclass(frozen=True)
class BlockDecomposition:
    a_block: np.ndarray = field(repr=False)   # conforming-conforming, skew
    b_block: np.ndarray = field(repr=False)   # conforming/non-conforming coupling
    c_block: np.ndarray = field(repr=False)   # non-conforming skew part
    s_block: np.ndarray = field(repr=False)   # symmetric negative definite, times tau

    def projected(self, tau):
        """The full projected operator [[A, B], [-B^T, C + tau S]]."""
        top = np.hstack([self.a_block, self.b_block])
        bottom = np.hstack([-self.b_block.T, self.c_block + tau * self.s_block])
        return np.vstack([top, bottom])


def constraint_matrix(op):
    """Jump constraint rows: one per (face, trace node, penalized component).

    For penalty and upwind fluxes the constraint is A_n [u] = 0 (they induce
    the same nullspace); for the component-wise Lax-Friedrichs flux every
    field jump is constrained.
    """
    kind = op.flux.kind
    if kind in ("penalty", "upwind"):
        cmat_of = lambda fd: fd.a_n
    elif kind == "lf":
        cmat_of = lambda fd: np.eye(op.system.n_fields)
    else:
        raise ValueError("central fluxes induce no constraints; use penalty/upwind/lf")

    nf = op.system.n_fields
    rows = []
    for fd in op.face_data:
        cmat = cmat_of(fd)
        fm = op.ref.face_nodes[fd.face_minus]
        if fd.is_boundary:
            jump_op = cmat @ (fd.ghost - np.eye(nf))
        else:
            fm_p = op.ref.face_nodes[fd.face_plus][fd.perm]
        for m in range(len(fm)):
            for c in range(nf):
                row = np.zeros(op.n)
                if fd.is_boundary:
                    for g in range(nf):
                        if jump_op[c, g] != 0.0:
                            row[op.global_index(fd.elem_minus, g, fm[m])] += jump_op[c, g]
                else:
                    for g in range(nf):
                        if cmat[c, g] != 0.0:
                            row[op.global_index(fd.elem_plus, g, fm_p[m])] += cmat[c, g]
                            row[op.global_index(fd.elem_minus, g, fm[m])] -= cmat[c, g]
                if np.any(row != 0.0):
                    rows.append(row)
    if not rows:
        return np.zeros((0, op.n))
    return np.array(rows)


def build_conforming_split(op, rank_rtol=1e-9):
    """Split the DG space into conforming / non-conforming M-orthonormal bases."""
    g = constraint_matrix(op)
    n = op.n
    chol = op.mass_cholesky()

    if g.shape[0] == 0:
        basis_c = sla.solve_triangular(chol.T, np.eye(n), lower=False)
        return ConformingSplit(g, basis_c, np.zeros((n, 0)), op.m_matrix)

    u_, sv, vt = np.linalg.svd(g, full_matrices=True)
    thresh = rank_rtol * sv[0]
    near = (sv > thresh / 10) & (sv < thresh * 10)
    if np.any(near):
        raise RankAmbiguityError(
            f"singular values {sv[near]} lie within a decade of threshold {thresh:.3e}"
        )
    rank = int(np.sum(sv > thresh))
    null_basis = vt[rank:].T                       # Euclidean-orthonormal nullspace of G

    # M-orthonormalize: Phi = Z R^{-1} with L^T Z = Q R.
    zt = chol.T @ null_basis
    q, r = np.linalg.qr(zt)
    basis_c = sla.solve_triangular(chol.T, q, lower=False)

    # M-orthogonal complement via the orthogonal complement of range(q).
    u_full, _, _ = np.linalg.svd(q, full_matrices=True)
    q_nc = u_full[:, q.shape[1]:]
    basis_nc = sla.solve_triangular(chol.T, q_nc, lower=False)
    return ConformingSplit(g, basis_c, basis_nc, op.m_matrix)


def block_decompose(op, split, tau_probe=(0.0, 1.0)):
    """Extract the blocks A, B, C, S of the projected operator.

    S is recovered by differencing K at two penalty parameters, which is
    exact because K depends affinely on tau.
    """
    if op.flux.kind not in ("penalty", "lf"):
        raise ValueError("block decomposition needs a tau-dependent flux kind")
    phi, psi = split.basis_c, split.basis_nc
    t0, t1 = tau_probe
    k0 = op.k_at(t0)
    k1 = op.k_at(t1)

    a = phi.T @ k0 @ phi
    b = phi.T @ k0 @ psi
    c = psi.T @ k0 @ psi - t0 * (psi.T @ (k1 - k0) @ psi) / (t1 - t0)
    s = (psi.T @ (k1 - k0) @ psi) / (t1 - t0)
    # c above subtracts the tau part sampled at t0, leaving the tau-free block.
    return BlockDecomposition(a_block=a, b_block=b, c_block=c, s_block=s)


def conforming_spectrum(blocks):
    """Eigenvalues of the skew-symmetric conforming block A (purely imaginary)."""
    a = blocks.a_block
    # 1j * A is Hermitian for skew-symmetric real A.
    mu = np.linalg.eigvalsh(1j * a)
    lam = -1j * mu
    order = np.lexsort((lam.imag, -lam.real))
    return lam[order]


def conforming_dimension_oracle(system_name, mesh, degree):
    """Independent conforming-dimension count from standard FE dof formulas.

    1D advection (periodic): one continuity constraint per face.
    2D acoustics: C0 Lagrange pressure dofs plus H(div)/BDM velocity dofs,
    counted from mesh entities (periodic identification collapses boundary
    entities; wall constrains boundary normal velocity).
    """
    n = degree
    if system_name == "advection1d":
        k = mesh.n_elements
        if mesh.bc != "periodic":
            raise ValueError("1D advection oracle assumes a periodic mesh")
        return k * n
    if system_name != "acoustics2d":
        raise ValueError(f"no dimension oracle for {system_name!r}")

    tris = mesh.n_elements
    if mesh.bc == "periodic":
        edges = len(mesh.faces)
        # On a torus: V - E + F = 0.
        vertices = edges - tris
        c0 = vertices + edges * (n - 1) + tris * (n - 1) * (n - 2) // 2
        bdm = edges * (n + 1) + tris * (n + 1) * (n - 1)
        return c0 + bdm
    interior = sum(not f.is_boundary for f in mesh.faces)
    boundary = sum(f.is_boundary for f in mesh.faces)
    edges = interior + boundary
    vertices = 1 + edges - tris  # Euler: V - E + F = 2 with outer face
    c0 = vertices + edges * (n - 1) + tris * (n - 1) * (n - 2) // 2
    # Wall: normal velocity vanishes on boundary edges.
    bdm = interior * (n + 1) + tris * (n + 1) * (n - 1)
    return c0 + bdm
