"""Generalized spectra K u = lambda M u, Gerschgorin disc structure, and
eigenvector partitioning into conforming / non-conforming components."""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray                 # sorted: real desc, imag asc
    eigenvectors: np.ndarray = field(repr=False)  # columns, M-normalized
    tau: float = 0.0


@dataclass(frozen=True)
class GerschgorinStructure:
    conforming_centers: np.ndarray
    conforming_radii: np.ndarray
    nonconforming_centers: np.ndarray
    nonconforming_radii: np.ndarray
    disjoint: bool


def sort_order(lam):
    """Deterministic eigenvalue ordering: real part descending, then imag ascending."""
    return np.lexsort((lam.imag, -lam.real))


def compute_spectrum(k_matrix, m_matrix, tau=0.0, chol=None):
    """Dense generalized spectrum via the SPD factorization of M.

    Reduces to a standard eigenproblem on L^{-1} K L^{-T}, then maps the
    eigenvectors back and M-normalizes them.
    """
    if chol is None:
        chol = np.linalg.cholesky(m_matrix)
    tmp = sla.solve_triangular(chol, k_matrix, lower=True)
    reduced = sla.solve_triangular(chol, tmp.T, lower=True).T
    lam, w = np.linalg.eig(reduced)
    vec = sla.solve_triangular(chol.T, w, lower=False)
    # L^{-T} of orthonormal-ish columns; renormalize in the M inner product.
    norms = np.sqrt(np.einsum("ij,ij->j", vec.conj(), m_matrix @ vec).real)
    vec = vec / norms
    order = sort_order(lam)
    return Spectrum(eigenvalues=lam[order], eigenvectors=vec[:, order], tau=tau)


def spectrum_of_operator(op, tau=None):
    t = op.flux.tau if tau is None else tau
    return compute_spectrum(op.k_at(t), op.m_matrix, tau=t, chol=op.mass_cholesky())


def residuals(spec, k_matrix, m_matrix):
    """Per-pair relative residuals ||K v - lam M v|| / ||K||."""
    kv = k_matrix @ spec.eigenvectors
    mv = m_matrix @ spec.eigenvectors
    r = kv - spec.eigenvalues[None, :] * mv
    return np.linalg.norm(r, axis=0) / max(np.linalg.norm(k_matrix), 1e-300)


def unitary_diagonalization_skew(a):
    """Unitary U and purely imaginary eigenvalues of a real skew-symmetric A.

    Uses the Hermitian matrix 1j*A, so U is unitary even with repeated
    eigenvalues.
    """
    mu, u = np.linalg.eigh(1j * a)
    return -1j * mu, u


def gerschgorin_structure(blocks, tau, unitary_tol=1e-6):
    """Disc centers/radii of the block-diagonally transformed operator.

    The transform diagonalizes A (skew) and S (symmetric) unitarily; disc
    radii are off-diagonal absolute row sums and are independent of tau.
    """
    lam_c, u = unitary_diagonalization_skew(blocks.a_block)
    cond_u = np.linalg.cond(u)
    if cond_u > 1.0 + unitary_tol:
        raise RuntimeError(f"diagonalizer of A is not unitary: cond = {cond_u}")
    lam_s, q = np.linalg.eigh(blocks.s_block)

    nc_ = blocks.a_block.shape[0]
    top = np.hstack([np.diag(lam_c), u.conj().T @ blocks.b_block @ q])
    cqc = q.T @ blocks.c_block @ q
    bottom = np.hstack([-q.T @ blocks.b_block.T @ u, cqc + tau * np.diag(lam_s)])
    kt = np.vstack([top, bottom])

    diag = np.diag(kt).copy()
    radii = np.sum(np.abs(kt), axis=1) - np.abs(diag)
    centers_c, radii_c = diag[:nc_], radii[:nc_]
    centers_nc, radii_nc = diag[nc_:], radii[nc_:]

    disjoint = True
    for ci, ri in zip(centers_c, radii_c):
        if np.any(np.abs(ci - centers_nc) <= ri + radii_nc):
            disjoint = False
            break
    return GerschgorinStructure(
        conforming_centers=centers_c,
        conforming_radii=radii_c,
        nonconforming_centers=centers_nc,
        nonconforming_radii=radii_nc,
        disjoint=disjoint,
    )


def count_in_conforming_discs(structure, eigenvalues):
    """How many of the given eigenvalues lie in the conforming disc union."""
    lam = np.asarray(eigenvalues)
    inside = np.zeros(lam.shape, dtype=bool)
    for c, r in zip(structure.conforming_centers, structure.conforming_radii):
        inside |= np.abs(lam - c) <= r * (1 + 1e-12) + 1e-12
    return int(np.sum(inside))


def eigenvector_partition(spec, split):
    """Norms (||W^C||, ||W^NC||) of each eigenvector's conforming and
    non-conforming components; squares sum to one for M-normalized vectors."""
    mv = split.m_matrix @ spec.eigenvectors
    wc = split.basis_c.T @ mv
    wnc = split.basis_nc.T @ mv
    return np.linalg.norm(wc, axis=0), np.linalg.norm(wnc, axis=0)
