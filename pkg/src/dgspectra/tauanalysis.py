"""Penalty-parameter sweeps: eigenvalue path tracking, classification,
divergence/convergence rate fits, returning-mode detection, and modal
expansion in the tau = 1 eigenbasis."""

from dataclasses import dataclass, field

import numpy as np

from .conforming import block_decompose, build_conforming_split, conforming_spectrum
from .spectral import spectrum_of_operator

CONFORMING = "conforming_limit"
DIVERGENT = "divergent"
UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SpectrumSweep:
    taus: np.ndarray
    spectra: tuple                      # Spectrum per tau
    path_indices: np.ndarray = field(repr=False)  # (n, n_taus) index into each spectrum
    classification: tuple = ()          # per path
    conforming_eigenvalues: np.ndarray | None = None  # eig(A) targets
    unresolved: tuple = ()              # (tau0, tau1) steps with ambiguous matching

    @property
    def n_paths(self):
        return self.path_indices.shape[0]

    def path_values(self):
        """Eigenvalues along each path, shape (n_paths, n_taus)."""
        out = np.empty(self.path_indices.shape, dtype=complex)
        for j, spec in enumerate(self.spectra):
            out[:, j] = spec.eigenvalues[self.path_indices[:, j]]
        return out

    def path_eigenvector(self, path, tau_index):
        return self.spectra[tau_index].eigenvectors[:, self.path_indices[path, tau_index]]


@dataclass(frozen=True)
class ModalExpansion:
    coefficients: np.ndarray
    damping: np.ndarray        # Re(lambda_j) at tau = 1 per coefficient
    residual: float


def greedy_match(a, b, abs_tol):
    """Greedy nearest-neighbor bipartite matching of eigenvalue lists.

    Returns (perm, ambiguous) with b[perm[i]] assigned to a[i]. A step is
    ambiguous when some assignment distance exceeds half the runner-up
    distance (and is above the absolute tolerance); competing targets that
    are themselves within the tolerance of each other are interchangeable
    and do not count as ambiguous.
    """
    n = len(a)
    d = np.abs(a[:, None] - b[None, :])
    perm = _clean_nearest_match(d, abs_tol)
    if perm is not None:
        return perm, False

    # Greedy selection of globally smallest free-free distances, walking the
    # sorted edge list once.
    order = np.argsort(d, axis=None)
    rows, cols = np.unravel_index(order, d.shape)
    dist = d[rows, cols]
    db = np.abs(b[:, None] - b[None, :])
    perm = np.full(n, -1)
    free_a = np.ones(n, dtype=bool)
    free_b = np.ones(n, dtype=bool)
    ambiguous = False
    assigned = 0
    for p in range(len(rows)):
        i, j = rows[p], cols[p]
        if not (free_a[i] and free_b[j]):
            continue
        d1 = dist[p]
        if d1 > abs_tol and not ambiguous:
            # Runner-up: the next free edge sharing either endpoint.
            d2 = np.inf
            j2 = -1
            for q in range(p + 1, len(rows)):
                iq, jq = rows[q], cols[q]
                if iq == i and free_b[jq]:
                    d2, j2 = dist[q], jq
                    break
                if jq == j and free_a[iq]:
                    d2 = dist[q]
                    break
            if d1 > 0.5 * d2:
                # Competing targets within tolerance of each other are
                # interchangeable and resolve nothing by refinement.
                if not (j2 >= 0 and db[j, j2] <= abs_tol):
                    ambiguous = True
        perm[i] = j
        free_a[i] = False
        free_b[j] = False
        assigned += 1
        if assigned == n:
            break
    return perm, ambiguous


def _clean_nearest_match(d, abs_tol):
    """Row-wise nearest-neighbor assignment, if it is a permutation with
    decisive margins everywhere; greedy selection then coincides with it.
    Returns the permutation, or None when the exact greedy pass is needed.
    """
    n = d.shape[0]
    if n < 2:
        return np.zeros(n, dtype=int) if n == 1 else None
    jmin = np.argmin(d, axis=1)
    if len(np.unique(jmin)) != n:
        return None
    d1 = d[np.arange(n), jmin]
    row2 = np.partition(d, 1, axis=1)[:, 1]
    dcol = d.copy()
    dcol[np.arange(n), jmin] = np.inf
    col2 = dcol[:, jmin].min(axis=0)
    d2 = np.minimum(row2, col2)
    if np.all((d1 <= abs_tol) | (d1 <= 0.5 * d2)):
        return jmin
    return None


def sweep(op, taus, min_step=1e-4, match_tol=1e-9, classify=True,
          blocks=None, split=None):
    """Compute spectra over a tau sample list and track eigenvalue paths.

    Matching between consecutive spectra is greedy nearest-neighbor; when a
    step is ambiguous the interval is bisected (extra spectra are computed,
    exploiting that K is affine in tau) down to ``min_step``.
    """
    taus = np.asarray(sorted(float(t) for t in taus))
    if len(taus) < 2:
        raise ValueError("need at least two tau samples")
    if op.flux.kind not in ("penalty", "lf"):
        raise ValueError("sweep requires a tau-dependent flux kind")

    spectra = [spectrum_of_operator(op, t) for t in taus]
    n = op.n

    path_indices = np.empty((n, len(taus)), dtype=int)
    path_indices[:, 0] = np.arange(n)
    unresolved = []

    # Midpoint refinement needs eigenvalues only; work on the Cholesky-reduced
    # operator, which is affine in tau.
    import scipy.linalg as sla

    chol = op.mass_cholesky()

    def _reduce(k):
        tmp = sla.solve_triangular(chol, k, lower=True)
        return sla.solve_triangular(chol, tmp.T, lower=True).T

    r0 = _reduce(op.k_at(0.0))
    r1 = _reduce(op.k_at(1.0)) - r0
    cache = {}

    def eigenvalues_at(t):
        if t not in cache:
            cache[t] = np.linalg.eigvals(r0 + t * r1)
        return cache[t]

    for j in range(len(taus) - 1):
        a_vals = spectra[j].eigenvalues[path_indices[:, j]]
        perm, events = _match_with_refinement(
            a_vals, taus[j], taus[j + 1], spectra[j + 1].eigenvalues,
            eigenvalues_at, match_tol, min_step,
        )
        path_indices[:, j + 1] = perm
        unresolved.extend(events)

    classification = ()
    lam_a = None
    if classify:
        if blocks is None:
            if split is None:
                split = build_conforming_split(op)
            blocks = block_decompose(op, split)
        lam_a = conforming_spectrum(blocks)
        classification = _classify(op, spectra, path_indices, taus, lam_a)

    return SpectrumSweep(
        taus=taus,
        spectra=tuple(spectra),
        path_indices=path_indices,
        classification=classification,
        conforming_eigenvalues=lam_a,
        unresolved=tuple(unresolved),
    )


def _match_with_refinement(a_vals, t0, t1, b_eigs, eigenvalues_at, match_tol,
                           min_step):
    # Matching tolerance relative to the magnitude of the spectra being paired.
    abs_tol = match_tol * max(np.abs(a_vals).max(), np.abs(b_eigs).max(), 1.0)
    perm = _clean_nearest_match(np.abs(a_vals[:, None] - b_eigs[None, :]), abs_tol)
    if perm is not None:
        return perm, []
    if t1 - t0 <= min_step:
        perm, ambiguous = greedy_match(a_vals, b_eigs, abs_tol)
        return perm, ([(t0, t1)] if ambiguous else [])
    tm = 0.5 * (t0 + t1)
    mid = eigenvalues_at(tm)
    perm_am, ev1 = _match_with_refinement(
        a_vals, t0, tm, mid, eigenvalues_at, match_tol, min_step)
    mid_vals = mid[perm_am]
    perm_mb, ev2 = _match_with_refinement(
        mid_vals, tm, t1, b_eigs, eigenvalues_at, match_tol, min_step)
    return perm_mb, ev1 + ev2


def _classify(op, spectra, path_indices, taus, lam_a,
              conforming_tol=None, divergence_factor=10.0):
    spec0 = spectrum_of_operator(op, 0.0)
    rho0 = np.abs(spec0.eigenvalues).max()
    tau_max = taus[-1]
    if conforming_tol is None:
        conforming_tol = max(1e-2, 100.0 / tau_max)
    final = spectra[-1].eigenvalues[path_indices[:, -1]]
    out = []
    for lam in final:
        if lam.real < -divergence_factor * rho0:
            out.append(DIVERGENT)
        elif np.abs(lam - lam_a).min() < conforming_tol:
            out.append(CONFORMING)
        else:
            out.append(UNCLASSIFIED)
    return tuple(out)


def verify_lemma_rates(swp, blocks, slope_rtol=0.05):
    """Fit divergence slopes and conforming convergence rates over the sweep.

    Divergent paths: least-squares slope of Re(lambda) vs tau over the top
    decade, compared (sorted) against the eigenvalues of S. Conforming
    paths: log-log slope of the distance to eig(A); paths already at the
    numerical floor are excluded from the fit.
    """
    taus = swp.taus
    vals = swp.path_values()
    lam_a = swp.conforming_eigenvalues
    lam_s = np.linalg.eigvalsh(blocks.s_block)
    tau_max = taus[-1]
    top = taus >= tau_max / 10 - 1e-12
    if np.sum(top) < 2:
        raise ValueError("sweep does not resolve the top decade of tau")

    slopes = []
    for p in range(swp.n_paths):
        if swp.classification[p] != DIVERGENT:
            continue
        slopes.append(np.polyfit(taus[top], vals[p, top].real, 1)[0])
    slopes = np.sort(np.asarray(slopes))
    lam_s_sorted = np.sort(lam_s)
    slope_match = (
        len(slopes) == len(lam_s_sorted)
        and np.all(np.abs(slopes - lam_s_sorted) <= slope_rtol * np.abs(lam_s_sorted))
    )

    window = taus >= tau_max / 100 - 1e-12
    conv_slopes = []
    final_dists = []
    for p in range(swp.n_paths):
        if swp.classification[p] != CONFORMING:
            continue
        d = np.abs(vals[p][:, None] - lam_a[None, :]).min(axis=1)
        final_dists.append(d[-1])
        dw = d[window]
        if dw.min() < 1e-10:
            continue  # converged to the floor; no rate to fit
        conv_slopes.append(np.polyfit(np.log(taus[window]), np.log(dw), 1)[0])
    conv_slopes = np.asarray(conv_slopes)

    return {
        "divergent_count": int(np.sum(np.array(swp.classification) == DIVERGENT)),
        "conforming_count": int(np.sum(np.array(swp.classification) == CONFORMING)),
        "unclassified_count": int(np.sum(np.array(swp.classification) == UNCLASSIFIED)),
        "divergence_slopes": slopes.tolist(),
        "s_eigenvalues": lam_s_sorted.tolist(),
        "divergence_slopes_match": bool(slope_match),
        "convergence_slopes": conv_slopes.tolist(),
        "convergence_slopes_in_range": bool(
            len(conv_slopes) == 0
            or np.all((conv_slopes >= -1.3) & (conv_slopes <= -0.7))
        ),
        "max_final_distance": float(max(final_dists)) if final_dists else 0.0,
    }


def find_returning_modes(swp, window=None, factor=5.0, floor=1e-10):
    """Paths damped at moderate tau but (nearly) undamped at tau_max.

    Considers non-divergent paths; a path "returns" when |Re(lambda)| at
    some interior tau in the window exceeds ``factor`` times its value at
    tau_max and is above the absolute floor.
    """
    taus = swp.taus
    vals = swp.path_values()
    if window is None:
        window = (taus[0], taus[-1])
    interior = (taus >= window[0]) & (taus <= window[1]) & (taus < taus[-1])
    out = []
    for p in range(swp.n_paths):
        if swp.classification and swp.classification[p] == DIVERGENT:
            continue
        re_end = abs(vals[p, -1].real)
        re_peak = np.abs(vals[p, interior].real).max(initial=0.0)
        if re_peak > floor and re_peak >= factor * re_end:
            out.append(p)
    return out


def expand_in_tau1_basis(vector, spectrum_at_tau1, cond_cap=1e10,
                         residual_tol=1e-8):
    """Coefficients of ``vector`` in the (non-orthogonal) tau = 1 eigenbasis."""
    v = spectrum_at_tau1.eigenvectors
    cond = np.linalg.cond(v)
    if cond > cond_cap:
        raise RuntimeError(f"tau=1 eigenvector matrix near defective: cond = {cond:.3e}")
    c = np.linalg.solve(v, np.asarray(vector, dtype=complex))
    res = np.linalg.norm(v @ c - vector) / np.linalg.norm(vector)
    if res > residual_tol:
        raise RuntimeError(f"expansion residual {res:.3e} exceeds {residual_tol}")
    return ModalExpansion(
        coefficients=c,
        damping=spectrum_at_tau1.eigenvalues.real,
        residual=float(res),
    )
