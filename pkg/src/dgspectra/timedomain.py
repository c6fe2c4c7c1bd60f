"""Classical RK4 time integration of the semi-discrete system M du/dt = K u,
with energy tracing in the M-norm."""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .spectral import spectrum_of_operator


class InstabilityError(RuntimeError):
    """Energy grew beyond the RK truncation tolerance with tau >= 0."""


@dataclass(frozen=True)
class EnergyTrace:
    times: np.ndarray
    energies: np.ndarray
    final_state: np.ndarray = field(repr=False)


def spectral_radius(op):
    """Spectral radius of M^{-1} K, from the dense spectrum."""
    return float(np.abs(spectrum_of_operator(op).eigenvalues).max())


def integrate(op, u0, dt, n_steps, cfl_cap=0.5, growth_tol=1e-6):
    """Integrate with classical fixed-step RK4, recording the M-norm energy.

    ``dt`` must satisfy dt <= cfl_cap / rho(M^{-1}K). Aborts with
    :class:`InstabilityError` if the energy grows by more than ``growth_tol``
    relative to the initial energy.
    """
    u0 = np.asarray(u0, dtype=complex if np.iscomplexobj(u0) else float)
    if u0.shape[0] != op.n:
        raise ValueError(f"state length {u0.shape[0]} != {op.n}")
    rho = spectral_radius(op)
    if rho > 0 and dt > cfl_cap / rho:
        raise ValueError(f"dt = {dt} exceeds CFL cap {cfl_cap / rho:.3e}")

    cho = cho_factor(op.m_matrix, lower=True)
    k = op.k_matrix

    def rhs(u):
        return cho_solve(cho, k @ u)

    m = op.m_matrix

    def energy(u):
        return float(np.real(np.conj(u) @ (m @ u)))

    u = u0.copy()
    times = np.empty(n_steps + 1)
    energies = np.empty(n_steps + 1)
    times[0] = 0.0
    energies[0] = energy(u)
    e_ref = max(energies[0], 1e-300)

    for i in range(1, n_steps + 1):
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * dt * k1)
        k3 = rhs(u + 0.5 * dt * k2)
        k4 = rhs(u + dt * k3)
        u = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        times[i] = i * dt
        energies[i] = energy(u)
        if energies[i] > e_ref * (1.0 + growth_tol):
            raise InstabilityError(
                f"energy grew to {energies[i]:.6e} (initial {e_ref:.6e}) at step {i}"
            )
    return EnergyTrace(times=times, energies=energies, final_state=u)
