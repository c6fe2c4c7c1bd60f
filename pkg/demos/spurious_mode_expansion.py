"""Expand a weakly damped high-penalty mode in the tau = 1 eigenbasis.

On a uniform periodic mesh the expansion is sparse: exactly one coefficient
per local basis function, and the largest coefficients belong to the most
strongly damped tau = 1 modes. The "spurious" mode that survives a large
penalty is built from modes that moderate penalties kill fastest.

Run: python3 demos/spurious_mode_expansion.py
"""

import numpy as np

from dgspectra import (
    assemble,
    build_mesh_1d,
    build_reference_element,
    make_system,
    spectrum_of_operator,
    sweep,
)
from dgspectra.pde import FluxConfig
from dgspectra.tauanalysis import expand_in_tau1_basis, find_returning_modes

mesh = build_mesh_1d(4)
ref = build_reference_element(1, 3)
op = assemble(mesh, ref, make_system("advection1d"), FluxConfig("penalty", 1.0))

taus = sorted(set(np.linspace(0.0, 4.0, 41).tolist()
                  + np.geomspace(4.0, 100.0, 25).tolist() + [1.0]))
swp = sweep(op, taus)
vals = swp.path_values()
t1 = int(np.argmin(np.abs(swp.taus - 1.0)))

returning = find_returning_modes(swp)
path = max(returning, key=lambda p: -vals[p, t1].real)
print(f"tracked path: lambda({swp.taus[t1]:.0f}) = {vals[path, t1]:.4f}  ->  "
      f"lambda(100) = {vals[path, -1]:.4f}")

vec = swp.path_eigenvector(path, len(swp.taus) - 1)
s1 = spectrum_of_operator(op, 1.0)
me = expand_in_tau1_basis(vec, s1)

order = np.argsort(-np.abs(me.coefficients))
n_big = int(np.sum(np.abs(me.coefficients) > 1e-13))
print(f"\n{n_big} of {op.n} coefficients exceed 1e-13 "
      f"(one per local basis function, Np = {ref.n_nodes}):")
print(f"{'|c_j|':>10s} {'Re(lambda_j^1)':>16s} {'Im(lambda_j^1)':>16s}")
for j in order[:n_big]:
    lam = s1.eigenvalues[j]
    print(f"{np.abs(me.coefficients[j]):10.4f} {lam.real:16.4f} {lam.imag:16.4f}")
