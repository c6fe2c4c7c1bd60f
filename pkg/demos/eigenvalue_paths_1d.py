"""Track the spectrum of a 1D advection DG operator as the penalty grows.

With no penalization the spectrum is purely imaginary. Turning the penalty
up pushes one non-conforming family of eigenvalues far into the left half
plane while the rest drift back toward the imaginary axis: the "spurious
modes" first get damped, then return.

Run: python3 demos/eigenvalue_paths_1d.py
"""

import numpy as np

from dgspectra import (
    assemble,
    build_mesh_1d,
    build_reference_element,
    make_system,
    sweep,
)
from dgspectra.pde import FluxConfig
from dgspectra.tauanalysis import find_returning_modes

mesh = build_mesh_1d(8)
ref = build_reference_element(1, 3)
op = assemble(mesh, ref, make_system("advection1d"), FluxConfig("penalty", 1.0))

taus = sorted(set(np.linspace(0.0, 4.0, 41).tolist()
                  + np.geomspace(4.0, 100.0, 25).tolist() + [1.0]))
swp = sweep(op, taus)
vals = swp.path_values()

print(f"{op.n} eigenvalue paths over tau in [0, 100]")
for cls in sorted(set(swp.classification)):
    n = swp.classification.count(cls)
    print(f"  {cls:18s} {n:3d} paths")

t1 = int(np.argmin(np.abs(swp.taus - 1.0)))
returning = find_returning_modes(swp)
print(f"\n{len(returning)} paths are damped at tau = 1 but nearly undamped "
      "at tau = 100:")
print(f"{'lambda(tau=1)':>24s} {'lambda(tau=100)':>24s} {'|Re| ratio':>12s}")
for p in sorted(returning, key=lambda p: vals[p, t1].real)[:8]:
    l1, l100 = vals[p, t1], vals[p, -1]
    ratio = abs(l1.real) / max(abs(l100.real), 1e-300)
    print(f"{l1:24.4f} {l100:24.4f} {ratio:12.1f}")
