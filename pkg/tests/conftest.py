import numpy as np
import pytest

from dgspectra.assembly import assemble
from dgspectra.mesh import build_mesh_1d, build_mesh_2d_bisected
from dgspectra.pde import FluxConfig, make_system
from dgspectra.refelem import build_reference_element


@pytest.fixture(scope="session")
def ref1d3():
    return build_reference_element(1, 3)


@pytest.fixture(scope="session")
def ref2d3():
    return build_reference_element(2, 3)


@pytest.fixture(scope="session")
def op_advection_8():
    """1D advection, 8 periodic elements, degree 3, penalty flux."""
    mesh = build_mesh_1d(8)
    ref = build_reference_element(1, 3)
    return assemble(mesh, ref, make_system("advection1d"), FluxConfig("penalty", 1.0))


@pytest.fixture(scope="session")
def op_acoustics1d_8():
    """1D acoustics, 8 bounded elements (reflective walls), degree 3, penalty."""
    mesh = build_mesh_1d(8, bc="bounded")
    ref = build_reference_element(1, 3)
    return assemble(mesh, ref, make_system("acoustics1d"), FluxConfig("penalty", 1.0))


@pytest.fixture(scope="session")
def op_acoustics2d_wall():
    """2D acoustics, 2x2 bisected mesh with wall boundaries, degree 3, penalty."""
    mesh = build_mesh_2d_bisected(2, 2, bc="wall")
    ref = build_reference_element(2, 3)
    return assemble(mesh, ref, make_system("acoustics2d"), FluxConfig("penalty", 1.0))


@pytest.fixture(scope="session")
def op_acoustics2d_periodic():
    mesh = build_mesh_2d_bisected(2, 2, bc="periodic")
    ref = build_reference_element(2, 3)
    return assemble(mesh, ref, make_system("acoustics2d"), FluxConfig("penalty", 1.0))


def returning_taus(tau_hi=100.0):
    """Sample points dense near zero, geometric out to tau_hi, including 1.0."""
    taus = sorted(set(
        np.linspace(0.0, 4.0, 41).tolist()
        + np.geomspace(4.0, tau_hi, 25).tolist()
        + [1.0, tau_hi]
    ))
    return taus


@pytest.fixture(scope="session")
def sweep_advection_8(op_advection_8):
    from dgspectra.tauanalysis import sweep

    return sweep(op_advection_8, returning_taus())


@pytest.fixture(scope="session")
def sweep_advection_4():
    from dgspectra.tauanalysis import sweep

    mesh = build_mesh_1d(4)
    ref = build_reference_element(1, 3)
    op = assemble(mesh, ref, make_system("advection1d"), FluxConfig("penalty", 1.0))
    return op, sweep(op, returning_taus())


def triangle_quadrature(order):
    """Tensor quadrature on the bi-unit triangle via the collapsed-square map.

    Exact for polynomials up to the given total degree. Returns (r, s, w).
    """
    n = order // 2 + 2
    xa, wa = np.polynomial.legendre.leggauss(n)
    xb, wb = np.polynomial.legendre.leggauss(n)
    a, b = np.meshgrid(xa, xb, indexing="ij")
    wgt = np.outer(wa, wb) * (1.0 - b) / 2.0
    r = (1.0 + a) * (1.0 - b) / 2.0 - 1.0
    s = b
    return r.ravel(), s.ravel(), wgt.ravel()
