"""Hyperbolic system definitions and numerical flux penalizations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgspectra.pde import (
    FluxConfig,
    make_system,
    normal_flux_data,
    recommend_tau,
    upwind_split,
)

unit_angle = st.floats(0.0, 2 * np.pi, allow_nan=False)


def test_system_shapes():
    for name, dim, nf in [
        ("advection1d", 1, 1),
        ("advection2d", 2, 1),
        ("acoustics1d", 1, 2),
        ("acoustics2d", 2, 3),
    ]:
        sys = make_system(name)
        assert (sys.dim, sys.n_fields) == (dim, nf)
        for a in sys.coeff_matrices:
            np.testing.assert_allclose(a, a.T)
    with pytest.raises(ValueError):
        make_system("euler")


def test_acoustics2d_normal_matrix():
    sys = make_system("acoustics2d")
    np.testing.assert_allclose(sys.normal_matrix([1.0, 0.0]), sys.coeff_matrices[0])
    np.testing.assert_allclose(sys.normal_matrix([0.0, 1.0]), sys.coeff_matrices[1])
    an = sys.normal_matrix([np.sqrt(0.5), np.sqrt(0.5)])
    lam = np.linalg.eigvalsh(an)
    np.testing.assert_allclose(np.sort(lam), [-1.0, 0.0, 1.0], atol=1e-14)


def test_acoustics1d_wavespeeds():
    data = normal_flux_data(make_system("acoustics1d"), [1.0], FluxConfig("central"))
    np.testing.assert_allclose(np.sort(data.eigenvalues), [-1.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(data.penalization, 0.0)


def test_flux_config_validation():
    with pytest.raises(ValueError):
        FluxConfig("roe")
    with pytest.raises(ValueError):
        FluxConfig("penalty", -1.0)
    assert FluxConfig("penalty", 2.5).tau == 2.5


def test_normal_must_be_unit():
    with pytest.raises(ValueError):
        normal_flux_data(make_system("acoustics2d"), [1.0, 1.0], FluxConfig("central"))


@settings(max_examples=25, deadline=None)
@given(unit_angle)
def test_penalty_tau1_equals_upwind_acoustics2d(theta):
    sys = make_system("acoustics2d")
    n = [np.cos(theta), np.sin(theta)]
    pen = normal_flux_data(sys, n, FluxConfig("penalty", 1.0)).penalization
    up = normal_flux_data(sys, n, FluxConfig("upwind")).penalization
    np.testing.assert_allclose(pen, up, atol=1e-13)


def test_penalty_tau1_equals_upwind_1d():
    for name, beta in [("advection1d", 1.0), ("acoustics1d", None)]:
        sys = make_system(name, beta=beta)
        for n in ([1.0], [-1.0]):
            pen = normal_flux_data(sys, n, FluxConfig("penalty", 1.0)).penalization
            up = normal_flux_data(sys, n, FluxConfig("upwind")).penalization
            np.testing.assert_allclose(pen, up, atol=1e-14)


def test_penalty_scales_linearly():
    sys = make_system("acoustics2d")
    n = [0.6, 0.8]
    p1 = normal_flux_data(sys, n, FluxConfig("penalty", 1.0)).penalization
    p3 = normal_flux_data(sys, n, FluxConfig("penalty", 3.0)).penalization
    np.testing.assert_allclose(p3, 3.0 * p1, atol=1e-13)
    np.testing.assert_allclose(p1, p1.T, atol=1e-14)
    assert np.linalg.eigvalsh(p1).min() >= -1e-14  # positive semidefinite


def test_lf_penalizes_every_field():
    sys = make_system("acoustics2d")
    data = normal_flux_data(sys, [1.0, 0.0], FluxConfig("lf", 2.0))
    np.testing.assert_allclose(data.penalization, np.eye(3))


def test_penalty_kernel_matches_normal_matrix_kernel():
    # tau/2 A_n^T A_n annihilates exactly the kernel of A_n.
    sys = make_system("acoustics2d")
    data = normal_flux_data(sys, [0.0, 1.0], FluxConfig("penalty", 5.0))
    null_vec = np.array([0.0, 1.0, 0.0])  # tangential velocity
    np.testing.assert_allclose(data.a_n @ null_vec, 0.0, atol=1e-14)
    np.testing.assert_allclose(data.penalization @ null_vec, 0.0, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(unit_angle)
def test_upwind_split_reconstruction(theta):
    sys = make_system("acoustics2d")
    n = [np.cos(theta), np.sin(theta)]
    ap, am = upwind_split(sys, n)
    an = sys.normal_matrix(n)
    np.testing.assert_allclose(ap + am, an, atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvals(ap).real.min(), 0.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvals(am).real.max(), 0.0, atol=1e-12)


def test_wall_mirror_acoustics():
    sys = make_system("acoustics2d")
    for n in ([1.0, 0.0], [0.0, -1.0], [np.sqrt(0.5), -np.sqrt(0.5)]):
        g = sys.wall_mirror(n)
        u = np.array([1.3, 0.4, -0.2])
        ug = g @ u
        assert ug[0] == pytest.approx(u[0])  # pressure copied
        nv = np.asarray(n)
        assert ug[1:] @ nv == pytest.approx(-(u[1:] @ nv))  # normal velocity flipped
        tv = np.array([-nv[1], nv[0]])
        assert ug[1:] @ tv == pytest.approx(u[1:] @ tv)  # tangential kept
        np.testing.assert_allclose(g @ g, np.eye(3), atol=1e-14)  # involution


def test_wall_mirror_only_for_acoustics():
    with pytest.raises(ValueError):
        make_system("advection2d").wall_mirror([1.0, 0.0])


def test_recommend_tau():
    assert recommend_tau(make_system("advection1d"), [1.0]) == pytest.approx(1.0)
    assert recommend_tau(make_system("acoustics1d"), [1.0]) == pytest.approx(1.0)
    # Advection normal to the flow: no wave crosses, no finite recommendation.
    sys = make_system("advection2d", beta=(1.0, 0.0))
    assert recommend_tau(sys, [0.0, 1.0]) == np.inf
