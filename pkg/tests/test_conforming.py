"""Conforming subspace extraction and the block decomposition of K."""

import numpy as np
import pytest

from dgspectra.assembly import assemble
from dgspectra.conforming import (
    block_decompose,
    build_conforming_split,
    conforming_dimension_oracle,
    conforming_spectrum,
    constraint_matrix,
)
from dgspectra.mesh import build_mesh_1d, build_mesh_2d_bisected
from dgspectra.pde import FluxConfig, make_system
from dgspectra.refelem import build_reference_element


def nearest_distance(a, b):
    """max over a of the distance to the closest element of b."""
    return np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :]).min(axis=1).max()


@pytest.fixture(scope="module")
def split_adv(op_advection_8):
    return build_conforming_split(op_advection_8)


@pytest.fixture(scope="module")
def blocks_adv(op_advection_8, split_adv):
    return block_decompose(op_advection_8, split_adv)


def test_central_flux_has_no_constraints(op_advection_8):
    op = assemble(op_advection_8.mesh, op_advection_8.ref,
                  op_advection_8.system, FluxConfig("central"))
    with pytest.raises(ValueError):
        constraint_matrix(op)


def test_constraint_rows_annihilate_continuous_states(op_advection_8):
    g = constraint_matrix(op_advection_8)
    np.testing.assert_allclose(g @ np.ones(op_advection_8.n), 0.0, atol=1e-12)


@pytest.mark.parametrize("n_elem,degree", [(4, 2), (8, 3), (8, 4)])
def test_dimension_1d_advection(n_elem, degree):
    mesh = build_mesh_1d(n_elem)
    ref = build_reference_element(1, degree)
    op = assemble(mesh, ref, make_system("advection1d"), FluxConfig("penalty", 1.0))
    split = build_conforming_split(op)
    assert split.dims[0] == conforming_dimension_oracle("advection1d", mesh, degree)
    assert split.dims[0] == n_elem * degree
    assert sum(split.dims) == op.n


def test_dimension_2d_acoustics(op_acoustics2d_wall, op_acoustics2d_periodic):
    for op in (op_acoustics2d_wall, op_acoustics2d_periodic):
        split = build_conforming_split(op)
        oracle = conforming_dimension_oracle("acoustics2d", op.mesh, op.ref.degree)
        assert split.dims[0] == oracle
        assert sum(split.dims) == op.n


def test_lf_space_strictly_smaller(op_acoustics2d_periodic):
    op = op_acoustics2d_periodic
    op_lf = assemble(op.mesh, op.ref, op.system, FluxConfig("lf", 1.0))
    nc_pen = build_conforming_split(op).dims[0]
    nc_lf = build_conforming_split(op_lf).dims[0]
    assert nc_lf < nc_pen


def test_penalty_and_upwind_share_the_conforming_space(op_advection_8):
    op = op_advection_8
    op_up = assemble(op.mesh, op.ref, op.system, FluxConfig("upwind"))
    phi = build_conforming_split(op).basis_c
    phi_up = build_conforming_split(op_up).basis_c
    # Same subspace: mutual M-orthogonal projection is the identity.
    m = op.m_matrix
    proj = phi.T @ m @ phi_up
    np.testing.assert_allclose(proj @ proj.T, np.eye(phi.shape[1]), atol=1e-10)


def test_bases_m_orthonormal(op_acoustics2d_wall):
    split = build_conforming_split(op_acoustics2d_wall)
    m = split.m_matrix
    nc, nnc = split.dims
    np.testing.assert_allclose(split.basis_c.T @ m @ split.basis_c,
                               np.eye(nc), atol=1e-10)
    np.testing.assert_allclose(split.basis_nc.T @ m @ split.basis_nc,
                               np.eye(nnc), atol=1e-10)
    np.testing.assert_allclose(split.basis_c.T @ m @ split.basis_nc, 0.0, atol=1e-10)
    np.testing.assert_allclose(split.constraint_matrix @ split.basis_c, 0.0, atol=1e-9)


def test_conforming_basis_continuous_at_faces(split_adv, op_advection_8):
    # Every conforming basis vector has zero jump at every face.
    g = split_adv.constraint_matrix
    np.testing.assert_allclose(g @ split_adv.basis_c, 0.0, atol=1e-9)
    # The non-conforming basis is jump-rich: no vector is constraint-free.
    jumps = np.abs(g @ split_adv.basis_nc).max(axis=0)
    assert jumps.min() > 1e-3


def test_block_structure(blocks_adv):
    a, b, c, s = (blocks_adv.a_block, blocks_adv.b_block,
                  blocks_adv.c_block, blocks_adv.s_block)
    np.testing.assert_allclose(a, -a.T, atol=1e-11)
    np.testing.assert_allclose(c, -c.T, atol=1e-11)
    np.testing.assert_allclose(s, s.T, atol=1e-11)
    assert np.linalg.eigvalsh(s).max() < 0  # strictly negative definite
    assert a.shape == (24, 24) and s.shape == (8, 8) and b.shape == (24, 8)


def test_blocks_independent_of_probe_points(op_advection_8, split_adv, blocks_adv):
    alt = block_decompose(op_advection_8, split_adv, tau_probe=(2.0, 5.0))
    for name in ("a_block", "b_block", "c_block", "s_block"):
        np.testing.assert_allclose(getattr(alt, name), getattr(blocks_adv, name),
                                   atol=1e-10)


def test_projection_preserves_spectrum(op_advection_8, split_adv, blocks_adv):
    op = op_advection_8
    for tau in (0.5, 4.0):
        full = np.linalg.eigvals(np.linalg.solve(op.m_matrix, op.k_at(tau)))
        proj = np.linalg.eigvals(blocks_adv.projected(tau))
        assert nearest_distance(full, proj) < 1e-9


def test_conforming_spectrum_imaginary(blocks_adv):
    lam = conforming_spectrum(blocks_adv)
    assert len(lam) == 24
    np.testing.assert_allclose(lam.real, 0.0, atol=1e-12)
    # Closed under conjugation.
    assert nearest_distance(lam, np.conj(lam)) < 1e-10


def test_conforming_spectrum_matches_continuous_modes(blocks_adv):
    # Periodic unit-speed advection on [-1, 1]: exact eigenvalues i pi k.
    lam = np.sort(conforming_spectrum(blocks_adv).imag)
    for k in range(-2, 3):
        assert np.abs(lam - np.pi * k).min() < 1e-3


def test_block_decompose_requires_tau_flux(op_advection_8):
    op_up = assemble(op_advection_8.mesh, op_advection_8.ref,
                     op_advection_8.system, FluxConfig("upwind"))
    split = build_conforming_split(op_up)
    with pytest.raises(ValueError):
        block_decompose(op_up, split)


def test_dimension_oracle_validation():
    mesh = build_mesh_1d(4, bc="bounded")
    with pytest.raises(ValueError):
        conforming_dimension_oracle("advection1d", mesh, 3)
    with pytest.raises(ValueError):
        conforming_dimension_oracle("advection2d", build_mesh_2d_bisected(2, 2), 3)
