import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xlmimo.errors import InvalidArgumentError
from xlmimo.geometry import (X_AXIS, Y_AXIS, Z_AXIS, ArrayGeometry, SurfaceSpec, build_ula,
                             build_upa, cap_as_dense_upa, rotate_surface)


def test_ula_single_element_at_center():
    g = build_ula(1, 0.5, center=(1, 2, 3))
    np.testing.assert_array_equal(g.positions, [[1, 2, 3]])


def test_ula_two_elements_symmetric():
    g = build_ula(2, 0.5)
    np.testing.assert_allclose(g.positions, [[-0.25, 0, 0], [0.25, 0, 0]])


def test_ula_512_length():
    g = build_ula(512, 0.5)
    assert np.linalg.norm(g.positions[-1] - g.positions[0]) == pytest.approx(255.5, abs=1e-12)
    np.testing.assert_allclose(np.diff(g.positions[:, 0]), 0.5)


@pytest.mark.parametrize("n, spacing", [(0, 0.5), (3, 0.0), (3, -1.0), (2.5, 1.0)])
def test_ula_rejects_bad_arguments(n, spacing):
    with pytest.raises(InvalidArgumentError):
        build_ula(n, spacing)


def test_upa_fig5_surface():
    g = build_upa(SurfaceSpec.square(20, 10.0))
    assert len(g) == 400
    spec = SurfaceSpec.square(20, 10.0)
    assert spec.spacing == pytest.approx(10 / 19)
    diag = np.linalg.norm(g.positions[-1] - g.positions[0])
    assert diag == pytest.approx(10 * math.sqrt(2), rel=1e-12)


def test_upa_unrotated_is_flat():
    g = build_upa(SurfaceSpec(5, 4, 0.3, center=(0, 0, 7.0)))
    np.testing.assert_array_equal(g.positions[:, 2], 7.0)


def test_upa_row_major_order():
    g = build_upa(SurfaceSpec(3, 2, 1.0))
    np.testing.assert_allclose(g.positions[:3, 0], [-1, 0, 1])
    np.testing.assert_allclose(g.positions[:3, 1], -0.5)
    np.testing.assert_allclose(g.positions[3:, 1], 0.5)


def test_upa_quarter_turn_about_x():
    spec = SurfaceSpec(4, 4, 1.0, center=(0, 0, 7.0), rotation_axis=X_AXIS, rotation_angle=math.pi / 2)
    g = build_upa(spec)
    np.testing.assert_allclose(g.normal, [0, -1, 0], atol=1e-15)
    np.testing.assert_allclose(g.positions[:, 1], 0.0, atol=1e-12)
    flat = build_upa(SurfaceSpec(4, 4, 1.0, center=(0, 0, 7.0)))
    # former y extent now lies along z
    np.testing.assert_allclose(g.positions[:, 2] - 7.0, flat.positions[:, 1], atol=1e-12)
    np.testing.assert_allclose(g.positions[:, 0], flat.positions[:, 0], atol=1e-12)


def test_orientation_is_proper_rotation():
    g = build_upa(SurfaceSpec(3, 3, 1.0, rotation_axis=(0, 0.6, 0.8), rotation_angle=1.1))
    r = g.orientation
    np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("bad", [dict(n_x=0, n_y=2, spacing=1.0), dict(n_x=2, n_y=2, spacing=0.0),
                                 dict(n_x=2, n_y=2, spacing=1.0, rotation_axis=(1, 1, 0))])
def test_surface_spec_validation(bad):
    with pytest.raises(InvalidArgumentError):
        build_upa(SurfaceSpec(**bad))


@pytest.mark.parametrize("n, axis", [(5, X_AXIS), (7, Y_AXIS)])
def test_degenerate_upa_matches_ula(n, axis):
    spec = SurfaceSpec(n, 1, 0.4) if axis == X_AXIS else SurfaceSpec(1, n, 0.4)
    np.testing.assert_allclose(build_upa(spec).positions, build_ula(n, 0.4, axis=axis).positions,
                               atol=1e-15)


def test_builders_deterministic():
    spec = SurfaceSpec(6, 5, 0.37, center=(1, -2, 3), rotation_axis=Y_AXIS, rotation_angle=0.3)
    np.testing.assert_array_equal(build_upa(spec).positions, build_upa(spec).positions)


def test_rotate_identity_and_full_turn():
    g = build_upa(SurfaceSpec(4, 3, 0.5, center=(0, 0, 7.0)))
    np.testing.assert_array_equal(rotate_surface(g, X_AXIS, 0.0).positions, g.positions)
    np.testing.assert_allclose(rotate_surface(g, (0, 0.6, 0.8), 2 * math.pi).positions,
                               g.positions, atol=1e-12)


def test_rotate_rejects_non_unit_axis():
    g = build_ula(3, 0.5)
    with pytest.raises(InvalidArgumentError):
        rotate_surface(g, (0, 0, 2), 0.1)


unit_axes = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) > 0.1).map(
    lambda v: tuple(np.asarray(v) / np.linalg.norm(v)))


@settings(max_examples=50, deadline=None)
@given(axis=unit_axes, theta=st.floats(-10, 10))
def test_rotation_preserves_distances(axis, theta):
    g = build_upa(SurfaceSpec(4, 3, 0.45, center=(0.5, -1, 7.0)))
    r = rotate_surface(g, axis, theta)
    d0, d1 = g.distance_matrix(), r.distance_matrix()
    assert np.max(np.abs(d1 - d0)) <= 1e-12 * np.max(d0)
    np.testing.assert_allclose(r.center, g.center)


def test_cap_grid_sizes():
    assert cap_as_dense_upa(1.0, 0.25).shape == (5, 5)
    assert cap_as_dense_upa(10.0, 0.25).shape == (41, 41)
    g = cap_as_dense_upa(10.0, 0.25)
    assert np.diff(np.unique(g.positions[:, 0])).max() <= 0.25 + 1e-12


@pytest.mark.parametrize("side, spacing", [(1.0, 0.25), (3.0, 0.2), (10.0, 0.25), (2.5, 0.1)])
def test_cap_halving_spacing(side, spacing):
    a = cap_as_dense_upa(side, spacing)
    b = cap_as_dense_upa(side, spacing / 2)
    cells = lambda g: (g.shape[0] - 1) * (g.shape[1] - 1)
    assert cells(b) >= 4 * cells(a)
    assert len(b) > 3 * len(a)


def test_cap_rejects_coarse_sampling():
    with pytest.raises(InvalidArgumentError):
        cap_as_dense_upa(1.0, 0.3)


def test_geometry_rejects_duplicates_and_nan():
    with pytest.raises(InvalidArgumentError):
        ArrayGeometry(np.zeros((2, 3)))
    with pytest.raises(InvalidArgumentError):
        ArrayGeometry(np.array([[0, 0, np.nan]]))


def test_geometry_is_immutable():
    g = build_ula(3, 0.5)
    with pytest.raises(ValueError):
        g.positions[0, 0] = 1.0


def test_aperture_adds_one_cell():
    g = build_upa(SurfaceSpec(4, 3, 0.5, center=(1, 2, 3), rotation_angle=0.7))
    assert g.extent() == pytest.approx((1.5, 1.0))
    assert g.aperture() == pytest.approx((2.0, 1.5))
    line = build_ula(5, 0.25)
    assert line.aperture() == pytest.approx((1.25, 0.0))
    patch = build_upa(SurfaceSpec(1, 1, 1.0), kind="patch", patch_side=0.4)
    assert patch.aperture() == pytest.approx((0.4, 0.4))
