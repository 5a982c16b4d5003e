import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hptransmission import AnnularGeometry, BoundaryFittedFrame, circle_point, psi_map


def test_circle_point_examples():
    cp = circle_point(2, 0)
    assert cp.point == pytest.approx((2, 0))
    assert cp.curvature == 0.5
    cp = circle_point(1, math.pi / 2)
    assert cp.point == pytest.approx((0, 1), abs=1e-15)
    assert cp.normal == pytest.approx((0, 1), abs=1e-15)
    cp = circle_point(3, math.pi)
    assert cp.point == pytest.approx((-3, 0), abs=1e-15)
    assert cp.curvature == pytest.approx(1 / 3)


def test_circle_point_rejects_bad_radius():
    with pytest.raises(ValueError):
        circle_point(0, 1.0)


@given(st.floats(0.1, 10), st.floats(0, 2 * math.pi))
def test_circle_frame_is_orthonormal(radius, theta):
    cp = circle_point(radius, theta)
    assert np.dot(cp.tangent, cp.normal) == pytest.approx(0, abs=1e-15)
    assert np.hypot(*cp.point) == pytest.approx(radius, rel=1e-14)


def test_geometry_validation():
    AnnularGeometry(1, 2, 3)
    for bad in [(2, 1, 3), (0, 1, 2), (1, 1, 2)]:
        with pytest.raises(ValueError):
            AnnularGeometry(*bad)


def test_default_depths_respect_curvature(geom):
    assert 0 < geom.default_rho0() < geom.a
    assert 0 < geom.default_rho_sigma() < min(geom.b - geom.a, geom.b)


def test_psi_examples():
    f = BoundaryFittedFrame(1.0, 0.5, +1)
    assert np.hypot(*psi_map(f, 0.0, 0.3)) == pytest.approx(1.0)
    assert psi_map(f, 0.25, 0.0) == pytest.approx([1.25, 0.0])
    f = BoundaryFittedFrame(2.0, 0.5, -1)
    assert psi_map(f, 0.25, 0.0) == pytest.approx([1.75, 0.0])


def test_psi_rejects_out_of_range_depth():
    f = BoundaryFittedFrame(1.0, 0.5, +1)
    with pytest.raises(ValueError):
        psi_map(f, 0.6, 0.0)
    with pytest.raises(ValueError):
        psi_map(f, -0.1, 0.0)


def test_frame_rejects_depth_beyond_curvature_radius():
    with pytest.raises(ValueError):
        BoundaryFittedFrame(1.0, 1.0, +1)


@given(st.floats(0, 0.5), st.floats(0, 2 * math.pi), st.sampled_from([1, -1]))
def test_psi_radius_is_exact(rho, theta, orientation):
    f = BoundaryFittedFrame(2.0, 0.5, orientation)
    assert np.hypot(*psi_map(f, rho, theta)) == pytest.approx(2.0 + orientation * rho, rel=1e-14)


def test_psi_injective_on_samples():
    rng = np.random.default_rng(0)
    f = BoundaryFittedFrame(1.0, 0.5, +1)
    rho = rng.uniform(0, 0.5, 500)
    theta = rng.uniform(0, 2 * math.pi, 500)
    pts = psi_map(f, rho, theta)
    d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    np.fill_diagonal(d, np.inf)
    assert d.min() > 0
    # round trip through polar coordinates
    back = f.depth_of(np.hypot(pts[:, 0], pts[:, 1]))
    assert back == pytest.approx(rho, abs=1e-14)
