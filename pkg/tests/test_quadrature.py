import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import legendre, polynomial

from hptransmission import NodalBasis1D, gauss_legendre, gauss_lobatto, interpolate_gl


def test_gauss_legendre_small_rules():
    r = gauss_legendre(1)
    assert list(r.nodes) == [0.0] and list(r.weights) == [2.0]
    r = gauss_legendre(2)
    # moment equations: w0 + w1 = 2, w x^2 sums to 2/3 with symmetric nodes
    assert r.nodes == pytest.approx([-0.5773502692, 0.5773502692], abs=1e-10)
    assert r.weights == pytest.approx([1.0, 1.0], abs=1e-15)
    for k in range(4):
        assert np.dot(r.weights, r.nodes**k) == pytest.approx((1 - (-1) ** (k + 1)) / (k + 1), abs=1e-15)
    assert gauss_legendre(3).integrate(lambda x: x**4) == pytest.approx(0.4, abs=1e-14)


def test_gauss_legendre_rejects_zero():
    with pytest.raises(ValueError):
        gauss_legendre(0)


def test_gauss_lobatto_small_rules():
    r = gauss_lobatto(1)
    assert list(r.nodes) == [-1.0, 1.0] and list(r.weights) == [1.0, 1.0]
    r = gauss_lobatto(2)
    assert r.nodes == pytest.approx([-1, 0, 1], abs=1e-15)
    # weights from the moment system with the nodes fixed
    V = np.vander(r.nodes, 3, increasing=True).T
    w = np.linalg.solve(V, [2.0, 0.0, 2.0 / 3.0])
    assert r.weights == pytest.approx(w, abs=1e-14)
    assert r.weights == pytest.approx([1 / 3, 4 / 3, 1 / 3], abs=1e-15)


def _bisect(fn, lo, hi):
    flo = fn(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_gauss_lobatto_p4_against_bisection():
    dP4 = legendre.Legendre.basis(4).deriv()
    root = _bisect(dP4, 0.3, 0.9)
    assert root == pytest.approx(math.sqrt(3 / 7), abs=1e-14)
    nodes = gauss_lobatto(4).nodes
    assert nodes[3] == pytest.approx(root, abs=1e-14)
    assert nodes[1] == pytest.approx(-root, abs=1e-14)
    assert nodes[3] == pytest.approx(0.6546536707, abs=1e-10)


def test_gauss_lobatto_rejects_zero():
    with pytest.raises(ValueError):
        gauss_lobatto(0)


@pytest.mark.parametrize("p", range(1, 17))
def test_lobatto_nodes_are_derivative_roots(p):
    r = gauss_lobatto(p)
    assert r.nodes[0] == -1 and r.nodes[-1] == 1
    assert np.all(np.diff(r.nodes) > 0)
    assert r.nodes == pytest.approx(-r.nodes[::-1], abs=1e-14)
    assert np.sum(r.weights) == pytest.approx(2.0, abs=1e-14)
    assert np.all(r.weights > 0)
    if p > 1:
        dP = legendre.Legendre.basis(p).deriv()
        scale = np.max(np.abs(dP(np.linspace(-1, 1, 101))))
        assert np.max(np.abs(dP(r.nodes[1:-1]))) <= 1e-13 * scale


@pytest.mark.parametrize("n", range(1, 12))
def test_legendre_symmetry(n):
    r = gauss_legendre(n)
    assert r.nodes == pytest.approx(-r.nodes[::-1], abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_quadrature_exactness_random_polynomials(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=2 * n)  # degree 2n - 1
    exact = np.diff(polynomial.polyval([-1.0, 1.0], polynomial.polyint(c)))[0]
    r = gauss_legendre(n)
    got = np.dot(r.weights, polynomial.polyval(r.nodes, c))
    assert got == pytest.approx(exact, rel=1e-12, abs=1e-12 * np.abs(c).sum())
    if n >= 2:
        p = n
        c = rng.normal(size=2 * p)  # degree 2p - 1
        exact = np.diff(polynomial.polyval([-1.0, 1.0], polynomial.polyint(c)))[0]
        r = gauss_lobatto(p)
        got = np.dot(r.weights, polynomial.polyval(r.nodes, c))
        assert got == pytest.approx(exact, rel=1e-12, abs=1e-12 * np.abs(c).sum())


@pytest.mark.parametrize("p", [1, 2, 5, 8])
def test_nodal_basis_properties(p):
    b = NodalBasis1D(p)
    assert b.values(b.nodes) == pytest.approx(np.eye(p + 1), abs=1e-15)
    x = np.linspace(-1, 1, 37)
    assert b.values(x).sum(axis=1) == pytest.approx(np.ones_like(x), abs=1e-14)
    assert b.derivatives(x).sum(axis=1) == pytest.approx(np.zeros_like(x), abs=1e-11)


@pytest.mark.parametrize("p", [2, 5, 8])
def test_nodal_derivatives_match_finite_differences(p):
    b = NodalBasis1D(p)
    x = np.linspace(-0.95, 0.95, 11)
    h = 1e-6
    fd = (b.values(x + h) - b.values(x - h)) / (2 * h)
    assert b.derivatives(x) == pytest.approx(fd, abs=1e-6 * p**2)


def _grid(p, fn):
    x = gauss_lobatto(p).nodes
    X, Y = np.meshgrid(x, x, indexing="ij")
    return fn(X, Y)


def test_interpolate_constant_and_bilinear():
    for p in (1, 3, 8):
        assert interpolate_gl(np.full((p + 1) ** 2, 3.7), p, (0.1, -0.7)) == pytest.approx(3.7, abs=1e-14)
        assert interpolate_gl(_grid(p, lambda x, y: x * y), p, (0.3, -0.2)) == pytest.approx(-0.06, abs=1e-13)


def test_interpolate_exponential_p8():
    rng = np.random.default_rng(1)
    q = rng.uniform(-1, 1, size=(100, 2))
    vals = _grid(8, lambda x, y: np.exp(x + y))
    err = np.max(np.abs(interpolate_gl(vals, 8, q) - np.exp(q.sum(axis=1))))
    assert err <= 1e-6


def test_interpolate_size_mismatch():
    with pytest.raises(ValueError):
        interpolate_gl(np.zeros(10), 2, (0, 0))


@pytest.mark.parametrize("p", range(1, 9))
def test_interpolation_reproduces_Qp(p):
    rng = np.random.default_rng(p)
    C = rng.normal(size=(p + 1, p + 1))
    fn = lambda x, y: polynomial.polyval2d(x, y, C)
    q = rng.uniform(-1, 1, size=(50, 2))
    assert interpolate_gl(_grid(p, fn), p, q) == pytest.approx(fn(q[:, 0], q[:, 1]), abs=1e-12 * np.abs(C).sum())


def test_interpolation_stability_growth():
    # Lebesgue-constant style bound: sup of the interpolant of data bounded by 1
    # grows no faster than (1 + ln p)^2
    x = np.linspace(-1, 1, 201)
    ratios = []
    for p in range(1, 9):
        b = NodalBasis1D(p)
        lam = np.max(np.abs(b.values(x)).sum(axis=1))  # 1D Lebesgue constant
        ratios.append(lam**2 / (1 + math.log(p)) ** 2)
    assert max(ratios) <= 1.0 + 1e-12
    # and the sign-pattern worst case in 2D attains lam^2
    p = 8
    b = NodalBasis1D(p)
    vx = b.values(x)
    i = np.argmax(np.abs(vx).sum(axis=1))
    s = np.sign(vx[i])
    vals = np.outer(s, s)
    assert abs(interpolate_gl(vals, p, (x[i], x[i]))) <= (1 + math.log(p)) ** 2
