import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from maskquant.errors import DomainError, NonConvergence
from maskquant.numerics import (
    QuadratureSpec,
    integrate_1d,
    integrate_polar,
    laguerre_array,
    laguerre_assoc,
    minimize_multistart,
    minimize_scalar,
    tail_cutoff,
)


def test_laguerre_frozen_values():
    # mpmath, 30 digits
    assert laguerre_assoc(5, 2, 3.7) == pytest.approx(2.67386608333333369591663005356, rel=1e-13)
    assert laguerre_assoc(12, 0, 7.25) == pytest.approx(3.42551513308967708013057836162, rel=1e-12)


def test_laguerre_low_orders():
    x = np.linspace(0, 5, 11)
    np.testing.assert_allclose(laguerre_array(0, 3, x), 1.0)
    np.testing.assert_allclose(laguerre_array(1, 3, x), 4.0 - x)
    np.testing.assert_allclose(laguerre_array(2, 0, x), 1 - 2 * x + x**2 / 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20), st.integers(0, 6), st.floats(0, 40))
def test_laguerre_matches_scipy(p, alpha, x):
    ref = special.eval_genlaguerre(p, alpha, x)
    assert laguerre_assoc(p, alpha, x) == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, abs(ref)))


def test_laguerre_rejects_negative():
    with pytest.raises(DomainError):
        laguerre_assoc(-1, 0, 1.0)
    with pytest.raises(DomainError):
        laguerre_array(2, -1, [1.0])


def test_gauss_kronrod_polynomial_exact():
    # GK15 integrates degree-22 polynomials exactly on one panel
    f = lambda x: x**22 - 3 * x**7 + 1
    assert integrate_1d(f, -1.0, 2.0) == pytest.approx((2**23 + 1) / 23 - 3 * (2**8 - 1) / 8 + 3, rel=1e-14)


@pytest.mark.parametrize(
    "f,a,b",
    [
        (lambda x: np.exp(-x) * np.cos(3 * x), 0.0, 20.0),
        (lambda x: np.sqrt(x), 0.0, 1.0),
        (lambda x: 1.0 / (1 + 100 * x**2), -1.0, 1.0),
    ],
)
def test_integrate_1d_matches_scipy(f, a, b):
    ref, _ = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=500)
    assert integrate_1d(f, a, b) == pytest.approx(ref, rel=1e-11, abs=1e-13)


def test_integrate_1d_complex_and_error():
    val, err = integrate_1d(lambda x: np.exp(1j * x), 0.0, math.pi, return_error=True)
    assert val == pytest.approx(2j, abs=1e-13)
    assert err < 1e-10


def test_integrate_1d_reports_nonconvergence():
    with pytest.raises(NonConvergence) as info:
        integrate_1d(lambda x: np.sin(1.0 / np.maximum(x, 1e-300)), 0.0, 1.0, QuadratureSpec(max_subdivisions=5))
    assert info.value.estimate is not None


def test_integrate_1d_domain():
    with pytest.raises(DomainError):
        integrate_1d(np.exp, 0.0, math.inf)
    with pytest.raises(DomainError):
        integrate_1d(np.exp, 1.0, 0.0)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(relative_tolerance=0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)


@pytest.mark.parametrize("degree", [0, 3, 10, 40])
def test_tail_cutoff_bounds_weight(degree):
    x = tail_cutoff(degree)
    assert x > degree
    tail = special.gammaincc(degree + 1, x)
    assert tail < 1e-15


def test_integrate_polar_disc_and_annulus():
    disc = integrate_polar(lambda r, phi: np.ones_like(r), lambda r, phi: r < 0.5, r_max=1.0)
    assert disc == pytest.approx(math.pi * 0.25, rel=1e-11)
    # half annulus 0.3 < r < 0.8, y > 0
    region = lambda r, phi: (r > 0.3) & (r < 0.8) & (np.sin(phi) > 0)
    val = integrate_polar(lambda r, phi: r**2 * np.ones_like(phi), region, r_max=1.0)
    assert val == pytest.approx(math.pi * (0.8**4 - 0.3**4) / 4, rel=1e-7)


def test_minimize_scalar():
    x, fx = minimize_scalar(lambda x: (x - 0.3) ** 2 + 1, (-1, 2))
    # a flat minimum is only resolvable to ~sqrt(machine epsilon)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(1.0)
    # monotone: endpoint wins
    x, _ = minimize_scalar(lambda x: x, (0.0, 1.0))
    assert x == 0.0


def test_minimize_multistart_rosenbrock_deterministic():
    rosen = lambda v: (1 - v[0]) ** 2 + 100 * (v[1] - v[0] ** 2) ** 2
    a = minimize_multistart(rosen, 2, starts=6, seed=3)
    b = minimize_multistart(rosen, 2, starts=6, seed=3)
    assert a.fun < 1e-12
    np.testing.assert_allclose(a.x, [1, 1], atol=1e-5)
    assert a.fun == b.fun and np.array_equal(a.x, b.x)
    assert a.starts == 6 and len(a.all_values) == 6


def test_minimize_multistart_dimension_limit():
    with pytest.raises(DomainError):
        minimize_multistart(lambda v: 0.0, 17)
