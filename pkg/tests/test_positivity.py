import math
from fractions import Fraction

import numpy as np
import pytest

from opsf.families import family, family_poly
from opsf.positivity import (
    PositivityScanConfig, classify, f_integral, f_integral_all, gauss_legendre, gegenbauer_values,
    monotonicity_check, positivity_scan,
)


def test_gauss_legendre_small_rules():
    x, w = gauss_legendre(1)
    assert list(x) == [0.0] and list(w) == [2.0]
    x, w = gauss_legendre(2)
    assert x == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-15)
    assert w == pytest.approx([1.0, 1.0], abs=1e-15)


@pytest.mark.parametrize("n", [1, 5, 12, 30])
def test_gauss_legendre_exactness_and_reference(n):
    x, w = gauss_legendre(n)
    for k in range(2 * n):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert abs(w @ x ** k - exact) < 1e-13
    rx, rw = np.polynomial.legendre.leggauss(n)
    assert np.allclose(x, rx, atol=1e-14) and np.allclose(w, rw, atol=1e-14)


def test_float_gegenbauer_against_exact():
    lam = 0.75
    f = family("gegenbauer", **{"lambda": "3/4"})
    nodes = [Fraction(-9, 10), Fraction(-3, 10), Fraction(0), Fraction(2, 5), Fraction(1)]
    vals = gegenbauer_values(20, lam, np.array([float(x) for x in nodes]))
    for n in range(21):
        p = family_poly(f, n)
        for i, x in enumerate(nodes):
            assert vals[n, i] == pytest.approx(float(p.eval(x)), abs=1e-12, rel=1e-12)


def test_closed_form_value():
    v, err = f_integral(0, 1, 2, math.pi)
    assert abs(v - (math.pi ** 3 / 6 - math.pi / 4)) < 1e-10
    assert err < 1e-10


def test_reference_values_mpmath():
    # reference values from mpmath.quad at 30 digits
    v, _ = f_integral(3, 1, 0.5, 1.0)
    assert abs(v - 0.119580365511754514) < 1e-10
    v, _ = f_integral(5, 0.25, 0.3, math.pi)
    assert abs(v - 0.00430670034213846394) < 1e-10


def test_small_t_and_positive_integrand():
    v, _ = f_integral(0, 1.5, 0.7, 1e-3)
    assert 0 < v < 1e-3 ** (0.7 + 3 + 1) * 2
    for lam, delta, t in [(0.2, 0.1, 0.5), (3.0, 4.0, math.pi), (0.5, 2.5, 2.0)]:
        assert f_integral(0, lam, delta, t)[0] > 0


def test_domain_errors():
    with pytest.raises(ValueError):
        f_integral(1, 0, 1, 1.0)
    with pytest.raises(ValueError):
        f_integral(1, 1, 1, 4.0)
    with pytest.raises(ValueError):
        PositivityScanConfig(1, 2, tol=0)


def test_sign_classes():
    assert classify(-1e-3, 1e-12, 1e-10) == "Negative"
    assert classify(-5e-11, 1e-12, 1e-10) == "Indeterminate"
    assert classify(1e-9, 1e-9, 1e-10) == "Indeterminate"
    assert classify(1.0, 1e-12, 1e-10) == "Positive"


def test_error_estimate_bounds_panel_differences():
    a = f_integral_all(10, 1.0, 0.5, 2.0, tol=1e-10)
    b = f_integral_all(10, 1.0, 0.5, 2.0, tol=1e-12)
    assert np.all(np.abs(a.values - b.values) <= a.errors + b.errors + 1e-12)


def test_scan_small_grid_and_witness():
    rep = positivity_scan(PositivityScanConfig(1, 0.5, 6, 24, 1e-10))
    assert rep.verdict == "NegativeWitness"
    w = rep.witness
    assert all((r[0], r[1]) >= (w[0], w[1]) for r in rep.negatives)
    ok = positivity_scan(PositivityScanConfig(1, 2, 6, 24, 1e-10))
    assert ok.verdict == "ConsistentWithConjecture" and not ok.counterexample


def test_halving_tol_keeps_sign_classes():
    a = positivity_scan(PositivityScanConfig(1, 0.5, 8, 30, 1e-10))
    b = positivity_scan(PositivityScanConfig(1, 0.5, 8, 30, 5e-11))
    for ra, rb in zip(a.rows, b.rows):
        assert {ra[4], rb[4]} != {"Positive", "Negative"}


def test_monotonicity():
    rep = monotonicity_check(1, [2, 3, 4], n_max=8, t_points=30)
    assert rep.passed
    assert monotonicity_check(1, [2], n_max=3, t_points=10).passed
    assert monotonicity_check(2, [3, 5], n_max=8, t_points=30).passed
