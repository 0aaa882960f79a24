import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opsf.exact import (
    DenominatorPole, DomainError, Eisenstein, NonTerminating, OMEGA, HypSeriesSpec, beta_fn, hyp,
    hyp_pfq_terminating, hyp_qphiq_terminating, ln_gamma, pochhammer, q_pochhammer, rat, rat_str,
    reciprocal_factorial, termination_index,
)


def test_rat_parsing():
    assert rat("3/4") == Fraction(3, 4)
    assert rat(" -2 ") == -2
    assert rat(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(ValueError):
        rat("abc")
    assert rat_str(Fraction(-6, 4)) == "-3/2"
    assert rat_str(Fraction(5)) == "5"


def test_pochhammer_basic():
    assert pochhammer(Fraction(1, 2), 0) == 1
    assert isinstance(pochhammer(3, 0), Fraction)
    assert pochhammer(1, 5) == 120
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(-3, 4) == 0
    with pytest.raises(ValueError):
        pochhammer(1, -1)


def test_q_pochhammer_and_factorials():
    q = Fraction(1, 3)
    assert q_pochhammer(Fraction(2, 5), q, 0) == 1
    assert q_pochhammer(Fraction(2, 5), q, 2) == (1 - Fraction(2, 5)) * (1 - Fraction(2, 15))
    assert reciprocal_factorial(4) == Fraction(1, 24)
    assert reciprocal_factorial(-2) == 0


def test_hyp_terminating_values():
    # 3F2(-3, 2, 1/2; 4, 5/2; 1), reference value from mpmath.hyp3f2
    assert hyp([-3, 2, Fraction(1, 2)], [4, Fraction(5, 2)]) == Fraction(403, 525)
    # Chu-Vandermonde: 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
    for n in range(6):
        b, c = Fraction(2, 7), Fraction(9, 4)
        assert hyp([-n, b], [c]) == pochhammer(c - b, n) / pochhammer(c, n)
    assert termination_index([Fraction(-3), Fraction(-5), 2]) == 3


def test_hyp_errors():
    with pytest.raises(NonTerminating):
        hyp_pfq_terminating(HypSeriesSpec([Fraction(1, 2)], [2]))
    with pytest.raises(DenominatorPole):
        hyp([-3, 1], [-1])
    # the series stops before the pole is reached
    assert hyp([-1, 1], [-2]) == Fraction(3, 2)


def test_q_series_q_vandermonde():
    # both q-Chu-Vandermonde sums
    q, b, c = Fraction(1, 3), Fraction(2, 5), Fraction(3, 7)
    for n in range(5):
        ratio = q_pochhammer(c / b, q, n) / q_pochhammer(c, q, n)
        assert hyp_qphiq_terminating([q ** -n, b], [c], q, c * q ** n / b) == ratio
        assert hyp_qphiq_terminating([q ** -n, b], [c], q, q) == ratio * b ** n


def test_eisenstein_arithmetic():
    w = OMEGA
    assert w * w * w == 1
    assert 1 + w + w * w == 0
    assert w.conj() == w * w
    assert w.norm() == 1
    z = Eisenstein(Fraction(2, 3), Fraction(-1, 5))
    assert z * z.inv() == 1
    assert (z ** -2) * (z ** 2) == 1


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50),
       st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_eisenstein_norm_multiplicative(a, b, c, d):
    x, y = Eisenstein(a, b), Eisenstein(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * y == y * x


def test_ln_gamma_against_stdlib():
    for x in [0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 19.99, 20.0, 55.5, 170.3]:
        assert ln_gamma(x) == pytest.approx(math.lgamma(x), abs=1e-13, rel=1e-14)
    assert beta_fn(2.0, 3.0) == pytest.approx(1 / 12, rel=1e-14)
    with pytest.raises(DomainError):
        ln_gamma(0.0)
