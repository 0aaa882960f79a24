from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opsf.poly import (
    BasisNotGraded, DensePoly, InvalidRecurrence, combine, expand_in_basis, generate_from_ttr,
    schur_lhs, schur_value, sos_rhs,
)
from opsf.families import constant_recurrence, family, family_recurrence

coeff = st.fractions(max_denominator=20, min_value=-20, max_value=20)
polys = st.lists(coeff, max_size=6).map(DensePoly)


def test_dense_poly_basics():
    p = DensePoly([1, 2, 0, 0])
    assert p.degree == 1
    assert DensePoly().degree == -1
    assert str(DensePoly([Fraction(1, 2), 0, 3])) == "1/2 + 3*x^2"
    assert (p * p).coeffs == [1, 4, 4]
    assert p.eval(Fraction(1, 2)) == 2
    assert p.derivative() == 2
    q, r = DensePoly([1, 0, 1]).divmod(DensePoly([1, 1]))
    assert q == DensePoly([-1, 1]) and r == DensePoly([2])


def test_json_roundtrip():
    p = DensePoly([Fraction(1, 3), 0, Fraction(-7, 2)])
    assert DensePoly.from_json(p.to_json()) == p
    assert p.to_json() == ["1/3", "0", "-7/2"]


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p) == DensePoly()


@given(polys, st.lists(coeff, min_size=1, max_size=4).filter(lambda c: c[-1] != 0).map(DensePoly))
def test_divmod_reconstructs(p, d):
    q, r = p.divmod(d)
    assert q * d + r == p
    assert r.degree < d.degree


def test_generate_chebyshev_u_monic():
    P = generate_from_ttr(constant_recurrence(0, Fraction(1, 4)), 4)
    # monic U_4 / 16 = x^4 - 3/4 x^2 + 1/16
    assert P[4] == DensePoly([Fraction(1, 16), 0, Fraction(-3, 4), 0, 1])


def test_generate_rejects_nonpositive_b():
    with pytest.raises(InvalidRecurrence):
        generate_from_ttr(constant_recurrence(0, 0), 3)


def test_expand_and_combine_roundtrip():
    basis = generate_from_ttr(family_recurrence(family("laguerre", alpha=Fraction(1, 2))), 5)
    p = DensePoly([3, -1, Fraction(2, 7), 0, 1])
    g = expand_in_basis(p, basis)
    assert combine(g, basis) == p
    with pytest.raises(BasisNotGraded):
        expand_in_basis(p, basis[:3])


def test_schur_sos_identity_exact():
    assert schur_lhs(2) - sos_rhs() == schur_lhs(2) - schur_lhs(2)
    assert not (schur_lhs(2) - sos_rhs())
    # x^n (x-y)(x-z) + ...: at (1, 0, 0) the value is 1
    assert schur_value(3, 1.0, 0.0, 0.0) == 1.0
