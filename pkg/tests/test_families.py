from fractions import Fraction

import pytest

from opsf.families import (
    GapInIndices, NonpositiveB, ParameterDomain, ParseError, family, family_basis, family_poly,
    family_recurrence, jacobi_matrix, load_recurrence_csv, parse_family,
)
from opsf.poly import DensePoly, generate_from_ttr

F = Fraction


def test_classical_polys_match_reference_tables():
    # reference coefficients from sympy's gegenbauer / assoc_laguerre / jacobi
    assert family_poly(family("gegenbauer", **{"lambda": F(1, 3)}), 3).coeffs == [0, F(-8, 9), 0, F(112, 81)]
    assert family_poly(family("laguerre", alpha=F(1, 2)), 4).coeffs == \
        [F(315, 128), F(-105, 16), F(63, 16), F(-3, 4), F(1, 24)]
    assert family_poly(family("jacobi", alpha=F(1, 2), beta=F(1, 3)), 3).coeffs == \
        [F(-665, 10368), F(-7105, 3456), F(1015, 3456), F(41615, 10368)]
    assert family_poly(family("chebyshev-t"), 4).coeffs == [1, 0, -8, 0, 8]
    assert family_poly(family("chebyshev-u"), 3).coeffs == [0, -4, 0, 8]


@pytest.mark.parametrize("spec", [
    "laguerre:alpha=1/2", "gegenbauer:lambda=2/3", "jacobi:alpha=1/2,beta=-1/3", "chebyshev-t",
    "chebyshev-u", "q-ultraspherical:beta=2/5,q=1/3", "meixner:beta=3/2,c=1/3",
])
def test_monic_rescale_matches_recurrence(spec):
    f = parse_family(spec)
    monic = generate_from_ttr(family_recurrence(f), 10)
    for n in range(11):
        assert family_poly(f, n).monic() == monic[n], (spec, n)


def test_meixner_pollaczek_trig_forms_agree():
    a = family_recurrence(parse_family("meixner-pollaczek:lambda=1,cos=0,sin=1"))
    b = family_recurrence(parse_family("meixner-pollaczek:lambda=1,t=1"))
    assert [a.a(n) for n in range(5)] == [b.a(n) for n in range(5)]
    assert [a.b(n) for n in range(1, 5)] == [b.b(n) for n in range(1, 5)]


def test_parameter_domains():
    with pytest.raises(ParameterDomain):
        family("laguerre", alpha=-1)
    with pytest.raises(ParameterDomain):
        family("gegenbauer", **{"lambda": 0})
    with pytest.raises(ParameterDomain):
        family("meixner", beta=1, c=1)
    with pytest.raises(ParameterDomain):
        parse_family("hermite")
    with pytest.raises(ParseError):
        parse_family("laguerre:alpha")


def test_jacobi_matrix_float_entries():
    T = jacobi_matrix(family_recurrence(family("chebyshev-u")), 4)
    assert T.diag == [0.0] * 4
    assert T.offdiag == pytest.approx([0.5] * 3)


def test_recurrence_csv(tmp_path):
    good = tmp_path / "r.csv"
    good.write_text("n,a_n,b_n\n0,0,-\n1,0,1/2\n2,0,1/4\n")
    rec = load_recurrence_csv(good)
    assert rec.b(1) == F(1, 2) and rec.length == 3
    with pytest.raises(IndexError):
        rec.a(3)
    gap = tmp_path / "g.csv"
    gap.write_text("n,a_n,b_n\n0,0,\n2,0,1\n")
    with pytest.raises(GapInIndices):
        load_recurrence_csv(gap)
    neg = tmp_path / "n.csv"
    neg.write_text("n,a_n,b_n\n0,0,\n1,0,-1\n")
    with pytest.raises(NonpositiveB):
        load_recurrence_csv(neg)
    bad = tmp_path / "b.csv"
    bad.write_text("k,a,b\n")
    with pytest.raises(ParseError):
        load_recurrence_csv(bad)


def test_basis_degrees():
    basis = family_basis(family("q-ultraspherical", beta=F(2, 5), q=F(1, 3)), 6)
    assert [p.degree for p in basis] == list(range(7))
