from fractions import Fraction

import pytest

from opsf.families import family
from opsf.identities import (
    FormulaError, check_point, composition_check, connection_formula, identity_check, jacobi_h,
    linearization_formula, linearization_oracle, schur_check,
)

F = Fraction


def test_legendre_products_classical():
    leg = family("gegenbauer", **{"lambda": F(1, 2)})
    assert linearization_oracle(leg, 1, 1) == [F(1, 3), 0, F(2, 3)]
    assert linearization_oracle(leg, 2, 2) == [F(1, 5), 0, F(2, 7), 0, F(18, 35)]
    assert linearization_formula("gegenbauer-lin", {"lambda": F(1, 2)}, 2, 2) == [F(1, 5), 0, F(2, 7), 0, F(18, 35)]


def test_chebyshev_u_product_classical():
    u = family("chebyshev-u")
    assert linearization_oracle(u, 2, 3) == [0, 1, 0, 1, 0, 1]


@pytest.mark.parametrize("kind,params,mx", [
    ("gegenbauer-lin", {"lambda": "1/3"}, 6),
    ("gegenbauer-conn", {"lambda": "1/3", "mu": "5/2"}, 8),
    ("laguerre-conn", {"alpha": "0", "beta": "2/3"}, 8),
    ("jacobi-conn", {"gamma": "1/2", "delta": "1/3", "alpha": "2", "beta": "3/4"}, 6),
    ("rogers-conn", {"gamma": "1/5", "beta": "2/5", "q": "1/3"}, 6),
    ("rogers-lin", {"beta": "2/5", "q": "1/3"}, 5),
    ("chebyshev-product", {}, 8),
])
def test_printed_formulas_match_oracle(kind, params, mx):
    rep = identity_check(kind, params, mx, mode="strict")
    assert rep.verdict == "Match", rep.first_failure()


def test_laguerre_linearization_discrepancy_recorded():
    # the m = n = 1, alpha = 0 hand check: oracle gives (1, -2, 2)
    rep = check_point("laguerre-lin", {"alpha": "0"}, (1, 1))
    assert rep.verdict == "Mismatch"
    assert rep.oracle == [1, -2, 2]
    assert rep.formula == [1, 2, 1]
    assert rep.first_mismatch == 1


def test_laguerre_linearization_sign_pattern():
    # observed: formula_k = (-1)^(m+n-k) m! n! / k! * oracle_k
    from math import factorial
    for m in range(4):
        for n in range(4):
            rep = check_point("laguerre-lin", {"alpha": "1/2"}, (m, n))
            for k, (f, o) in enumerate(zip(rep.formula, rep.oracle)):
                assert f == (-1) ** (m + n - k) * F(factorial(m) * factorial(n), factorial(k)) * o


def test_strict_and_survey_modes():
    strict = identity_check("laguerre-lin", {"alpha": "0"}, 3, mode="strict")
    survey = identity_check("laguerre-lin", {"alpha": "0"}, 3, mode="survey")
    assert not strict.passed
    assert survey.passed
    assert strict.to_json()["points"] == survey.to_json()["points"]


def test_jacobi_h_m_zero_is_formula_error():
    with pytest.raises(FormulaError):
        linearization_formula("jacobi-lin", {"alpha": "1/2", "beta": "1/3"}, 0, 2)
    rep = check_point("jacobi-lin", {"alpha": "1/2", "beta": "1/3"}, (0, 2))
    assert rep.verdict == "FormulaError"


def test_parallel_report_identical():
    a = identity_check("gegenbauer-lin", {"lambda": "7/5"}, 4, workers=1)
    b = identity_check("gegenbauer-lin", {"lambda": "7/5"}, 4, workers=2)
    assert a.to_json() == b.to_json()


def test_composition_law():
    for m in range(4):
        for n in range(4):
            assert composition_check(F(1, 3), F(5, 2), m, n)


def test_schur_check():
    rep = schur_check(2, samples=300, seed=1)
    assert rep.sos_exact is True and rep.passed
    rep3 = schur_check(3, samples=300, seed=1)
    assert rep3.sos_exact is None and rep3.passed and rep3.real_min_ratio is None
