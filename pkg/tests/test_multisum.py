from fractions import Fraction

import pytest

from opsf.exact import DomainError
from opsf.multisum import (
    ConvergenceDomain, KdfPoint, ParityViolation, check_pochhammer_rewriting, kdf_double, kdf_single,
    kdf_symmetry_check, kdf_recurrence_residual, parity_valid_alphas, s_closed, s_nonterm_closed,
    s_nonterminating, s_recurrence_residuals, s_terminating, t_recurrence_residual,
)


def test_small_values_closed_form():
    for m in range(5):
        for n in range(5):
            assert s_terminating(m, n) == s_closed(m, n)


def test_recurrence_residuals_zero():
    for i in range(6):
        for n in range(6):
            assert t_recurrence_residual(i, n) == 0
            assert s_recurrence_residuals(i, n) == (0, 0)


def test_pochhammer_rewriting():
    assert all(check_pochhammer_rewriting(i, j) for i in range(6) for j in range(6))


def test_nonterminating_matches_closed_form():
    for beta, n in ((Fraction(5, 2), 0), (Fraction(1, 3), 2)):
        val, tail = s_nonterminating(beta, n, tol=1e-10)
        assert tail < 1e-10
        assert abs(val - s_nonterm_closed(beta, n)) < 1e-8


def test_nonterminating_domains():
    with pytest.raises(ConvergenceDomain):
        s_nonterminating(Fraction(-1, 2), 0)
    with pytest.raises(DomainError):
        s_nonterminating(2, 0)


def test_kdf_point():
    p = KdfPoint((3, 1, 1, 1), 2)
    assert kdf_double(p)[1] == kdf_single(p)
    assert kdf_symmetry_check(p)
    assert kdf_recurrence_residual(p) == 0
    with pytest.raises(ParityViolation):
        KdfPoint((1, 2, 1, 1), 1)


def test_parity_valid_alphas_counts():
    pts = list(parity_valid_alphas(4))
    assert all(len({a % 2 for a in p}) == 1 and sum(p) <= 4 for p in pts)
    assert (0, 0, 0, 0) in pts and (1, 1, 1, 1) in pts
