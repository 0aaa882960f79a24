import json
import math
from fractions import Fraction

import numpy as np
import pytest

from opsf.families import constant_recurrence, family, family_recurrence, TridiagonalMatrix
from opsf.spectra import (
    NoConvergence, SizeTooLarge, bernoulli_exhaustive, bernoulli_montecarlo, blumenthal_experiment,
    eigen_sym_tridiagonal, eigen_sym_tridiagonal_first_components, eigvals_symmetric, kolmogorov_to_semicircle,
    op_zeros, quarter_ratio, semicircle_cdf,
)


def test_chebyshev_zeros():
    z = op_zeros(family_recurrence(family("chebyshev-t")), 100)
    exact = sorted(math.cos((2 * k - 1) * math.pi / 200) for k in range(1, 101))
    assert max(abs(a - b) for a, b in zip(z, exact)) < 1e-12


def test_tridiagonal_against_lapack():
    rng = np.random.default_rng(3)
    d, e = rng.normal(size=40), rng.normal(size=39)
    ours = eigen_sym_tridiagonal(TridiagonalMatrix(list(d), list(e)))
    ref = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    assert np.allclose(ours, ref, atol=1e-12)


def test_first_components_are_unit_norm():
    vals, first = eigen_sym_tridiagonal_first_components(TridiagonalMatrix([0.0] * 5, [0.5] * 4))
    assert sum(c * c for c in first) == pytest.approx(1.0, abs=1e-14)


def test_dense_symmetric_eigenvalues():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(12, 12))
    A = A + A.T
    assert np.allclose(eigvals_symmetric(A), np.linalg.eigvalsh(A), atol=1e-12)


def test_constant_recurrence_edge():
    rec = constant_recurrence(0, Fraction(1, 4))
    assert abs(op_zeros(rec, 100)[0] + 1) < 0.01
    rep = blumenthal_experiment(rec, [25, 50, 100])
    assert rep.lower_trend == "bounded" and rep.upper_trend == "bounded"
    assert rep.limits["sigma"] == pytest.approx(-1.0)
    assert quarter_ratio(rec, 3) == [None, None, None]


def test_meixner_pollaczek_diverges_both_ways():
    rec = family_recurrence(family("meixner-pollaczek", **{"lambda": 1, "cos": 0, "sin": 1}))
    rep = blumenthal_experiment(rec, [25, 50, 100, 200])
    assert rep.lower_trend == "diverging_down" and rep.upper_trend == "diverging_up"


def test_meixner_quarter_ratio():
    rec = family_recurrence(family("meixner", beta=1, c=Fraction(1, 2)))
    r = quarter_ratio(rec, 200)
    # b_{n+1}/(a_n a_{n+1}) -> c/(1+c)^2 = 2/9
    assert abs(r[-1] - 2 / 9) < 2e-3


def test_bernoulli_n2_enumeration():
    rep = bernoulli_exhaustive(2)
    s = round(math.sqrt(2), 9)
    assert rep.spectra == [[[-2.0, 0.0], 2], [[-s, s], 4], [[0.0, 2.0], 2]]


def test_bernoulli_native_matches_lapack():
    a = bernoulli_exhaustive(3, solver="native")
    b = bernoulli_exhaustive(3, solver="lapack")
    assert a.spectra == b.spectra
    with pytest.raises(SizeTooLarge):
        bernoulli_exhaustive(7)


def test_montecarlo_reproducible_and_worker_independent():
    a = bernoulli_montecarlo(20, 600, seed=11, workers=1)
    b = bernoulli_montecarlo(20, 600, seed=11, workers=2)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert a.kolmogorov < 0.1


def test_kolmogorov_of_exact_quantiles_is_small():
    u = (np.arange(2000) + 0.5) / 2000
    xs = np.linspace(-2, 2, 20001)
    q = np.interp(u, semicircle_cdf(xs), xs)
    assert kolmogorov_to_semicircle(q) < 1e-3
