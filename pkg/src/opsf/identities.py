"""Printed connection/linearization coefficients versus the exact oracle.

Every closed form here is an evaluator, never a trusted constant: it is
diffed index by index against the expansion computed by
:func:`opsf.poly.expand_in_basis`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .exact import (
    DenominatorPole,
    ExactError,
    hyp,
    pochhammer,
    q_pochhammer,
    rat,
    rat_str,
    reciprocal_factorial,
    termination_index,
)
from .families import FamilySpec, family, family_basis, family_poly
from .poly import DensePoly, combine, expand_in_basis, schur_lhs, schur_value, sos_rhs


class FormulaError(ArithmeticError):
    """A printed closed form cannot be evaluated at the requested point."""


class OracleError(AssertionError):
    pass


# -- oracles -------------------------------------------------------------------


def linearization_oracle(f: FamilySpec, m: int, n: int, target: Optional[FamilySpec] = None) -> list[Fraction]:
    """gamma_k with P_m^f P_n^f = sum_k gamma_k P_k^target, k = 0..m+n."""
    target = f if target is None else target
    prod = family_poly(f, m) * family_poly(f, n)
    basis = family_basis(target, m + n)
    gamma = expand_in_basis(prod, basis)
    gamma = gamma + [Fraction(0)] * (m + n + 1 - len(gamma))
    if combine(gamma, basis) != prod:
        raise OracleError(f"reconstruction failed for {f} m={m} n={n} -> {target}")
    return gamma


def connection_oracle(source: FamilySpec, target: FamilySpec, n: int) -> list[Fraction]:
    """beta_k with P_n^source = sum_k beta_k P_k^target."""
    p = family_poly(source, n)
    basis = family_basis(target, n)
    beta = expand_in_basis(p, basis)
    if combine(beta, basis) != p:
        raise OracleError(f"reconstruction failed for {source} -> {target}, n={n}")
    return beta


# -- printed connection formulas -----------------------------------------------

CONNECTION_KINDS = ("laguerre-conn", "gegenbauer-conn", "rogers-conn", "jacobi-conn")
LINEARIZATION_KINDS = ("laguerre-lin", "gegenbauer-lin", "rogers-lin", "jacobi-lin", "chebyshev-product")

PARAM_NAMES = {
    "laguerre-conn": ("alpha", "beta"),
    "gegenbauer-conn": ("lambda", "mu"),
    "rogers-conn": ("gamma", "beta", "q"),
    "jacobi-conn": ("gamma", "delta", "alpha", "beta"),
    "laguerre-lin": ("alpha",),
    "gegenbauer-lin": ("lambda",),
    "rogers-lin": ("beta", "q"),
    "jacobi-lin": ("alpha", "beta"),
    "chebyshev-product": (),
}


def _params(kind: str, params: dict) -> dict:
    if kind not in PARAM_NAMES:
        raise ValueError(f"unknown identity kind {kind!r}")
    missing = [p for p in PARAM_NAMES[kind] if p not in params]
    if missing:
        raise ValueError(f"{kind} needs parameter(s): {', '.join(missing)}")
    return {k: rat(params[k]) for k in PARAM_NAMES[kind]}


def _guard(fn):
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ZeroDivisionError, DenominatorPole) as exc:
            raise FormulaError(f"pole: {exc}") from None
        except ExactError as exc:
            raise FormulaError(str(exc)) from None

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


def _laguerre_conn(p, n):
    a, b = p["alpha"], p["beta"]
    return [pochhammer(a - b, n - k) / math.factorial(n - k) for k in range(n + 1)]


def _gegenbauer_conn(p, n):
    lam, mu = p["lambda"], p["mu"]
    out = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        out[n - 2 * k] = (
            (mu + n - 2 * k) / mu
            * pochhammer(lam, n - k) * pochhammer(lam - mu, k)
            / (math.factorial(k) * pochhammer(mu + 1, n - k))
        )
    return out


def _rogers_conn(p, n):
    g, b, q = p["gamma"], p["beta"], p["q"]
    out = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        num = b ** k * q_pochhammer(g / b, q, k) * q_pochhammer(g, q, n - k) * (1 - b * q ** (n - 2 * k))
        den = q_pochhammer(q, q, k) * q_pochhammer(b * q, q, n - k) * (1 - b)
        out[n - 2 * k] = num / den
    return out


def _jacobi_conn(p, n):
    g, d, a, b = p["gamma"], p["delta"], p["alpha"], p["beta"]
    if -1 < g < 0 and -1 < d < 0 and g + d + 1 == 0:
        raise FormulaError("printed caveat gamma+delta+1 != 0 violated")
    out = []
    for k in range(n + 1):
        # Gamma(a+b+k+1)/Gamma(a+b+2k+1) = 1/(a+b+k+1)_k
        pre = pochhammer(g + k + 1, n - k) * pochhammer(n + g + d + 1, k) / (
            math.factorial(n - k) * pochhammer(a + b + k + 1, k)
        )
        f32 = hyp([k - n, n + k + g + d + 1, a + k + 1], [g + k + 1, a + b + 2 * k + 2])
        out.append(pre * f32)
    return out


@_guard
def connection_formula(kind: str, params: dict, n: int) -> list[Fraction]:
    """Printed connection coefficients as a degree-indexed vector of length n+1."""
    p = _params(kind, params)
    fn = {
        "laguerre-conn": _laguerre_conn,
        "gegenbauer-conn": _gegenbauer_conn,
        "rogers-conn": _rogers_conn,
        "jacobi-conn": _jacobi_conn,
    }.get(kind)
    if fn is None:
        raise ValueError(f"{kind} is not a connection kind")
    return [Fraction(c) for c in fn(p, n)]


def connection_families(kind: str, params: dict) -> tuple[FamilySpec, FamilySpec]:
    p = _params(kind, params)
    if kind == "laguerre-conn":
        return family("laguerre", alpha=p["alpha"]), family("laguerre", alpha=p["beta"])
    if kind == "gegenbauer-conn":
        return family("gegenbauer", **{"lambda": p["lambda"]}), family("gegenbauer", **{"lambda": p["mu"]})
    if kind == "rogers-conn":
        return (family("q-ultraspherical", beta=p["gamma"], q=p["q"]),
                family("q-ultraspherical", beta=p["beta"], q=p["q"]))
    if kind == "jacobi-conn":
        return (family("jacobi", alpha=p["gamma"], beta=p["delta"]),
                family("jacobi", alpha=p["alpha"], beta=p["beta"]))
    raise ValueError(f"{kind} is not a connection kind")


# -- printed linearization formulas --------------------------------------------


def _laguerre_lin(p, m, n):
    al = p["alpha"]
    out = [Fraction(0)] * (m + n + 1)
    for k in range(abs(n - m), n + m + 1):
        a1 = Fraction(k - m - n, 2)
        a2 = Fraction(k - m - n + 1, 2)
        a3 = al + k + 1
        # 1/(k-n)! * 1/(k-n+1)_j = 1/(k-n+j)!, and the same for m, so the
        # reciprocal-factorial convention also covers the 3F2 denominators
        N = termination_index([a1, a2])
        s = Fraction(0)
        for j in range(N + 1):
            rf = reciprocal_factorial(k - n + j) * reciprocal_factorial(k - m + j)
            if rf:
                s += pochhammer(a1, j) * pochhammer(a2, j) * pochhammer(a3, j) / math.factorial(j) * rf
        pre = Fraction(2 ** (m + n - k) * math.factorial(n) * math.factorial(m), math.factorial(m + n - k))
        out[k] = pre * s
    return out


def _gegenbauer_lin(p, m, n):
    lam = p["lambda"]
    out = [Fraction(0)] * (m + n + 1)
    for k in range(min(m, n) + 1):
        num = (
            (m + n + lam - 2 * k) * math.factorial(m + n - 2 * k)
            * pochhammer(lam, k) * pochhammer(lam, m - k) * pochhammer(lam, n - k)
            * pochhammer(2 * lam, m + n - k)
        )
        den = (
            (m + n + lam - k) * math.factorial(k) * math.factorial(m - k) * math.factorial(n - k)
            * pochhammer(lam, m + n - k) * pochhammer(2 * lam, m + n - 2 * k)
        )
        out[m + n - 2 * k] = num / den
    return out


def _rogers_lin(p, m, n):
    b, q = p["beta"], p["q"]
    qp = q_pochhammer
    out = [Fraction(0)] * (m + n + 1)
    for k in range(min(m, n) + 1):
        num = (
            qp(q, q, m + n - 2 * k) * qp(b, q, m - k) * qp(b, q, n - k) * qp(b, q, k)
            * qp(b * b, q, m + n - k) * (1 - b * q ** (m + n - 2 * k))
        )
        den = (
            qp(q, q, k) * qp(q, q, m - k) * qp(q, q, n - k) * qp(b * q, q, m + n - k)
            * qp(b * b, q, m + n - 2 * k) * (1 - b)
        )
        out[m + n - 2 * k] = num / den
    return out


def jacobi_h(alpha: Fraction, beta: Fraction, s: int, j: int, n: int) -> Fraction:
    """The printed h_{s+j, n-s, n}, transcribed term for term.

    The printed hypergeometric factor has ten upper and seven lower
    parameters and the denominator repeats (alpha+1)_{n-s}; both are kept.
    """
    a, b = alpha, beta
    P = pochhammer
    half = Fraction(1, 2)
    f = math.factorial
    pre = (
        (a + b + 1 + 2 * s + 2 * j) * f(n) ** 2 * f(n - s) * f(s + j)
        / ((a + b + 1) * (2 * s - 2 * n - a - b) * f(s) * f(j))
    )
    num = (
        P(b + 1, n) * P(a + b + 1, 2 * n - 2 * s) * P(a + b + 1, 2 * s + j)
        * P(Fraction(2 * s - 2 * n), j) * P(2 * a + 2 * b + 2 * n + 2, j) * P(a - b, j)
    )
    den = (
        P(a + 1, n) * P(a + 1, n - s) * P(a + 1, s + j) * P(a + 1, n - s)
        * P(b + 1, s) * P(a + b + 1, n - s) * P(a + b + 2, 2 * n + j) * P(2 * b + 2 * s + 2, j)
    )
    upper = [
        b + s + half,
        (b + s + Fraction(3, 2)) / 2,
        (2 * b + 1) / 2,
        b + n + 1,
        (b + s + half) / 2,
        Fraction(s + 1),
        Fraction(2 * s - 2 * n + 1, 2),
        (a + b + j + 2 * s + 2) / 2,
        Fraction(1 - j, 2),
        Fraction(-j, 2),
    ]
    lower = [
        s - n - a,
        (a + b + j + 2 * s + 1) / 2,
        a + b + n + Fraction(3, 2),
        (b - a - j + 2) / 2,
        (b - a - j + 1) / 2,
        (2 * b + 2 * s + 2 + j) / 2,
        (2 * b + 2 * s + 3 + j) / 2,
    ]
    return pre * num / den * hyp(upper, lower)


def _jacobi_lin(p, m, n):
    if m > n:
        m, n = n, m
    s = n - m
    if not s + 1 <= n:
        raise FormulaError(f"printed index range needs s+1 <= n (m >= 1); got m={m}, n={n}")
    out = [Fraction(0)] * (m + n + 1)
    for j in range(0, 2 * n - 2 * s + 1):
        out[s + j] = jacobi_h(p["alpha"], p["beta"], s, j, n)
    return out


def _u_add(vec, j, c):
    # U_{-1} = 0 and U_{-j-2} = -U_j
    if j >= 0:
        vec[j] += c
    elif j <= -2:
        vec[-j - 2] -= c


def _chebyshev_product(p, m, n):
    out = [Fraction(0)] * (m + n + 1)
    c = Fraction(1, 4)
    _u_add(out, m + n, c)
    _u_add(out, m + n - 2, -c)
    _u_add(out, m - n, c)
    _u_add(out, m - n - 2, -c)
    return out


@_guard
def linearization_formula(kind: str, params: dict, m: int, n: int) -> list[Fraction]:
    """Printed linearization coefficients as a degree-indexed vector of length m+n+1."""
    p = _params(kind, params)
    fn = {
        "laguerre-lin": _laguerre_lin,
        "gegenbauer-lin": _gegenbauer_lin,
        "rogers-lin": _rogers_lin,
        "jacobi-lin": _jacobi_lin,
        "chebyshev-product": _chebyshev_product,
    }.get(kind)
    if fn is None:
        raise ValueError(f"{kind} is not a linearization kind")
    return [Fraction(c) for c in fn(p, m, n)]


def linearization_families(kind: str, params: dict) -> tuple[FamilySpec, FamilySpec]:
    p = _params(kind, params)
    if kind == "laguerre-lin":
        f = family("laguerre", alpha=p["alpha"])
    elif kind == "gegenbauer-lin":
        f = family("gegenbauer", **{"lambda": p["lambda"]})
    elif kind == "rogers-lin":
        f = family("q-ultraspherical", beta=p["beta"], q=p["q"])
    elif kind == "jacobi-lin":
        f = family("jacobi", alpha=p["alpha"], beta=p["beta"])
    elif kind == "chebyshev-product":
        return family("chebyshev-t"), family("chebyshev-u")
    else:
        raise ValueError(f"{kind} is not a linearization kind")
    return f, f


# -- reports -------------------------------------------------------------------


@dataclass
class CoefficientReport:
    kind: str
    params: dict
    index: tuple
    formula: list = field(default_factory=list)
    oracle: list = field(default_factory=list)
    verdict: str = "Match"
    first_mismatch: Optional[int] = None
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.verdict == "Match"

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "params": {k: rat_str(v) for k, v in self.params.items()},
            "index": list(self.index),
            "verdict": self.verdict,
        }
        if self.first_mismatch is not None:
            out["first_mismatch_k"] = self.first_mismatch
        if self.reason is not None:
            out["reason"] = self.reason
        out["coefficients"] = [
            {"k": k, "formula": rat_str(f) if f is not None else None, "oracle": rat_str(o),
             "difference": rat_str(f - o) if f is not None else None}
            for k, (f, o) in enumerate(zip(self.formula or [None] * len(self.oracle), self.oracle))
        ]
        return out


@dataclass
class IdentityCheckReport:
    kind: str
    params: dict
    mode: str
    points: list

    @property
    def n_match(self) -> int:
        return sum(p.verdict == "Match" for p in self.points)

    @property
    def n_mismatch(self) -> int:
        return sum(p.verdict == "Mismatch" for p in self.points)

    @property
    def n_error(self) -> int:
        return sum(p.verdict == "FormulaError" for p in self.points)

    @property
    def verdict(self) -> str:
        if self.n_mismatch or self.n_error:
            return "Mismatch"
        return "Match"

    @property
    def passed(self) -> bool:
        return self.mode == "survey" or self.verdict == "Match"

    def first_failure(self) -> Optional[CoefficientReport]:
        for p in self.points:
            if p.verdict != "Match":
                return p
        return None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": {k: rat_str(v) for k, v in self.params.items()},
            "mode": self.mode,
            "verdict": self.verdict,
            "counts": {"match": self.n_match, "mismatch": self.n_mismatch, "formula_error": self.n_error},
            "points": [p.to_json() for p in self.points],
        }


def _compare(kind, params, index, formula_fn, oracle_fn) -> CoefficientReport:
    rep = CoefficientReport(kind, dict(params), tuple(index))
    rep.oracle = oracle_fn()
    try:
        rep.formula = formula_fn()
    except FormulaError as exc:
        rep.formula = []
        rep.verdict = "FormulaError"
        rep.reason = str(exc)
        return rep
    size = max(len(rep.formula), len(rep.oracle))
    rep.formula = rep.formula + [Fraction(0)] * (size - len(rep.formula))
    rep.oracle = rep.oracle + [Fraction(0)] * (size - len(rep.oracle))
    for k, (f, o) in enumerate(zip(rep.formula, rep.oracle)):
        if f != o:
            rep.verdict = "Mismatch"
            rep.first_mismatch = k
            break
    return rep


def check_point(kind: str, params: dict, index: tuple) -> CoefficientReport:
    p = _params(kind, params)
    if kind in CONNECTION_KINDS:
        (n,) = index
        src, tgt = connection_families(kind, p)
        return _compare(kind, p, index, lambda: connection_formula(kind, p, n),
                        lambda: connection_oracle(src, tgt, n))
    m, n = index
    f, tgt = linearization_families(kind, p)
    return _compare(kind, p, index, lambda: linearization_formula(kind, p, m, n),
                    lambda: linearization_oracle(f, m, n, tgt))


def check_grid(kind: str, max_index: int, min_index: int = 0) -> list[tuple]:
    if kind in CONNECTION_KINDS:
        return [(n,) for n in range(min_index, max_index + 1)]
    if kind == "chebyshev-product":
        # printed for m >= n; m == n exercises the U_{-1}, U_{-2} convention
        return [(m, n) for m in range(1, max_index + 1) for n in range(max(1, min_index), m + 1)]
    return [(m, n) for m in range(min_index, max_index + 1) for n in range(min_index, max_index + 1)]


def _check_point_args(args):
    return check_point(*args)


def identity_check(kind: str, params: dict, max_index: int, mode: str = "strict",
                   min_index: int = 0, workers: int = 1) -> IdentityCheckReport:
    """Diff a printed formula against the oracle over an index grid.

    Points are reported in grid order whatever ``workers`` is.
    """
    if mode not in ("strict", "survey"):
        raise ValueError("mode must be 'strict' or 'survey'")
    p = _params(kind, params)
    grid = check_grid(kind, max_index, min_index)
    from .parallel import ordered_map

    points = ordered_map(_check_point_args, [(kind, p, idx) for idx in grid], workers)
    return IdentityCheckReport(kind, p, mode, points)


def generalized_linearization(f: FamilySpec, m: int, n: int, target: FamilySpec) -> list[Fraction]:
    """Coefficients of P_m^f P_n^f in the target basis (oracle only)."""
    return linearization_oracle(f, m, n, target)


def composition_check(lam, mu, m: int, n: int) -> bool:
    """Gegenbauer linearization in lambda pushed through the lambda -> mu
    connection equals the direct generalized linearization into mu."""
    lam, mu = rat(lam), rat(mu)
    f = family("gegenbauer", **{"lambda": lam})
    g = family("gegenbauer", **{"lambda": mu})
    lin = linearization_formula("gegenbauer-lin", {"lambda": lam}, m, n)
    out = [Fraction(0)] * (m + n + 1)
    for k, c in enumerate(lin):
        if not c:
            continue
        conn = connection_formula("gegenbauer-conn", {"lambda": lam, "mu": mu}, k)
        for j, d in enumerate(conn):
            out[j] += c * d
    return out == linearization_oracle(f, m, n, g)


# -- Schur ---------------------------------------------------------------------


@dataclass
class SchurReport:
    n: int
    samples: int
    seed: int
    sos_exact: Optional[bool]
    positive_min_ratio: float
    positive_failures: list
    real_min_ratio: Optional[float]
    real_failures: list

    @property
    def passed(self) -> bool:
        return self.sos_exact is not False and not self.positive_failures and not self.real_failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "sos_exact_equality": self.sos_exact,
            "positive_triples": {"min_value_over_scale": self.positive_min_ratio,
                                 "failures": self.positive_failures},
            "real_triples": None if self.real_min_ratio is None else
            {"min_value_over_scale": self.real_min_ratio, "failures": self.real_failures},
            "verdict": "pass" if self.passed else "fail",
        }


def schur_check(n: int, samples: int = 1000, seed: int = 0) -> SchurReport:
    """Exact SOS identity at n = 2 plus sampled sign checks of the Schur form."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    sos = not (schur_lhs(2) - sos_rhs()) if n == 2 else None
    rng = np.random.default_rng(seed)
    pos_fail, pos_min = [], math.inf
    for x, y, z in rng.uniform(0.0, 10.0, size=(samples, 3)):
        if x == y == z:
            continue
        scale = max(x, y, z) ** (n + 2)
        v = schur_value(n, x, y, z)
        pos_min = min(pos_min, v / scale)
        if not v > 1e-12 * scale:
            pos_fail.append([float(x), float(y), float(z), float(v)])
    real_fail, real_min = [], None
    if n % 2 == 0:
        real_min = math.inf
        for x, y, z in rng.uniform(-10.0, 10.0, size=(samples, 3)):
            scale = max(abs(x), abs(y), abs(z)) ** (n + 2)
            v = schur_value(n, x, y, z)
            real_min = min(real_min, v / scale)
            if v < -1e-12 * scale:
                real_fail.append([float(x), float(y), float(z), float(v)])
    return SchurReport(n, samples, seed, sos, float(pos_min), pos_fail,
                       None if real_min is None else float(real_min), real_fail)
