"""Polynomials in x = t^3 attached to zeta(2,1,...,2,1) = zeta(3,...,3), the
product limit for their partial sums, zero location, and truncated MZVs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import Eisenstein, OMEGA, rat, rat_str
from .poly import DensePoly


class StructureViolation(ArithmeticError):
    """A polynomial expected in Q[t^3] has an omega part or a stray t-power."""


class DivergentSpec(ValueError):
    pass


class XPoly:
    """Polynomial with rational coefficients in x = t^3."""

    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p if isinstance(p, DensePoly) else DensePoly([rat(c) for c in p])

    @classmethod
    def from_t_poly(cls, pt: DensePoly) -> "XPoly":
        """Convert a polynomial in t, checking membership in Q[t^3] exactly."""
        out = []
        for i, c in enumerate(pt.coeffs):
            if isinstance(c, Eisenstein):
                if c.om != 0:
                    raise StructureViolation(f"omega part {c.om} at t^{i}")
                c = c.re
            if i % 3:
                if c != 0:
                    raise StructureViolation(f"nonzero coefficient {c} at t^{i}")
                continue
            out.append(Fraction(c))
        return cls(DensePoly(out))

    @property
    def coeffs(self) -> list:
        return self.p.coeffs

    @property
    def degree(self) -> int:
        return self.p.degree

    def __eq__(self, other):
        if isinstance(other, XPoly):
            return self.p == other.p
        return self.p == other

    def __hash__(self):
        return hash(self.p)

    def __add__(self, other):
        return XPoly(self.p + (other.p if isinstance(other, XPoly) else other))

    def __sub__(self, other):
        return XPoly(self.p - (other.p if isinstance(other, XPoly) else other))

    def __call__(self, x):
        return self.p.eval(x)

    def at_t(self, t: float) -> float:
        return float(self.p.to_float().eval(float(t) ** 3))

    def __repr__(self):
        return f"XPoly({self.p})"

    def __str__(self):
        return str(self.p)

    def to_json(self) -> dict:
        return {"variable": "x=t^3", "coeffs": [rat_str(c) for c in self.p.coeffs]}


_X = DensePoly([Fraction(0), Fraction(1)])


def b_poly_recurrence(alpha, N: int) -> list[XPoly]:
    """B_0..B_N from the three-term recurrence with B_0 = 1, B_1 = alpha^2."""
    a = rat(alpha)
    B = [DensePoly([Fraction(1)]), DensePoly([a * a])]
    for n in range(0, N - 1):
        c0 = DensePoly([(n + a) ** 3]) - _X
        c1 = (n + 1) * (2 * n * n + 3 * n * (a + 1) + a * a + 3 * a + 1)
        c2 = (n + 2) ** 2 * (n + 1)
        B.append((B[n + 1] * c1 - c0 * B[n]) / Fraction(c2))
    return [XPoly(b) for b in B[: N + 1]]


def _t_poch(a: DensePoly, k: int) -> DensePoly:
    out = DensePoly([Eisenstein(1)])
    for j in range(k):
        out = out * (a + Eisenstein(j))
    return out


def b_poly_explicit(alpha, n: int) -> XPoly:
    """The k-sum with (w t)_k (w^2 t)_k (alpha+t)_{n-k} (alpha-t+k)_{n-k},
    over Eisenstein-rational coefficients in t."""
    a = Eisenstein(rat(alpha))
    one = Eisenstein(1)
    zero = Eisenstein(0)
    t = DensePoly([zero, one])
    wt = DensePoly([zero, OMEGA])
    w2t = DensePoly([zero, OMEGA * OMEGA])
    total = DensePoly()
    for k in range(n + 1):
        term = _t_poch(wt, k) * _t_poch(w2t, k)
        term = term * _t_poch(t + a, n - k) * _t_poch(DensePoly([a + k, -one]), n - k)
        total = total + term * Eisenstein(Fraction(1, math.factorial(k) * math.factorial(n - k)))
    total = total * Eisenstein(Fraction(1, math.factorial(n)))
    return XPoly.from_t_poly(total)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def a_polys(N: int) -> tuple[list[XPoly], list[XPoly]]:
    """A_0..A_N from their recursion and Ã_0..Ã_N independently from the
    end recursion; the partial-sum relation is checked exactly."""
    A = [DensePoly([Fraction(1)]), DensePoly()]
    for n in range(0, N - 1):
        c0 = DensePoly([Fraction(n ** 3)]) - _X * _sign(n)
        A.append(-(c0 * A[n] + A[n + 1] * ((n + 1) ** 2 * (2 * n + 1))) / Fraction((n + 2) ** 2 * (n + 1)))
    A = A[: N + 1]
    At = [DensePoly([Fraction(1)]), DensePoly([Fraction(1)])]
    for n in range(1, N):
        c0 = DensePoly([Fraction(n ** 3)]) - _X * _sign(n)
        At.append((c0 * At[n - 1] + At[n] * ((2 * n + 1) * n)) / Fraction((n + 1) ** 2 * n))
    At = At[: N + 1]
    partial = DensePoly()
    for n in range(N + 1):
        partial = partial + A[n]
        if partial != At[n]:
            raise StructureViolation(f"partial sum of A differs from Ã at n={n}")
    return [XPoly(p) for p in A], [XPoly(p) for p in At]


def a_recursion_residuals(A: Sequence[XPoly], At: Sequence[XPoly]) -> tuple[list, list]:
    ra, rt = [], []
    for n in range(len(A) - 2):
        c0 = DensePoly([Fraction(n ** 3)]) - _X * _sign(n)
        ra.append(c0 * A[n].p + A[n + 1].p * ((n + 1) ** 2 * (2 * n + 1)) + A[n + 2].p * ((n + 2) ** 2 * (n + 1)))
    for n in range(1, len(At) - 1):
        c0 = DensePoly([Fraction(n ** 3)]) - _X * _sign(n)
        rt.append(c0 * At[n - 1].p + At[n].p * ((2 * n + 1) * n) - At[n + 1].p * ((n + 1) ** 2 * n))
    return ra, rt


# -- product limit --------------------------------------------------------------


def product_truncation(t: float, J: int) -> tuple[float, float]:
    """prod_{j<=J} (1 + t^3/(8 j^3)) and a relative tail bound."""
    if J < 1:
        raise ValueError("J must be at least 1")
    t3 = float(t) ** 3
    if t3 == 0:
        return 1.0, 0.0
    j = np.arange(1, J + 1, dtype=float)
    factors = 1.0 + t3 / (8.0 * j ** 3)
    if np.any(factors <= 0):
        value = float(np.prod(factors))
    else:
        value = math.exp(math.fsum(np.log(factors)))
    s = abs(t3) / (16.0 * J * J)
    tail = abs(value) * math.expm1(s)
    return value, tail


@dataclass
class LimitReport:
    N: int
    J: int
    rows: list = field(default_factory=list)  # (t, A_tilde_N(t), product, tail, |diff|)

    def to_json(self) -> dict:
        return {"N": self.N, "J": self.J,
                "rows": [dict(zip(("t", "A_tilde", "product", "tail_bound", "abs_diff"), r)) for r in self.rows]}


def limit_check(t_list: Sequence[float], N: int = 40, J: int = 100_000) -> LimitReport:
    _, At = a_polys(N)
    rep = LimitReport(N, J)
    for t in t_list:
        val = At[N].at_t(t)
        prod, tail = product_truncation(t, J)
        rep.rows.append((float(t), val, prod, tail, abs(val - prod)))
    return rep


def limit_trend(t: float, n_values: Sequence[int], J: int = 100_000) -> list[float]:
    _, At = a_polys(max(n_values))
    prod, _ = product_truncation(t, J)
    return [abs(At[n].at_t(t) - prod) for n in n_values]


# -- real zeros -----------------------------------------------------------------


def _sturm_chain(p: DensePoly) -> list[DensePoly]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        _, r = chain[-2].divmod(chain[-1])
        if not r:
            break
        chain.append(-r)
    return chain


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _at_minus_inf(chain) -> int:
    return _sign_changes([c.lead * (-1) ** c.degree for c in chain])


def _at_plus_inf(chain) -> int:
    return _sign_changes([c.lead for c in chain])


def _at(chain, x) -> int:
    return _sign_changes([c.eval(x) for c in chain])


def sturm_count(p: DensePoly, a=None, b=None) -> int:
    """Distinct real roots in (a, b]; None means -inf / +inf."""
    chain = _sturm_chain(p)
    va = _at_minus_inf(chain) if a is None else _at(chain, a)
    vb = _at_plus_inf(chain) if b is None else _at(chain, b)
    return va - vb


@dataclass
class ZeroReport:
    roots: list
    all_negative: bool
    negative_count: int
    degree: int
    boundary: bool

    def to_json(self) -> dict:
        return {"roots": self.roots, "all_negative": self.all_negative, "negative_count": self.negative_count,
                "degree": self.degree, "boundary_root_at_zero": self.boundary}


def xpoly_real_zeros(p: XPoly, rtol: float = 1e-12) -> ZeroReport:
    """Exact Sturm isolation over Q, then bisection with exact signs."""
    poly = p.p
    if not poly:
        raise ValueError("zero polynomial")
    deg = poly.degree
    if deg == 0:
        return ZeroReport([], True, 0, 0, False)
    chain = _sturm_chain(poly)
    boundary = poly.eval(Fraction(0)) == 0
    neg = _at_minus_inf(chain) - _at(chain, Fraction(0)) - (1 if boundary else 0)
    bound = 1 + max(abs(c / poly.lead) for c in poly.coeffs[:-1])
    bound = Fraction(math.ceil(bound))
    intervals = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        k = _at(chain, a) - _at(chain, b)
        if k == 0:
            continue
        if k == 1:
            intervals.append((a, b))
            continue
        m = (a + b) / 2
        stack.extend([(m, b), (a, m)])
    roots = [_refine(poly, a, b, rtol) for a, b in sorted(intervals)]
    return ZeroReport(roots, neg == deg, neg, deg, boundary)


def _refine(poly: DensePoly, a: Fraction, b: Fraction, rtol: float) -> float:
    # root lies in (a, b]
    if poly.eval(b) == 0:
        return float(b)
    sb = poly.eval(b) > 0
    while b - a > rtol * max(1.0, abs(float(a)), abs(float(b))):
        m = Fraction((a + b) / 2)
        mf = Fraction(float(m))
        if a < mf < b:
            m = mf
        v = poly.eval(m)
        if v == 0:
            return float(m)
        if (v > 0) == sb:
            b = m
        else:
            a = m
    return float((a + b) / 2)


# -- truncated multiple zeta values -------------------------------------------


@dataclass(frozen=True)
class MzvSpec:
    exponents: tuple
    alternating: tuple = ()
    N: int = 1000

    def __post_init__(self):
        s = tuple(int(v) for v in self.exponents)
        alt = tuple(bool(v) for v in self.alternating) or (False,) * len(s)
        object.__setattr__(self, "exponents", s)
        object.__setattr__(self, "alternating", alt)
        if not s or any(v < 1 for v in s) or len(alt) != len(s):
            raise DivergentSpec("need positive exponents and one flag per index")
        if s[0] == 1 and not alt[0]:
            raise DivergentSpec("leading exponent 1 without alternation diverges")
        if self.N < 10:
            raise DivergentSpec("truncation N must be at least 10")


def mzv_truncated(spec: MzvSpec) -> tuple[float, float]:
    """sum over N >= n_1 > n_2 > ... > n_l >= 1 of prod sign_i / n_i^{s_i}.

    Nested prefix sums, innermost index first.
    """
    N = spec.N
    k = np.arange(1, N + 1, dtype=float)
    alt_sign = np.where(np.arange(1, N + 1) % 2 == 1, -1.0, 1.0)
    inner = np.ones(N)  # S_0(k) = 1
    terms = None
    depth = len(spec.exponents)
    for r in range(depth - 1, -1, -1):
        s, alt = spec.exponents[r], spec.alternating[r]
        terms = inner * k ** (-float(s))
        if alt:
            terms = terms * alt_sign
        if r:
            # S_r(m) = sum_{k < m}, exclusive prefix
            inner = np.concatenate(([0.0], np.cumsum(terms)[:-1]))
    value = math.fsum(terms[::-1].tolist())
    last = abs(terms[-1])
    s1 = spec.exponents[0]
    if spec.alternating[0]:
        shell = last
    else:
        shell = last * N / (s1 - 1)
    return float(value), float(shell * (1.0 + math.log(N)))


def parse_identity(text: str) -> tuple[tuple, tuple]:
    """'2,1=3' -> ((2, 1), (3,))."""
    try:
        lhs, rhs = text.split("=")
        return tuple(int(v) for v in lhs.split(",")), tuple(int(v) for v in rhs.split(","))
    except ValueError as exc:
        raise DivergentSpec(f"cannot parse identity {text!r}") from exc


def identity_difference(lhs: Sequence[int], rhs: Sequence[int], N: int) -> dict:
    vl, tl = mzv_truncated(MzvSpec(tuple(lhs), (), N))
    vr, tr = mzv_truncated(MzvSpec(tuple(rhs), (), N))
    return {"lhs": list(lhs), "rhs": list(rhs), "N": N, "lhs_value": vl, "rhs_value": vr,
            "abs_diff": abs(vl - vr), "tail_lhs": tl, "tail_rhs": tr}


def alternating_block_check(l: int, N: int) -> dict:
    """Both sides of the alternating (2,1)^l identity as printed, with factor 8^l.

    The observed ratio lhs / rhs_block is reported; no limiting value is asserted.
    """
    exps = (2, 1) * l
    flags = (True, False) * l
    lhs, lt = mzv_truncated(MzvSpec(exps, flags, N))
    block, bt = mzv_truncated(MzvSpec(exps, (), N))
    rhs = 8 ** l * block
    return {"l": l, "N": N, "lhs": lhs, "rhs_as_printed": rhs, "difference": lhs - rhs,
            "ratio_lhs_over_block": lhs / block, "tail_lhs": lt, "tail_block": bt}


def a_tilde_float(t: float, n_values: Sequence[int]) -> dict:
    """Ã_n(t) in floating point from the end recursion, for n far beyond
    what the exact tables reach."""
    x = float(t) ** 3
    want = set(int(n) for n in n_values)
    out = {}
    prev, cur = 1.0, 1.0
    if 0 in want:
        out[0] = 1.0
    if 1 in want:
        out[1] = 1.0
    for n in range(1, max(want, default=1)):
        prev, cur = cur, ((n ** 3 - _sign(n) * x) * prev + (2 * n + 1) * n * cur) / ((n + 1) ** 2 * n)
        if n + 1 in want:
            out[n + 1] = cur
    return out
