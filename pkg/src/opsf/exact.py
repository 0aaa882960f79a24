"""Exact scalars and terminating hypergeometric building blocks.

Rationals are :class:`fractions.Fraction`.  Values of the cube root of
unity live in :class:`Eisenstein`, the ring Q[w] with w^2 + w + 1 = 0.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class ExactError(ArithmeticError):
    """Base class for failures of exact evaluation."""


class NonTerminating(ExactError):
    pass


class DenominatorPole(ExactError):
    pass


class DomainError(ValueError):
    pass


def rat(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to a Fraction.

    Floats are rejected: every parameter entering an exact formula must be
    given exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"not a rational literal: {value!r}") from None
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_nonpositive_integer(x) -> bool:
    x = Fraction(x)
    return x.denominator == 1 and x <= 0


def pochhammer(a, n: int):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1).

    Works for any scalar supporting ``+`` and ``*`` with ints (Fraction,
    Eisenstein, float, DensePoly).
    """
    if n < 0:
        raise ValueError("pochhammer index must be nonnegative")
    out = Fraction(1)
    for i in range(n):
        out = (a + i) * out
    return out


def q_pochhammer(a, q, n: int):
    """(a;q)_n = prod_{i<n} (1 - a q^i)."""
    if n < 0:
        raise ValueError("q-pochhammer index must be nonnegative")
    out = Fraction(1)
    qi = Fraction(1)
    for _ in range(n):
        out *= 1 - a * qi
        qi *= q
    return out


def reciprocal_factorial(n: int) -> Fraction:
    """1/n! with the convention 1/(negative integer)! = 0."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(n))


def termination_index(numerator: Iterable[Fraction]) -> int:
    """Smallest |a| over numerator parameters a that are nonpositive integers."""
    cands = [-int(a) for a in map(Fraction, numerator) if is_nonpositive_integer(a)]
    if not cands:
        raise NonTerminating("no numerator parameter is a nonpositive integer")
    return min(cands)


class HypSeriesSpec:
    """Parameter lists of a pFq together with its argument."""

    __slots__ = ("numerator", "denominator", "argument")

    def __init__(self, numerator: Sequence, denominator: Sequence, argument=1):
        self.numerator = tuple(rat(a) for a in numerator)
        self.denominator = tuple(rat(b) for b in denominator)
        self.argument = rat(argument)

    def __repr__(self):
        num = ", ".join(map(rat_str, self.numerator))
        den = ", ".join(map(rat_str, self.denominator))
        p, q = len(self.numerator), len(self.denominator)
        return f"{p}F{q}({num}; {den}; {rat_str(self.argument)})"


def hyp_pfq_terminating(spec: HypSeriesSpec) -> Fraction:
    """Exact value of a terminating generalized hypergeometric series."""
    n_terms = termination_index(spec.numerator)
    z = spec.argument
    total = Fraction(1)
    term = Fraction(1)
    for k in range(n_terms):
        num = Fraction(1)
        for a in spec.numerator:
            num *= a + k
        den = Fraction(k + 1)
        for b in spec.denominator:
            if b + k == 0:
                raise DenominatorPole(f"denominator parameter {rat_str(b)} vanishes at k={k}")
            den *= b + k
        term = term * num * z / den
        if term == 0:
            break
        total += term
    return total


def hyp(numerator: Sequence, denominator: Sequence, z=1) -> Fraction:
    """Shorthand for :func:`hyp_pfq_terminating`."""
    return hyp_pfq_terminating(HypSeriesSpec(numerator, denominator, z))


def _q_power_index(a: Fraction, q: Fraction) -> int | None:
    """N >= 0 with a == q^{-N}, or None."""
    if a == 0 or abs(q) == 1:
        return 0 if a == 1 else None
    x = a
    for N in range(100_000):
        if x == 1:
            return N
        if (abs(q) < 1 and abs(x) < 1) or (abs(q) > 1 and abs(x) > 1):
            return None
        x *= q
    return None


def _q_termination(numerator: Sequence[Fraction], q: Fraction) -> int:
    idx = [N for N in (_q_power_index(a, q) for a in numerator) if N is not None]
    if not idx:
        raise NonTerminating("no numerator parameter of the form q^-N")
    return min(idx)


def hyp_qphiq_terminating(num: Sequence, den: Sequence, q, z) -> Fraction:
    """Terminating basic hypergeometric series r phi s in the Gasper-Rahman form.

    Term k is prod (a;q)_k / (prod (b;q)_k (q;q)_k) * [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k.
    """
    num = [rat(a) for a in num]
    den = [rat(b) for b in den]
    q = rat(q)
    z = rat(z)
    if q == 0:
        raise DomainError("q must be nonzero")
    N = _q_termination(num, q)
    extra = 1 + len(den) - len(num)
    total = Fraction(1)
    term = Fraction(1)
    qk = Fraction(1)
    for k in range(N):
        ratio = Fraction(1)
        for a in num:
            ratio *= 1 - a * qk
        d = 1 - q * qk
        for b in den:
            fb = 1 - b * qk
            if fb == 0:
                raise DenominatorPole(f"(b;q)_k vanishes for b={rat_str(b)} at k={k}")
            d *= fb
        if d == 0:
            raise DenominatorPole(f"(q;q)_k vanishes at k={k}")
        # (-1)^k q^{k(k-1)/2} ratio between consecutive k is -q^k
        ratio *= z * (-qk) ** extra
        term = term * ratio / d
        total += term
        qk *= q
    return total


class Eisenstein:
    """Element re + om*w of Q[w], w a primitive cube root of unity."""

    __slots__ = ("re", "om")

    def __init__(self, re=0, om=0):
        self.re = Fraction(re)
        self.om = Fraction(om)

    @staticmethod
    def _lift(x) -> "Eisenstein":
        if isinstance(x, Eisenstein):
            return x
        if isinstance(x, (int, Fraction)):
            return Eisenstein(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Eisenstein(self.re + o.re, self.om + o.om)

    __radd__ = __add__

    def __neg__(self):
        return Eisenstein(-self.re, -self.om)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Eisenstein(self.re - o.re, self.om - o.om)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.om, o.re, o.om
        # w^2 = -1 - w
        bd = b * d
        return Eisenstein(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conj(self) -> "Eisenstein":
        # w -> w^2 = -1 - w
        return Eisenstein(self.re - self.om, -self.om)

    def norm(self) -> Fraction:
        return self.re * self.re - self.re * self.om + self.om * self.om

    def inv(self) -> "Eisenstein":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Eisenstein rational")
        c = self.conj()
        return Eisenstein(c.re / n, c.om / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = Eisenstein(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.om == o.om

    def __hash__(self):
        return hash((self.re, self.om))

    def __bool__(self):
        return bool(self.re) or bool(self.om)

    def is_rational(self) -> bool:
        return self.om == 0

    def __repr__(self):
        return f"Eisenstein({rat_str(self.re)}, {rat_str(self.om)})"

    def __str__(self):
        return f"{rat_str(self.re)}+{rat_str(self.om)}*w"


OMEGA = Eisenstein(0, 1)


def eisenstein_ops(op: str, x: Eisenstein, y: Eisenstein | None = None) -> Eisenstein:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown Eisenstein operation {op!r}")


# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficient set).
_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0.

    Lanczos sum for x < 20 and the Stirling series above; both are good to
    roughly 1e-15 relative in Gamma, i.e. ~1e-14 absolute in log Gamma.
    """
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise DomainError(f"ln_gamma needs a positive finite argument, got {x}")
    if x < 0.5:
        # reflection keeps the Lanczos sum in its accurate range
        return math.log(math.pi / math.sin(math.pi * x)) - ln_gamma(1.0 - x)
    if x >= 20.0:
        inv = 1.0 / x
        inv2 = inv * inv
        series = inv * (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 * (1 / 1680 - inv2 / 1188))))
        return (x - 0.5) * math.log(x) - x + _HALF_LN_2PI + series
    if x in (1.0, 2.0):
        return 0.0
    y = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (y + i)
    tt = y + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (y + 0.5) * math.log(tt) - tt + math.log(acc)


def beta_fn(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError("beta_fn needs positive arguments")
    return math.exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
