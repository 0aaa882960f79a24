"""Dense univariate polynomials, a small trivariate ring, and recurrences."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import rat, rat_str


class InvalidRecurrence(ValueError):
    pass


class BasisNotGraded(ValueError):
    pass


def _is_zero(c) -> bool:
    return not c


class DensePoly:
    """Polynomial sum_i coeffs[i] x^i over one coefficient field.

    The zero polynomial has an empty coefficient list and degree -1 (used as
    the "minus infinity" sentinel).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.coeffs = c

    @classmethod
    def x(cls, one=Fraction(1)) -> "DensePoly":
        return cls([one * 0, one])

    @classmethod
    def const(cls, c) -> "DensePoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, DensePoly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def _coerce(self, other) -> "DensePoly":
        if isinstance(other, DensePoly):
            return other
        return DensePoly([other])

    def __add__(self, other):
        o = self._coerce(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return DensePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DensePoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, DensePoly):
            return DensePoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return DensePoly()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if _is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return DensePoly(out)

    def __rmul__(self, other):
        return DensePoly([other * c for c in self.coeffs])

    def __truediv__(self, scalar):
        return DensePoly([c / scalar for c in self.coeffs])

    def __pow__(self, k: int):
        out = DensePoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "DensePoly":
        return DensePoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, k: int) -> "DensePoly":
        """Multiply by x^k."""
        if not self.coeffs:
            return DensePoly()
        return DensePoly([self.coeffs[0] * 0] * k + self.coeffs)

    def monic(self) -> "DensePoly":
        return self / self.lead

    def compose(self, inner: "DensePoly") -> "DensePoly":
        acc = DensePoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def divmod(self, divisor: "DensePoly"):
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = divisor.degree
        lead = divisor.lead
        if self.degree < dq:
            return DensePoly(), DensePoly(rem)
        quot = [None] * (self.degree - dq + 1)
        for k in range(self.degree - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for i, d in enumerate(divisor.coeffs):
                    rem[k + i] = rem[k + i] - c * d
        return DensePoly(quot), DensePoly(rem[:dq])

    def map(self, fn: Callable) -> "DensePoly":
        return DensePoly([fn(c) for c in self.coeffs])

    def to_float(self) -> "DensePoly":
        return DensePoly([float(c) for c in self.coeffs])

    def __repr__(self):
        return f"DensePoly({self.coeffs!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            s = rat_str(c) if isinstance(c, (int, Fraction)) else str(c)
            terms.append(s if i == 0 else (f"{s}*x" if i == 1 else f"{s}*x^{i}"))
        return " + ".join(terms)

    def to_json(self) -> list[str]:
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "DensePoly":
        return cls([rat(s) for s in data])


def poly_arith(op: str, p: DensePoly, q=None):
    """Dispatch helper mirroring the add|mul|scale|eval|derivative contract."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "scale":
        return p * q
    if op == "eval":
        return p.eval(q)
    if op == "derivative":
        return p.derivative()
    raise ValueError(f"unknown polynomial operation {op!r}")


def generate_from_ttr(rec, N: int) -> list[DensePoly]:
    """Monic P_0..P_N from P_{n+1} = (x - a_n) P_n - b_n P_{n-1}.

    ``rec`` needs ``a(n)`` and ``b(n)`` methods (see families.RecurrencePair).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    x = DensePoly([Fraction(0), Fraction(1)])
    polys = [DensePoly([Fraction(1)])]
    prev = DensePoly()
    for n in range(N):
        a = rec.a(n)
        nxt = (x - a) * polys[-1]
        if n >= 1:
            b = rec.b(n)
            if b <= 0:
                raise InvalidRecurrence(f"b_{n} = {b} is not positive")
            nxt = nxt - prev * b
        prev = polys[-1]
        polys.append(nxt)
    return polys


def expand_in_basis(p: DensePoly, basis: Sequence[DensePoly]) -> list:
    """Coefficients g with p = sum_k g[k] basis[k], by back-substitution.

    ``basis[k]`` must have degree exactly k for every k <= deg p.
    """
    deg = p.degree
    if deg < 0:
        return []
    if len(basis) <= deg:
        raise BasisNotGraded(f"basis has {len(basis)} elements, need {deg + 1}")
    for k in range(deg + 1):
        if basis[k].degree != k:
            raise BasisNotGraded(f"basis[{k}] has degree {basis[k].degree}")
    rem = list(p.coeffs)
    out = [None] * (deg + 1)
    for k in range(deg, -1, -1):
        bk = basis[k].coeffs
        g = rem[k] / bk[k]
        out[k] = g
        if g:
            for i in range(k + 1):
                rem[i] = rem[i] - g * bk[i]
    return out


def combine(coeffs: Sequence, basis: Sequence[DensePoly]) -> DensePoly:
    acc = DensePoly()
    for g, b in zip(coeffs, basis):
        if g:
            acc = acc + b * g
    return acc


class MultiPoly3:
    """Sparse polynomial in x, y, z with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, i: int) -> "MultiPoly3":
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c) -> "MultiPoly3":
        return cls({(0, 0, 0): c})

    def _coerce(self, other):
        return other if isinstance(other, MultiPoly3) else MultiPoly3.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly3(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly3({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly3(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly3.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, MultiPoly3) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def eval(self, x, y, z):
        return sum(c * x ** i * y ** j * z ** k for (i, j, k), c in self.terms.items())

    def __call__(self, x, y, z):
        return self.eval(x, y, z)

    def to_json(self) -> dict:
        return {f"{i},{j},{k}": rat_str(c) for (i, j, k), c in sorted(self.terms.items())}

    def __repr__(self):
        return f"MultiPoly3({len(self.terms)} terms)"


def schur_lhs(n: int) -> MultiPoly3:
    """x^n(x-y)(x-z) + y^n(y-x)(y-z) + z^n(z-x)(z-y)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x, y, z = (MultiPoly3.var(i) for i in range(3))
    return x ** n * (x - y) * (x - z) + y ** n * (y - x) * (y - z) + z ** n * (z - x) * (z - y)


def sos_rhs() -> MultiPoly3:
    x, y, z = (MultiPoly3.var(i) for i in range(3))
    p = 2 * x * x - y * y - z * z + 2 * y * z - x * z - x * y
    q = y * y - z * z + x * z - x * y
    return Fraction(1, 4) * (p * p + 3 * q * q)


def schur_value(n: int, x: float, y: float, z: float) -> float:
    return x ** n * (x - y) * (x - z) + y ** n * (y - x) * (y - z) + z ** n * (z - x) * (z - y)
