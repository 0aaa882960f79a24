"""Catalog of the orthogonal polynomial families used by the checks.

Classical-normalization polynomials are built from their explicit
hypergeometric or trigonometric sums; the monic recurrence coefficients are
a separate table.  Keeping the two routes independent is what makes the
monic-rescale comparison in the test suite meaningful.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .exact import pochhammer, q_pochhammer, rat, rat_str
from .poly import DensePoly, InvalidRecurrence

KINDS = (
    "laguerre",
    "gegenbauer",
    "jacobi",
    "chebyshev-t",
    "chebyshev-u",
    "q-ultraspherical",
    "meixner",
    "meixner-pollaczek",
)

_ALIASES = {
    "chebyshevt": "chebyshev-t",
    "chebyshev_t": "chebyshev-t",
    "t": "chebyshev-t",
    "chebyshevu": "chebyshev-u",
    "chebyshev_u": "chebyshev-u",
    "u": "chebyshev-u",
    "rogers": "q-ultraspherical",
    "qultraspherical": "q-ultraspherical",
    "meixnerpollaczek": "meixner-pollaczek",
    "mp": "meixner-pollaczek",
}

_PARAM_ALIASES = {"lam": "lambda", "a": "alpha", "b": "beta", "l": "lambda"}


class ParameterDomain(ValueError):
    pass


class ParseError(ValueError):
    pass


class GapInIndices(ValueError):
    pass


class NonpositiveB(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.lower(), self.kind.lower())
        if kind not in KINDS:
            raise ParameterDomain(f"unknown family {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", tuple(sorted((k, rat(v)) for k, v in dict(self.params).items())))
        _validate(self)

    def __getitem__(self, key: str) -> Fraction:
        return dict(self.params)[key]

    def __str__(self):
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={rat_str(v)}" for k, v in self.params)


def family(kind: str, **params) -> FamilySpec:
    return FamilySpec(kind, tuple(params.items()))


def parse_family(text: str) -> FamilySpec:
    """Parse CLI strings such as ``gegenbauer:lambda=1/3`` or ``chebyshev-t``."""
    head, _, rest = text.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ParseError(f"expected key=value in {item!r}")
            key = key.strip().lower()
            params[_PARAM_ALIASES.get(key, key)] = rat(value)
    return FamilySpec(head, tuple(params.items()))


def _mp_trig(f: FamilySpec) -> tuple[Fraction, Fraction]:
    p = dict(f.params)
    if "t" in p:
        t = p["t"]
        return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    return p["cos"], p["sin"]


_REQUIRED = {
    "laguerre": ("alpha",),
    "gegenbauer": ("lambda",),
    "jacobi": ("alpha", "beta"),
    "chebyshev-t": (),
    "chebyshev-u": (),
    "q-ultraspherical": ("beta", "q"),
    "meixner": ("beta", "c"),
    "meixner-pollaczek": ("lambda",),
}


def _validate(f: FamilySpec) -> None:
    p = dict(f.params)
    missing = [k for k in _REQUIRED[f.kind] if k not in p]
    if missing:
        raise ParameterDomain(f"{f.kind} needs parameter(s) {', '.join(missing)}")
    if f.kind == "laguerre" and not p["alpha"] > -1:
        raise ParameterDomain("Laguerre needs alpha > -1")
    if f.kind == "gegenbauer" and not (p["lambda"] > Fraction(-1, 2) and p["lambda"] != 0):
        raise ParameterDomain("Gegenbauer needs lambda > -1/2, lambda != 0")
    if f.kind == "jacobi" and not (p["alpha"] > -1 and p["beta"] > -1):
        raise ParameterDomain("Jacobi needs alpha, beta > -1")
    if f.kind == "q-ultraspherical" and not (abs(p["q"]) < 1 and abs(p["beta"]) < 1 and p["q"] != 0):
        raise ParameterDomain("q-ultraspherical needs 0 < |q| < 1, |beta| < 1")
    if f.kind == "meixner" and not (0 < p["c"] < 1 and p["beta"] > 0):
        raise ParameterDomain("Meixner needs 0 < c < 1, beta > 0")
    if f.kind == "meixner-pollaczek":
        if not p["lambda"] > 0:
            raise ParameterDomain("Meixner-Pollaczek needs lambda > 0")
        if "t" not in p and not ("cos" in p and "sin" in p):
            raise ParameterDomain("Meixner-Pollaczek needs cos,sin or t=tan(phi/2)")
        c, s = _mp_trig(f)
        if c * c + s * s != 1 or not s > 0:
            raise ParameterDomain("Meixner-Pollaczek needs cos^2+sin^2 = 1 with 0 < phi < pi")


# -- classical normalization ---------------------------------------------------

def _laguerre(alpha: Fraction, n: int) -> DensePoly:
    # (alpha+1)_n/n! sum_k (-n)_k/((alpha+1)_k k!) x^k
    pre = pochhammer(alpha + 1, n) / math.factorial(n)
    coeffs = []
    for k in range(n + 1):
        coeffs.append(pre * pochhammer(-n, k) / (pochhammer(alpha + 1, k) * math.factorial(k)))
    return DensePoly(coeffs)


def _gegenbauer(lam: Fraction, n: int) -> DensePoly:
    # sum_k (-1)^k (lam)_{n-k} / (k! (n-2k)!) (2x)^{n-2k}
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        c = pochhammer(lam, n - k) / (math.factorial(k) * math.factorial(n - 2 * k))
        coeffs[n - 2 * k] = (-1) ** k * c * 2 ** (n - 2 * k)
    return DensePoly(coeffs)


def _jacobi(alpha: Fraction, beta: Fraction, n: int) -> DensePoly:
    # (alpha+1)_n/n! 2F1(-n, n+alpha+beta+1; alpha+1; (1-x)/2)
    u = DensePoly([Fraction(1, 2), Fraction(-1, 2)])
    acc = DensePoly()
    upow = DensePoly([Fraction(1)])
    for k in range(n + 1):
        c = Fraction(pochhammer(-n, k)) * pochhammer(n + alpha + beta + 1, k) / (pochhammer(alpha + 1, k) * math.factorial(k))
        acc = acc + upow * c
        upow = upow * u
    return acc * (pochhammer(alpha + 1, n) / math.factorial(n))


def _chebyshev_t(n: int) -> DensePoly:
    if n == 0:
        return DensePoly([Fraction(1)])
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        c = Fraction(n * math.factorial(n - k - 1), 2 * math.factorial(k) * math.factorial(n - 2 * k))
        coeffs[n - 2 * k] = (-1) ** k * c * 2 ** (n - 2 * k)
    return DensePoly(coeffs)


def _chebyshev_u(n: int) -> DensePoly:
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        coeffs[n - 2 * k] = Fraction((-1) ** k * math.comb(n - k, k) * 2 ** (n - 2 * k))
    return DensePoly(coeffs)


def _q_ultraspherical(beta: Fraction, q: Fraction, n: int) -> DensePoly:
    # C_n(cos t) = sum_k c_k c_{n-k} cos((n-2k)t), c_k = (beta;q)_k/(q;q)_k
    c = [q_pochhammer(beta, q, k) / q_pochhammer(q, q, k) for k in range(n + 1)]
    acc = DensePoly()
    for k in range(n + 1):
        acc = acc + _chebyshev_t(abs(n - 2 * k)) * (c[k] * c[n - k])
    return acc


def _meixner(beta: Fraction, c: Fraction, n: int) -> DensePoly:
    # 2F1(-n, -x; beta; 1 - 1/c)
    z = 1 - 1 / c
    acc = DensePoly()
    falling = DensePoly([Fraction(1)])  # (-x)_k
    for k in range(n + 1):
        acc = acc + falling * (pochhammer(-n, k) * z ** k / (pochhammer(beta, k) * math.factorial(k)))
        falling = falling * DensePoly([Fraction(k), Fraction(-1)])
    return acc


@lru_cache(maxsize=4096)
def family_poly(f: FamilySpec, n: int) -> DensePoly:
    """Classically normalized P_n of family ``f`` with exact coefficients."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    k = f.kind
    if k == "laguerre":
        return _laguerre(f["alpha"], n)
    if k == "gegenbauer":
        return _gegenbauer(f["lambda"], n)
    if k == "jacobi":
        return _jacobi(f["alpha"], f["beta"], n)
    if k == "chebyshev-t":
        return _chebyshev_t(n)
    if k == "chebyshev-u":
        return _chebyshev_u(n)
    if k == "q-ultraspherical":
        return _q_ultraspherical(f["beta"], f["q"], n)
    if k == "meixner":
        return _meixner(f["beta"], f["c"], n)
    raise ParameterDomain("Meixner-Pollaczek is available only through its monic recurrence")


def family_basis(f: FamilySpec, N: int) -> list[DensePoly]:
    return [family_poly(f, k) for k in range(N + 1)]


# -- monic recurrences ---------------------------------------------------------


@dataclass
class RecurrencePair:
    """Monic coefficients: P_{n+1} = (x - a_n) P_n - b_n P_{n-1}."""

    a_fn: Callable[[int], Fraction]
    b_fn: Callable[[int], Fraction]
    source: str = "builtin"
    length: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def _check(self, n: int):
        if n < 0 or (self.length is not None and n >= self.length):
            raise IndexError(f"recurrence {self.source} has no row n={n}")

    def a(self, n: int) -> Fraction:
        self._check(n)
        return self.a_fn(n)

    def b(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("b_n is defined for n >= 1")
        self._check(n)
        return self.b_fn(n)


def _jacobi_ab(alpha: Fraction, beta: Fraction):
    s = alpha + beta

    def a(n):
        if n == 0:
            return (beta - alpha) / (s + 2)
        return (beta * beta - alpha * alpha) / ((2 * n + s) * (2 * n + s + 2))

    def b(n):
        if n == 1:
            return 4 * (1 + alpha) * (1 + beta) / ((2 + s) ** 2 * (3 + s))
        m = 2 * n + s
        return 4 * n * (n + alpha) * (n + beta) * (n + s) / (m * m * (m + 1) * (m - 1))

    return a, b


def family_recurrence(f: FamilySpec) -> RecurrencePair:
    k = f.kind
    zero = lambda n: Fraction(0)  # noqa: E731
    if k == "laguerre":
        al = f["alpha"]
        return RecurrencePair(lambda n: 2 * n + al + 1, lambda n: n * (n + al), str(f))
    if k == "gegenbauer":
        lam = f["lambda"]
        return RecurrencePair(zero, lambda n: Fraction(n * (n + 2 * lam - 1)) / (4 * (n + lam) * (n + lam - 1)), str(f))
    if k == "jacobi":
        a, b = _jacobi_ab(f["alpha"], f["beta"])
        return RecurrencePair(a, b, str(f))
    if k == "chebyshev-t":
        return RecurrencePair(zero, lambda n: Fraction(1, 2) if n == 1 else Fraction(1, 4), str(f))
    if k == "chebyshev-u":
        return RecurrencePair(zero, lambda n: Fraction(1, 4), str(f))
    if k == "q-ultraspherical":
        be, q = f["beta"], f["q"]

        def b(n):
            return (1 - be * be * q ** (n - 1)) * (1 - q ** n) / (4 * (1 - be * q ** n) * (1 - be * q ** (n - 1)))

        return RecurrencePair(zero, b, str(f))
    if k == "meixner":
        be, c = f["beta"], f["c"]
        return RecurrencePair(
            lambda n: (n + (n + be) * c) / (1 - c),
            lambda n: n * (n + be - 1) * c / (1 - c) ** 2,
            str(f),
        )
    if k == "meixner-pollaczek":
        lam = f["lambda"]
        cos, sin = _mp_trig(f)
        return RecurrencePair(
            lambda n: -(n + lam) * cos / sin,
            lambda n: n * (n + 2 * lam - 1) / (4 * sin * sin),
            str(f),
        )
    raise ParameterDomain(f"no recurrence for {k}")


def constant_recurrence(a, b, b1=None) -> RecurrencePair:
    """a_n = a, b_n = b (optionally a different b_1)."""
    a, b = rat(a), rat(b)
    b1 = b if b1 is None else rat(b1)
    return RecurrencePair(lambda n: a, lambda n: b1 if n == 1 else b, f"const(a={rat_str(a)},b={rat_str(b)})")


@dataclass
class TridiagonalMatrix:
    diag: list
    offdiag: list

    @property
    def size(self) -> int:
        return len(self.diag)


def jacobi_matrix(rec: RecurrencePair, N: int) -> TridiagonalMatrix:
    if N < 1:
        raise ValueError("N must be at least 1")
    diag = [float(rec.a(i)) for i in range(N)]
    off = []
    for i in range(1, N):
        b = rec.b(i)
        if b <= 0:
            raise InvalidRecurrence(f"b_{i} = {b} is not positive")
        off.append(math.sqrt(b) if isinstance(b, float) else _sqrt_rat(b))
    return TridiagonalMatrix(diag, off)


def _sqrt_rat(b: Fraction) -> float:
    # sqrt(p/q) without overflowing float(p) for huge exact entries
    try:
        return math.sqrt(float(b))
    except OverflowError:
        return math.exp(0.5 * (math.log(b.numerator) - math.log(b.denominator)))


def load_recurrence_csv(path) -> RecurrencePair:
    """Read a finite recurrence table with header ``n,a_n,b_n``.

    ``b_n`` of row 0 is ignored and may be blank or a dash.
    """
    rows: dict[int, tuple] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError("empty recurrence file") from None
        if header[:3] != ["n", "a_n", "b_n"]:
            raise ParseError(f"expected header n,a_n,b_n, got {','.join(header)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 3:
                row = row + [""] * (3 - len(row))
            try:
                n = int(row[0])
                a = rat(row[1])
                b_txt = row[2].strip()
                b = None if n == 0 and b_txt in ("", "-", "—") else rat(b_txt)
            except (ValueError, TypeError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            if b is not None and n >= 1 and b <= 0:
                raise NonpositiveB(f"line {lineno}: b_{n} = {rat_str(b)} must be positive")
            rows[n] = (a, b)
    if not rows:
        raise ParseError("no data rows")
    for n in range(len(rows)):
        if n not in rows:
            raise GapInIndices(f"missing row n={n}")
    length = len(rows)
    return RecurrencePair(lambda n: rows[n][0], lambda n: rows[n][1], f"csv:{path}", length=length)
