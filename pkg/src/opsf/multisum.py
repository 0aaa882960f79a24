"""Double sums S(m,n), T(i,n), the nonterminating S(beta,n), and the
Kampe de Feriet sum s with its single-sum form s'."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import DomainError, ln_gamma, beta_fn, pochhammer, rat

HALF = Fraction(1, 2)


class ConvergenceDomain(DomainError):
    pass


class ToleranceNotReached(ArithmeticError):
    def __init__(self, msg, value=None, err=None):
        super().__init__(msg)
        self.value = value
        self.err = err


class ParityViolation(ValueError):
    pass


# -- S(m, n) and T(i, n) -------------------------------------------------------


@lru_cache(maxsize=None)
def _inner_coeffs(n: int) -> tuple:
    # (-n)_j (1/2-n)_j / (j! (1/2)_j)
    out = [Fraction(1)]
    for j in range(n):
        out.append(out[-1] * (j - n) * (HALF - n + j) / ((j + 1) * (HALF + j)))
    return tuple(out)


@lru_cache(maxsize=None)
def t_inner(i: int, n: int) -> Fraction:
    """T(i,n) = sum_{j<=n} (-n)_j (1/2-n)_j / (j! (1/2)_j) / (i+j+1/2)."""
    if i < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    return sum((c / (i + j + HALF) for j, c in enumerate(_inner_coeffs(n))), Fraction(0))


@lru_cache(maxsize=None)
def s_terminating(m: int, n: int) -> Fraction:
    """The double sum S(m,n), summed term by term."""
    total = Fraction(0)
    outer = Fraction(1)
    for i in range(m + 1):
        total += outer * t_inner(i, n)
        outer = outer * (i - m) * (n + 1 + i) / ((i + 1) * (m + n + 2 + i))
    return total


def s_closed(m: int, n: int) -> Fraction:
    f = math.factorial
    num = 2 ** (2 * m + 2 * n) * f(m) * f(m + n) * f(m + n + 1) * pochhammer(HALF, n)
    den = f(n) * f(n + 2 * m + 1) * pochhammer(HALF, m + n + 1)
    return num / den


def t_recurrence_residual(i: int, n: int) -> Fraction:
    lhs = (i + n + 2) * (2 * i + 2 * n + 5) * t_inner(i + 2, n)
    rhs = (4 * i * i + 4 * i * n + 12 * i + 2 * n * n + 5 * n + 9) * t_inner(i + 1, n) \
        - (i + 1) * (2 * i + 1) * t_inner(i, n)
    return lhs - rhs


def check_t_recurrence(i: int, n: int) -> bool:
    return t_recurrence_residual(i, n) == 0


def s_recurrence_residuals(m: int, n: int, S=s_terminating) -> tuple[Fraction, Fraction]:
    r_n = (n + 1) * (2 * m + n + 2) * (2 * m + 2 * n + 3) * S(m, n + 1) \
        - 4 * (2 * n + 1) * (m + n + 1) * (m + n + 2) * S(m, n)
    r_m = (2 * m + n + 2) * (2 * m + n + 3) * (2 * m + 2 * n + 3) * S(m + 1, n) \
        - 8 * (m + 1) * (m + n + 1) * (m + n + 2) * S(m, n)
    return r_n, r_m


def check_s_recurrences(m: int, n: int, use_closed: bool = False) -> tuple[bool, bool]:
    r_n, r_m = s_recurrence_residuals(m, n, s_closed if use_closed else s_terminating)
    return r_n == 0, r_m == 0


def check_pochhammer_rewriting(i: int, j: int) -> bool:
    """1/(i+j+1/2) == 2 (1/2)_{i+j} / (3/2)_{i+j}."""
    return 1 / (i + j + HALF) == 2 * pochhammer(HALF, i + j) / pochhammer(Fraction(3, 2), i + j)


# -- nonterminating S(beta, n) -------------------------------------------------


def s_nonterminating(beta, n: int, tol: float = 1e-10, max_terms: int = 10_000_000) -> tuple[float, float]:
    """Partial sums of the j-series until the integral tail bound drops below tol.

    Returns (value, tail_bound).  The tail bound assumes |term_j| ~ C j^{-p}
    with p = 2 beta + 2 and C read off the last computed term.
    """
    beta = rat(beta)
    if beta <= -HALF:
        raise ConvergenceDomain(f"series needs beta > -1/2, got {beta}")
    if beta.denominator == 1 and beta >= 0:
        raise DomainError("beta must not be a natural number")
    if n < 0 or tol <= 0:
        raise ValueError("need n >= 0 and tol > 0")
    b = float(beta)
    p = 2.0 * b + 2.0
    binoms = [math.comb(2 * n, 2 * i) for i in range(n + 1)]
    coef = 1.0  # (-beta)_j (n+1)_j / (j! (beta+n+2)_j)
    terms = []
    tail = math.inf
    for j in range(max_terms):
        inner = math.fsum(c / (i + j + 0.5) for i, c in enumerate(binoms))
        t = coef * inner
        terms.append(t)
        if j >= 8:
            tail = abs(t) * j / (p - 1.0)
            if tail < tol:
                return math.fsum(terms), tail
        coef *= (j - b) * (n + 1 + j) / ((j + 1) * (b + n + 2 + j))
    raise ToleranceNotReached(f"tail bound {tail:.3g} above tol after {max_terms} terms",
                              math.fsum(terms), tail)


def s_nonterm_closed(beta, n: int) -> float:
    b = float(rat(beta))
    log_val = (
        (2 * b + 2 * n) * math.log(2.0)
        + math.log(beta_fn(b + 1, n + 0.5))
        + ln_gamma(n + b + 2) + ln_gamma(n + b + 1)
        - ln_gamma(n + 1) - ln_gamma(n + 2 * b + 2)
    )
    return math.exp(log_val)


# -- Kampe de Feriet sum -------------------------------------------------------


@dataclass(frozen=True)
class KdfPoint:
    alphas: tuple
    kappa: Fraction

    def __post_init__(self):
        al = tuple(int(a) for a in self.alphas)
        if len(al) != 4 or any(a < 0 for a in al):
            raise ParityViolation("need four nonnegative integers")
        if len({a % 2 for a in al}) != 1:
            raise ParityViolation(f"alphas {al} are not all even or all odd")
        object.__setattr__(self, "alphas", al)
        object.__setattr__(self, "kappa", rat(self.kappa))

    @property
    def b(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4 = self.alphas
        return (a2 + a3) // 2, (a1 + a4) // 2, (a2 + a4) // 2, (a3 + a4) // 2


def _ratio_prefactor(kappa, bs) -> Fraction:
    out = Fraction(1)
    for b in bs:
        out *= pochhammer(HALF, b) / pochhammer(kappa + HALF, b)
    return out


def kdf_double(p: KdfPoint) -> tuple[Fraction, Fraction]:
    """(s, s') from the printed double sum; s' strips the (2k)(2k)/(4k) factor."""
    a1, a2, a3, a4 = p.alphas
    b0, b1, b2, b3 = p.b
    k = p.kappa
    total = Fraction(0)
    for i in range(a4 // 2 + 1):
        ci = pochhammer(Fraction(-a4), 2 * i) / (math.factorial(i) * pochhammer(HALF - b1, i))
        for j in range(a3 // 2 + 1):
            cj = pochhammer(Fraction(-a3), 2 * j) / (math.factorial(j) * pochhammer(HALF - b0, j))
            total += ci * cj * pochhammer(k, i + j) / (pochhammer(HALF - b3, i + j) * 4 ** (i + j))
    s_prime = _ratio_prefactor(k, (b1, b0, b3)) * total
    outer = pochhammer(2 * k, 2 * b1) * pochhammer(2 * k, 2 * b0) / pochhammer(4 * k, 2 * b1 + 2 * b0)
    return outer * s_prime, s_prime


def kdf_single(p: KdfPoint) -> Fraction:
    """s' from the printed terminating balanced 4F3 single sum."""
    a4 = p.alphas[3]
    b0, b1, b2, b3 = p.b
    k = p.kappa
    total = Fraction(0)
    term = Fraction(1)
    u1, u2, u3, u4 = Fraction(-a4, 2), Fraction(1 - a4, 2), k, -k - b1 - b0
    for i in range(a4 // 2 + 1):
        total += term
        term = term * (u1 + i) * (u2 + i) * (u3 + i) * (u4 + i) / (
            (i + 1) * (HALF - b1 + i) * (HALF - b2 + i) * (HALF - b3 + i)
        )
    return _ratio_prefactor(k, (b1, b2, b3)) * total


def s_prime(alphas, kappa) -> Fraction:
    return kdf_single(KdfPoint(tuple(alphas), kappa))


def kdf_symmetry_check(p: KdfPoint) -> bool:
    ref = kdf_single(p)
    return all(kdf_single(KdfPoint(perm, p.kappa)) == ref for perm in set(itertools.permutations(p.alphas)))


def kdf_recurrence_residual(p: KdfPoint, sp=None) -> Fraction:
    sp = sp or (lambda al: kdf_single(KdfPoint(al, p.kappa)))
    a1, a2, a3, a4 = p.alphas
    k = p.kappa
    c_left = a1 * a4 * (k + Fraction(a2 + a3 + 1, 2))
    c_mid = Fraction(a2 * a3 * (a1 + a4 + 1) - a1 * a4 * (a2 + a3 + 1), 2)
    c_right = a2 * a3 * (k + Fraction(a1 + a4 + 1, 2))
    lhs = c_mid * sp((a1, a2, a3, a4))
    if c_left:
        lhs += c_left * sp((a1 - 1, a2 + 1, a3 + 1, a4 - 1))
    rhs = c_right * sp((a1 + 1, a2 - 1, a3 - 1, a4 + 1)) if c_right else Fraction(0)
    return lhs - rhs


def kdf_recurrence_check(p: KdfPoint) -> bool:
    return kdf_recurrence_residual(p) == 0


def parity_valid_alphas(max_sum: int):
    """All (a1..a4) >= 0 of one parity with a1+a2+a3+a4 <= max_sum."""
    for total in range(max_sum + 1):
        for a1 in range(total + 1):
            for a2 in range(total - a1 + 1):
                for a3 in range(total - a1 - a2 + 1):
                    a4 = total - a1 - a2 - a3
                    if len({a1 % 2, a2 % 2, a3 % 2, a4 % 2}) == 1:
                        yield a1, a2, a3, a4


# -- sweeps --------------------------------------------------------------------


def closed_form_sweep(max_index: int) -> list[tuple[int, int]]:
    """(m, n) points where the double sum differs from the closed form."""
    return [(m, n) for m in range(max_index + 1) for n in range(max_index + 1)
            if s_terminating(m, n) != s_closed(m, n)]


def recurrence_sweep(max_index: int) -> dict:
    bad_t = [(i, n) for i in range(max_index + 1) for n in range(max_index + 1) if not check_t_recurrence(i, n)]
    bad_sn, bad_sm = [], []
    for m in range(max_index + 1):
        for n in range(max_index + 1):
            ok_n, ok_m = check_s_recurrences(m, n)
            if not ok_n:
                bad_sn.append((m, n))
            if not ok_m:
                bad_sm.append((m, n))
    return {"t_recurrence": bad_t, "s_recurrence_n": bad_sn, "s_recurrence_m": bad_sm}


def kdf_sweep(max_sum: int = 10, kappas=(HALF, Fraction(1), Fraction(3))) -> dict:
    """Double == single, permutation symmetry and contiguous relation on all
    parity-valid points.  Failures are listed smallest first (minimal witnesses)."""
    kappas = [rat(k) for k in kappas]
    out = {"points": 0, "double_vs_single": [], "symmetry": [], "recurrence": []}
    for kappa in kappas:
        for al in parity_valid_alphas(max_sum):
            p = KdfPoint(al, kappa)
            out["points"] += 1
            single = kdf_single(p)
            if kdf_double(p)[1] != single:
                out["double_vs_single"].append((al, kappa))
            if not kdf_symmetry_check(p):
                out["symmetry"].append((al, kappa))
            if kdf_recurrence_residual(p) != 0:
                out["recurrence"].append((al, kappa))
    return out
