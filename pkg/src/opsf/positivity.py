"""Quadrature for F_n^{lambda,delta}(t) = int_0^t (t-u)^delta C_n^lambda(cos u) sin(u)^{2 lambda} du
and grid scans of its sign."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .exact import rat
from .families import TridiagonalMatrix
from .spectra import eigen_sym_tridiagonal_first_components


class ToleranceNotReached(ArithmeticError):
    def __init__(self, msg, value=None, err=None):
        super().__init__(msg)
        self.value = value
        self.err = err


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Golub-Welsch on the monic Legendre Jacobi matrix, then one or two Newton
    steps on P_n to polish nodes and weights to full precision.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    off = [k / math.sqrt(4.0 * k * k - 1.0) for k in range(1, n)]
    nodes, first = eigen_sym_tridiagonal_first_components(TridiagonalMatrix([0.0] * n, off))
    x = np.array(nodes)
    w = 2.0 * np.array(first) ** 2
    if n > 1:
        for _ in range(2):
            p, dp = _legendre_with_derivative(n, x)
            x = x - p / dp
        _, dp = _legendre_with_derivative(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
    # exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _legendre_with_derivative(n: int, x: np.ndarray):
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gegenbauer_values(n_max: int, lam: float, x: np.ndarray) -> np.ndarray:
    """Rows C_0^lam(x) .. C_{n_max}^lam(x) by the three-term recurrence."""
    out = np.empty((n_max + 1,) + np.shape(x))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * lam * x
    for k in range(1, n_max):
        out[k + 1] = (2.0 * (k + lam) * x * out[k] - (k + 2.0 * lam - 1.0) * out[k - 1]) / (k + 1)
    return out


GL_POINTS = 16
MAX_PANELS = 4000
EPS = np.finfo(float).eps


@dataclass
class IntegralResult:
    values: np.ndarray
    errors: np.ndarray
    panels: int
    converged: bool


def _panel(n_max, lam, delta, t, a, b, xg, wg):
    h = 0.5 * (b - a)
    u = a + h * (xg + 1.0)
    g = (t - u) ** delta * np.sin(u) ** (2.0 * lam) * gegenbauer_values(n_max, lam, np.cos(u))
    return h * (g @ wg), h * (np.abs(g) @ wg)


def f_integral_all(n_max: int, lam, delta, t: float, tol: float = 1e-10) -> IntegralResult:
    """F_0..F_{n_max} at one t, sharing one adaptive panel set.

    Panels are bisected worst-first; a panel's error is the difference
    between its own rule and the rule on its two halves.  Bisection toward
    a singular endpoint is geometric with ratio 1/2.  A roundoff floor of
    64 eps * int|g| is folded into the reported error.
    """
    lam, delta, t = float(lam), float(delta), float(t)
    if not (lam > 0 and delta > 0 and 0 < t <= math.pi + 1e-15 and n_max >= 0 and tol > 0):
        raise ValueError("need lambda > 0, delta > 0, 0 < t <= pi, n >= 0, tol > 0")
    t = min(t, math.pi)
    xg, wg = gauss_legendre(GL_POINTS)
    n0 = max(2, int(math.ceil(n_max * t / math.pi)) + 1)
    edges = np.linspace(0.0, t, n0 + 1)
    heap = []
    tie = 0
    total_fine = np.zeros(n_max + 1)
    total_err = np.zeros(n_max + 1)
    total_abs = np.zeros(n_max + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        coarse, _ = _panel(n_max, lam, delta, t, a, b, xg, wg)
        m = 0.5 * (a + b)
        l, la = _panel(n_max, lam, delta, t, a, m, xg, wg)
        r, ra = _panel(n_max, lam, delta, t, m, b, xg, wg)
        err = np.abs(l + r - coarse)
        total_fine += l + r
        total_err += err
        total_abs += la + ra
        heapq.heappush(heap, (-float(err.max()), tie, a, b, l, r, err, la + ra))
        tie += 1
    panels = len(heap)
    while True:
        floor = 64.0 * EPS * total_abs
        if np.all(total_err <= np.maximum(tol, floor)):
            converged = True
            break
        if panels >= MAX_PANELS:
            converged = False
            break
        _, _, a, b, l, r, err, absval = heapq.heappop(heap)
        total_fine -= l + r
        total_err -= err
        total_abs -= absval
        m = 0.5 * (a + b)
        for (c, d, coarse) in ((a, m, l), (m, b, r)):
            mid = 0.5 * (c + d)
            ll, lla = _panel(n_max, lam, delta, t, c, mid, xg, wg)
            rr, rra = _panel(n_max, lam, delta, t, mid, d, xg, wg)
            e = np.abs(ll + rr - coarse)
            total_fine += ll + rr
            total_err += e
            total_abs += lla + rra
            heapq.heappush(heap, (-float(e.max()), tie, c, d, ll, rr, e, lla + rra))
            tie += 1
        panels += 1
    # recompute sums from the panel set to shed accumulated update roundoff
    vals = math_fsum_rows([item[4] + item[5] for item in heap])
    errs = math_fsum_rows([item[6] for item in heap])
    absint = math_fsum_rows([item[7] for item in heap])
    errs = np.maximum(errs, 64.0 * EPS * absint)
    return IntegralResult(vals, errs, len(heap), converged)


def math_fsum_rows(rows: Sequence[np.ndarray]) -> np.ndarray:
    stacked = np.stack(rows)
    return np.array([math.fsum(col) for col in stacked.T])


def f_integral(n: int, lam, delta, t: float, tol: float = 1e-10, strict: bool = False) -> tuple[float, float]:
    """(value, error estimate) of F_n^{lambda,delta}(t)."""
    res = f_integral_all(n, lam, delta, t, tol)
    if strict and not res.converged:
        raise ToleranceNotReached(f"error {res.errors[n]:.3g} above tol {tol:.3g}", res.values[n], res.errors[n])
    return float(res.values[n]), float(res.errors[n])


# -- scans ---------------------------------------------------------------------


@dataclass(frozen=True)
class PositivityScanConfig:
    lam: float
    delta: float
    n_max: int = 20
    t_points: int = 200
    tol: float = 1e-10

    def __post_init__(self):
        if not (float(self.lam) > 0 and float(self.delta) > 0):
            raise ValueError("lambda and delta must be positive")
        if self.n_max < 0 or self.t_points < 1 or not self.tol > 0:
            raise ValueError("need n_max >= 0, t_points >= 1, tol > 0")

    def t_grid(self) -> np.ndarray:
        # uniform on (0, pi], t = 0 excluded
        return math.pi * np.arange(1, self.t_points + 1) / self.t_points


def classify(value: float, err: float, tol: float) -> str:
    band = max(tol, 4.0 * err)
    if value < -band:
        return "Negative"
    if value > band:
        return "Positive"
    return "Indeterminate"


@dataclass
class ScanReport:
    config: PositivityScanConfig
    rows: list = field(default_factory=list)  # (n, t, value, err, sign)
    unconverged: list = field(default_factory=list)

    @property
    def min_row(self):
        return min(self.rows, key=lambda r: r[2])

    @property
    def negatives(self) -> list:
        return [r for r in self.rows if r[4] == "Negative"]

    @property
    def witness(self):
        neg = self.negatives
        return min(neg, key=lambda r: (r[0], r[1])) if neg else None

    @property
    def in_proved_regime(self) -> bool:
        return float(self.config.delta) >= float(self.config.lam) + 1

    @property
    def verdict(self) -> str:
        if self.witness is not None:
            return "NegativeWitness"
        if self.in_proved_regime:
            return "ConsistentWithConjecture"
        return "Inconclusive"

    @property
    def counterexample(self) -> bool:
        """A Negative point where the conjecture predicts positivity."""
        return self.in_proved_regime and self.witness is not None

    def to_json(self) -> dict:
        n, t, v, e, _ = self.min_row
        w = self.witness
        counts = {s: sum(r[4] == s for r in self.rows) for s in ("Positive", "Negative", "Indeterminate")}
        return {
            "lambda": float(self.config.lam),
            "delta": float(self.config.delta),
            "n_max": self.config.n_max,
            "t_points": self.config.t_points,
            "tol": self.config.tol,
            "min": {"n": n, "t": t, "value": v, "err": e},
            "sign_counts": counts,
            "verdict": self.verdict,
            "witness": None if w is None else {"n": w[0], "t": w[1], "value": w[2], "err": w[3]},
            "unconverged_t": self.unconverged,
        }


def _scan_one_t(args):
    n_max, lam, delta, t, tol = args
    res = f_integral_all(n_max, lam, delta, t, tol)
    return res.values.tolist(), res.errors.tolist(), res.converged


def positivity_scan(cfg: PositivityScanConfig, workers: int = 1) -> ScanReport:
    from .parallel import ordered_map

    lam, delta = float(rat(cfg.lam)) if isinstance(cfg.lam, str) else float(cfg.lam), float(cfg.delta)
    ts = cfg.t_grid()
    results = ordered_map(_scan_one_t, [(cfg.n_max, lam, delta, float(t), cfg.tol) for t in ts], workers)
    rep = ScanReport(cfg)
    per_t = list(zip(ts, results))
    for n in range(cfg.n_max + 1):
        for t, (vals, errs, _) in per_t:
            rep.rows.append((n, float(t), vals[n], errs[n], classify(vals[n], errs[n], cfg.tol)))
    rep.unconverged = [float(t) for t, (_, _, ok) in per_t if not ok]
    return rep


@dataclass
class MonotonicityReport:
    lam: float
    deltas: list
    all_positive: dict
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"lambda": self.lam, "deltas": self.deltas,
                "positive_everywhere": {str(k): v for k, v in self.all_positive.items()},
                "violations": self.violations}


def monotonicity_check(lam, deltas: Sequence, n_max: int = 20, t_points: int = 200,
                       tol: float = 1e-10, workers: int = 1) -> MonotonicityReport:
    """Wherever F^{lambda,delta} is Positive on the whole grid, every larger
    delta must be nowhere Negative on the same grid."""
    deltas = sorted(float(d) for d in deltas)
    scans = {d: positivity_scan(PositivityScanConfig(float(lam), d, n_max, t_points, tol), workers)
             for d in deltas}
    all_pos = {d: all(r[4] == "Positive" for r in scans[d].rows) for d in deltas}
    violations = []
    for i, d in enumerate(deltas):
        if not all_pos[d]:
            continue
        for g in deltas[i + 1:]:
            for r in scans[g].negatives:
                violations.append({"delta": d, "gamma": g, "n": r[0], "t": r[1], "value": r[2]})
    return MonotonicityReport(float(lam), deltas, all_pos, violations)
