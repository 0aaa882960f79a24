"""Symmetric tridiagonal eigenvalues, zero trends of recurrences, and
spectra of random symmetric +-1 matrices."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .families import RecurrencePair, TridiagonalMatrix, jacobi_matrix


class NoConvergence(ArithmeticError):
    pass


class SizeTooLarge(ValueError):
    pass


MAX_QL_ITER = 60


def _ql_implicit(d: list, e: list, z: Optional[list] = None) -> None:
    """In-place implicit QL with Wilkinson-type shifts (tqli).

    ``d`` diagonal, ``e`` off-diagonal padded with a trailing 0.  If ``z``
    is given it is the first row of the eigenvector matrix and is rotated
    along.
    """
    n = len(d)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if it == MAX_QL_ITER:
                raise NoConvergence(f"QL iteration did not converge for eigenvalue {l}")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    f = z[i + 1]
                    z[i + 1] = s * z[i] + c * f
                    z[i] = c * z[i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def eigen_sym_tridiagonal(T: TridiagonalMatrix) -> list[float]:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending."""
    d = [float(x) for x in T.diag]
    e = [float(x) for x in T.offdiag] + [0.0]
    if len(e) != len(d):
        raise ValueError("offdiag must have length len(diag) - 1")
    if not all(math.isfinite(x) for x in d + e):
        raise ValueError("matrix entries must be finite")
    _ql_implicit(d, e)
    return sorted(d)


def eigen_sym_tridiagonal_first_components(T: TridiagonalMatrix) -> tuple[list[float], list[float]]:
    """Eigenvalues (ascending) and first components of the unit eigenvectors."""
    d = [float(x) for x in T.diag]
    e = [float(x) for x in T.offdiag] + [0.0]
    z = [1.0] + [0.0] * (len(d) - 1)
    _ql_implicit(d, e, z)
    order = sorted(range(len(d)), key=d.__getitem__)
    return [d[i] for i in order], [z[i] for i in order]


def householder_tridiagonal(A) -> TridiagonalMatrix:
    """Reduce a dense symmetric matrix to tridiagonal form by reflections."""
    A = np.array(A, dtype=float, copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    for k in range(n - 2):
        x = A[k + 1:, k].copy()
        alpha = -math.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
        v = x
        v[0] -= alpha
        vn = np.linalg.norm(v)
        if vn == 0.0:
            continue
        v /= vn
        # A <- H A H on the trailing block, H = I - 2 v v^T
        sub = A[k + 1:, k + 1:]
        w = sub @ v
        kk = v @ w
        q = w - kk * v
        sub -= 2.0 * (np.outer(v, q) + np.outer(q, v))
        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = A[k, k + 1] = alpha
    diag = [float(A[i, i]) for i in range(n)]
    off = [float(A[i + 1, i]) for i in range(n - 1)]
    return TridiagonalMatrix(diag, off)


def eigvals_symmetric(A) -> list[float]:
    return eigen_sym_tridiagonal(householder_tridiagonal(A))


def op_zeros(rec: RecurrencePair, n: int) -> list[float]:
    """Zeros of the monic P_n, as eigenvalues of the n x n Jacobi matrix."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return eigen_sym_tridiagonal(jacobi_matrix(rec, n))


# -- zero-trend experiments ----------------------------------------------------


def _trend(values: Sequence[float]) -> str:
    """Classify a sequence sampled at growing N as bounded or diverging.

    Diverging means strictly monotone with increments that do not decay
    (last increment at least half the first); convergent zero sequences of
    bounded recurrences have increments shrinking like N^-2.
    """
    if len(values) < 3:
        return "undetermined"
    diffs = [b - a for a, b in zip(values, values[1:])]
    if all(d > 0 for d in diffs) and diffs[-1] >= 0.5 * diffs[0]:
        return "diverging_up"
    if all(d < 0 for d in diffs) and diffs[-1] <= 0.5 * diffs[0]:
        return "diverging_down"
    return "bounded"


@dataclass
class SpectrumReport:
    source: str
    sizes: list
    extremes: list = field(default_factory=list)
    sigma_hat: Optional[float] = None
    tau_hat: Optional[float] = None
    limits: Optional[dict] = None
    ratio: list = field(default_factory=list)
    ratio_limit: Optional[float] = None
    lower_trend: str = "undetermined"
    upper_trend: str = "undetermined"
    case: str = "undetermined"

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "sizes": self.sizes,
            "extremes": self.extremes,
            "sigma_hat": self.sigma_hat,
            "tau_hat": self.tau_hat,
            "bounded_limits": self.limits,
            "quarter_ratio": self.ratio,
            "quarter_ratio_last": self.ratio_limit,
            "lower_trend": self.lower_trend,
            "upper_trend": self.upper_trend,
            "sigma_case": self.case,
        }


def quarter_ratio(rec: RecurrencePair, n_max: int) -> list:
    """b_{n+1}/(a_n a_{n+1}); None where a diagonal entry vanishes."""
    out = []
    for n in range(n_max):
        an, an1 = rec.a(n), rec.a(n + 1)
        prod = an * an1
        out.append(None if prod == 0 else float(rec.b(n + 1) / prod))
    return out


def blumenthal_experiment(rec: RecurrencePair, sizes: Sequence[int], track: int = 3) -> SpectrumReport:
    sizes = sorted(set(int(s) for s in sizes))
    rep = SpectrumReport(rec.source, sizes)
    lows, highs = [], []
    for N in sizes:
        z = op_zeros(rec, N)
        k = min(track, N)
        rep.extremes.append({"N": N, "lowest": z[:k], "highest": z[::-1][:k]})
        lows.append(z[0])
        highs.append(z[-1])
    rep.sigma_hat, rep.tau_hat = lows[-1], highs[-1]
    rep.lower_trend, rep.upper_trend = _trend(lows), _trend(highs)
    rep.case = {"diverging_down": "sigma=-inf", "diverging_up": "sigma=+inf"}.get(rep.lower_trend, "sigma finite")

    Nmax = sizes[-1]
    a_hi, a_mid = float(rec.a(Nmax - 1)), float(rec.a(max(0, (Nmax - 1) // 2)))
    b_hi, b_mid = float(rec.b(max(1, Nmax - 1))), float(rec.b(max(1, (Nmax - 1) // 2)))
    if abs(a_hi - a_mid) <= 1e-3 * (1 + abs(a_hi)) and abs(b_hi - b_mid) <= 1e-3 * (1 + abs(b_hi)):
        c, lam = a_hi, b_hi
        rep.limits = {
            "c": c,
            "lambda": lam,
            "sigma": c - 2 * math.sqrt(lam),
            "tau": c + 2 * math.sqrt(lam),
            # the halved variant as printed, reported side by side
            "sigma_printed": 0.5 * (c - 2 * math.sqrt(lam)),
            "tau_printed": 0.5 * (c + 2 * math.sqrt(lam)),
        }
    if Nmax >= 2:
        rep.ratio = quarter_ratio(rec, Nmax - 1)
        rep.ratio_limit = rep.ratio[-1] if rep.ratio else None
    return rep


# -- Bernoulli matrices --------------------------------------------------------


def semicircle_cdf(x):
    x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    return 0.5 + x * np.sqrt(4.0 - x * x) / (4.0 * math.pi) + np.arcsin(x / 2.0) / math.pi


def kolmogorov_to_semicircle(samples) -> float:
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    F = semicircle_cdf(x)
    hi = np.arange(1, m + 1) / m - F
    lo = F - np.arange(0, m) / m
    return float(max(hi.max(), lo.max()))


def _histogram(values, lo: float, hi: float, bins: int) -> list:
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return [[float(edges[i]), float(edges[i + 1]), int(counts[i])] for i in range(bins)]


@dataclass
class BernoulliEnsembleReport:
    n: int
    mode: str
    samples: int
    seed: Optional[int] = None
    spectra: list = field(default_factory=list)
    eigenvalue_counts: list = field(default_factory=list)
    histogram: list = field(default_factory=list)
    kolmogorov: Optional[float] = None
    max_trace_error: float = 0.0

    def to_json(self) -> dict:
        out = {"n": self.n, "mode": self.mode, "samples": self.samples}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.spectra:
            out["distinct_spectra"] = [{"spectrum": s, "count": c} for s, c in self.spectra]
        if self.eigenvalue_counts:
            out["eigenvalue_counts"] = [{"eigenvalue": v, "count": c} for v, c in self.eigenvalue_counts]
        out["histogram"] = self.histogram
        out["kolmogorov_distance"] = self.kolmogorov
        out["max_trace_error"] = self.max_trace_error
        return out


def _key(vals) -> tuple:
    return tuple(round(v, 9) + 0.0 for v in vals)


def _all_sign_matrices(n: int):
    iu = np.triu_indices(n)
    m = len(iu[0])
    for bits in range(1 << m):
        A = np.empty((n, n))
        signs = [1.0 if (bits >> t) & 1 else -1.0 for t in range(m)]
        A[iu] = signs
        A.T[iu] = signs
        yield A


def bernoulli_exhaustive(n: int, solver: str = "auto", bins: Optional[int] = None) -> BernoulliEnsembleReport:
    """Enumerate every symmetric +-1 matrix of size n (n <= 6).

    ``solver="native"`` uses the Householder + QL path of this module;
    ``"lapack"`` batches numpy.linalg.eigvalsh; ``"auto"`` picks native for
    n <= 4.
    """
    if not 1 <= n <= 6:
        raise SizeTooLarge("exhaustive enumeration supports 1 <= n <= 6")
    if solver == "auto":
        solver = "native" if n <= 4 else "lapack"
    m = n * (n + 1) // 2
    total = 1 << m
    spectra: Counter = Counter()
    eig_counts: Counter = Counter()
    all_vals = []
    max_trace_err = 0.0
    if solver == "native":
        for A in _all_sign_matrices(n):
            vals = eigvals_symmetric(A)
            max_trace_err = max(max_trace_err, abs(sum(vals) - float(np.trace(A))))
            spectra[_key(vals)] += 1
            all_vals.extend(vals)
    elif solver == "lapack":
        iu = np.triu_indices(n)
        batch = 1 << 14
        for start in range(0, total, batch):
            codes = np.arange(start, min(total, start + batch), dtype=np.int64)
            bits = ((codes[:, None] >> np.arange(m)) & 1).astype(float) * 2.0 - 1.0
            A = np.zeros((codes.size, n, n))
            A[:, iu[0], iu[1]] = bits
            A[:, iu[1], iu[0]] = bits
            vals = np.linalg.eigvalsh(A)
            tr = np.trace(A, axis1=1, axis2=2)
            max_trace_err = max(max_trace_err, float(np.abs(vals.sum(axis=1) - tr).max()))
            for row in np.round(vals, 9) + 0.0:
                spectra[tuple(row.tolist())] += 1
            all_vals.append(vals.ravel())
        all_vals = np.concatenate(all_vals)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    for spec, c in spectra.items():
        for v in spec:
            eig_counts[v] += c
    bins = bins or 20 * n
    rep = BernoulliEnsembleReport(n, "exhaustive", total)
    rep.spectra = sorted(([list(k), c] for k, c in spectra.items()), key=lambda t: t[0])
    rep.eigenvalue_counts = sorted(([k, c] for k, c in eig_counts.items()), key=lambda t: t[0])
    rep.histogram = _histogram(np.asarray(all_vals), -float(n), float(n), bins)
    rep.max_trace_error = max_trace_err
    return rep


MC_BLOCK = 256


def _mc_block(n: int, seed: int, block: int, count: int) -> np.ndarray:
    rng = np.random.default_rng([seed, block])
    iu = np.triu_indices(n)
    signs = rng.integers(0, 2, size=(count, len(iu[0]))).astype(float) * 2.0 - 1.0
    A = np.zeros((count, n, n))
    A[:, iu[0], iu[1]] = signs
    A[:, iu[1], iu[0]] = signs
    return np.linalg.eigvalsh(A)


def bernoulli_montecarlo(n: int, samples: int, seed: int = 0, bins: int = 80,
                         workers: int = 1) -> BernoulliEnsembleReport:
    """Seeded sampling of the ensemble; eigenvalues are scaled by 1/sqrt(n).

    Samples are drawn in fixed blocks, block b from the stream (seed, b), so
    the result does not depend on how blocks are spread over workers.
    """
    if n < 1 or samples < 1:
        raise ValueError("need n >= 1 and samples >= 1")
    from .parallel import ordered_map

    jobs = []
    for b, start in enumerate(range(0, samples, MC_BLOCK)):
        jobs.append((n, seed, b, min(MC_BLOCK, samples - start)))
    blocks = ordered_map(_mc_block_args, jobs, workers)
    vals = np.concatenate([v.ravel() for v in blocks]) / math.sqrt(n)
    rep = BernoulliEnsembleReport(n, "montecarlo", samples, seed=seed)
    rep.histogram = _histogram(vals, -2.5, 2.5, bins)
    rep.kolmogorov = kolmogorov_to_semicircle(vals)
    return rep


def _mc_block_args(args):
    return _mc_block(*args)
