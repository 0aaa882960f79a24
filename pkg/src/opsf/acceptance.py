"""The fourteen acceptance checks, shared by the test suite and ``opsf all``.

Each check returns a CriterionResult; the time bound is part of the verdict.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import identities, multisum, mzv, positivity, spectra
from .families import constant_recurrence, family, family_recurrence


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.limit

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        timing = f"{self.seconds:.2f}s < {self.limit:g}s" if self.seconds < self.limit else \
            f"{self.seconds:.2f}s >= {self.limit:g}s (too slow)"
        return f"[{tag}] criterion {self.number:2d}: {self.title} ({timing})"

    def to_json(self, timing: bool = True) -> dict:
        out = {"criterion": self.number, "title": self.title, "passed": self.passed,
               "checks_ok": self.ok, "time_limit_s": self.limit, "detail": self.detail}
        if timing:
            out["seconds"] = self.seconds
        return out


CRITERIA: dict[int, tuple[str, float, Callable[[], tuple[bool, dict]]]] = {}
# most recent result per criterion in this process (read by the test summary hook)
LAST_RESULTS: dict[int, CriterionResult] = {}


def criterion(number: int, title: str, limit: float):
    def register(fn):
        CRITERIA[number] = (title, limit, fn)
        return fn
    return register


def run_criterion(number: int) -> CriterionResult:
    title, limit, fn = CRITERIA[number]
    t0 = time.perf_counter()
    ok, detail = fn()
    res = CriterionResult(number, title, bool(ok), time.perf_counter() - t0, limit, detail)
    LAST_RESULTS[number] = res
    return res


def run_all() -> list[CriterionResult]:
    return [run_criterion(k) for k in sorted(CRITERIA)]


# -- criteria --------------------------------------------------------------------


@criterion(1, "Schur n=2 sum-of-squares identity is an exact polynomial equality", 1.0)
def _c1():
    rep = identities.schur_check(2, samples=200, seed=0)
    return rep.sos_exact is True, {"sos_exact": rep.sos_exact}


@criterion(2, "double sum S(m,n) equals the closed form for 0 <= m,n <= 20", 10.0)
def _c2():
    bad = multisum.closed_form_sweep(20)
    return not bad, {"points": 441, "failures": bad[:5]}


@criterion(3, "T-recurrence and both S-recurrences have zero residual for 0..20", 10.0)
def _c3():
    bad = multisum.recurrence_sweep(20)
    return not any(bad.values()), {k: v[:5] for k, v in bad.items()}


@criterion(4, "Kampe de Feriet double == single, symmetry and contiguous relation", 60.0)
def _c4():
    out = multisum.kdf_sweep(10, (Fraction(1, 2), Fraction(1), Fraction(3)))
    ok = not (out["double_vs_single"] or out["symmetry"] or out["recurrence"])
    return ok, {"points": out["points"],
                "first_failures": {k: [list(map(str, w)) for w in out[k][:1]]
                                   for k in ("double_vs_single", "symmetry", "recurrence")}}


@criterion(5, "nonterminating series within 1e-8 of the closed form", 5.0)
def _c5():
    rows = []
    for beta, n in ((Fraction(5, 2), 0), (Fraction(1, 3), 2)):
        val, tail = multisum.s_nonterminating(beta, n, tol=1e-10)
        closed = multisum.s_nonterm_closed(beta, n)
        rows.append({"beta": str(beta), "n": n, "series": val, "closed": closed, "abs_diff": abs(val - closed),
                     "tail": tail})
    return all(r["abs_diff"] <= 1e-8 for r in rows), {"rows": rows}


def _all_match(runs) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for kind, params, mx in runs:
        rep = identities.identity_check(kind, params, mx, mode="strict")
        key = f"{kind} {','.join(f'{k}={v}' for k, v in params.items())}"
        detail[key] = {"match": rep.n_match, "mismatch": rep.n_mismatch, "formula_error": rep.n_error}
        ok &= rep.verdict == "Match"
    return ok, detail


@criterion(6, "Gegenbauer linearization and connection formulas equal the oracle", 60.0)
def _c6():
    runs = [("gegenbauer-lin", {"lambda": lam}, 8) for lam in ("1/3", "1/2", "2", "7/5")]
    runs += [("gegenbauer-conn", {"lambda": "1/3", "mu": "1/2"}, 10),
             ("gegenbauer-conn", {"lambda": "2", "mu": "7/5"}, 10)]
    return _all_match(runs)


@criterion(7, "Laguerre/Jacobi connections and the Chebyshev product equal the oracle", 60.0)
def _c7():
    runs = [("laguerre-conn", {"alpha": "1/2", "beta": "3"}, 12),
            ("jacobi-conn", {"gamma": "1/2", "delta": "1/3", "alpha": "2", "beta": "3/4"}, 8),
            ("jacobi-conn", {"gamma": "0", "delta": "0", "alpha": "1", "beta": "-1/2"}, 8)]
    ok, detail = _all_match(runs)
    # chebyshev-product over 1 <= n < m <= 10
    bad = []
    for m in range(2, 11):
        for n in range(1, m):
            if identities.check_point("chebyshev-product", {}, (m, n)).verdict != "Match":
                bad.append((m, n))
    detail["chebyshev-product 1<=n<m<=10"] = {"failures": bad}
    return ok and not bad, detail


@criterion(8, "survey mode: Laguerre A and Jacobi h evaluated deterministically over m,n <= 6", 60.0)
def _c8():
    detail = {}
    ok = True
    for kind, params in (("laguerre-lin", {"alpha": "0"}), ("jacobi-lin", {"alpha": "1/2", "beta": "1/3"})):
        a = identities.identity_check(kind, params, 6, mode="survey")
        b = identities.identity_check(kind, params, 6, mode="survey")
        same = json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
        ok &= same and a.passed and len(a.points) == 49
        detail[kind] = {"deterministic": same, "match": a.n_match, "mismatch": a.n_mismatch,
                        "formula_error": a.n_error}
    lag11 = identities.check_point("laguerre-lin", {"alpha": "0"}, (1, 1))
    detail["laguerre m=n=1"] = lag11.to_json()
    ok &= lag11.verdict == "Mismatch"
    return ok, detail


@criterion(9, "positivity scans for (lambda,delta) = (1,2),(2,3),(3,4): min F >= -1e-10", 300.0)
def _c9():
    detail = {}
    ok = True
    for lam, delta in ((1, 2), (2, 3), (3, 4)):
        rep = positivity.positivity_scan(positivity.PositivityScanConfig(lam, delta, 20, 200, 1e-10))
        n, t, v, e, _ = rep.min_row
        detail[f"{lam},{delta}"] = {"min": v, "argmin": [n, t], "verdict": rep.verdict,
                                    "unconverged": len(rep.unconverged)}
        ok &= v >= -1e-10
    return ok, detail


@criterion(10, "B_n explicit == recurrence, deg B_n = floor(n/2), partial sums of A exact", 60.0)
def _c10():
    bad = []
    for alpha in ("1/2", "1", "3/2", "5/2"):
        rec = mzv.b_poly_recurrence(alpha, 20)
        bad += [("degree", alpha, n) for n in range(21) if rec[n].degree != n // 2]
        bad += [("explicit", alpha, n) for n in range(13) if mzv.b_poly_explicit(alpha, n) != rec[n]]
    try:
        A, At = mzv.a_polys(40)
        partial_ok = all((At[n] - At[n - 1]) == A[n] for n in range(1, 41))
    except mzv.StructureViolation as exc:
        partial_ok = False
        bad.append(("partial", str(exc)))
    return not bad and partial_ok, {"failures": [list(map(str, b)) for b in bad]}


@criterion(11, "|A~_40(1) - prod_{j<=1e5}(1+1/(8j^3))| < 1e-6; Sturm verdicts for B_n(1) reported", 120.0)
def _c11():
    lim = mzv.limit_check([1.0], N=40, J=100_000)
    diff = lim.rows[0][4]
    B = mzv.b_poly_recurrence(1, 30)
    verdicts = {n: mzv.xpoly_real_zeros(B[n]).all_negative for n in range(3, 31)}
    far = mzv.a_tilde_float(1.0, [40, 1000, 10_000, 100_000])
    prod, _ = mzv.product_truncation(1.0, 1_000_000)
    return diff < 1e-6, {
        "abs_diff_at_40": diff,
        "sturm_all_negative": all(verdicts.values()),
        "sturm_findings": [n for n, v in verdicts.items() if not v],
        "float_recursion_abs_diff": {str(n): abs(v - prod) for n, v in far.items()},
    }


@criterion(12, "zeta_N(2,1) ~ zeta_N(3) and zeta_N(2,1,2,1) ~ zeta_N(3,3) within 1e-4 at N=1e6", 60.0)
def _c12():
    a = mzv.identity_difference((2, 1), (3,), 1_000_000)
    b = mzv.identity_difference((2, 1, 2, 1), (3, 3), 1_000_000)
    return a["abs_diff"] < 1e-4 and b["abs_diff"] < 1e-4, {"2,1=3": a["abs_diff"], "2,1,2,1=3,3": b["abs_diff"]}


@criterion(13, "Chebyshev zeros, constant recurrence edge, Meixner-Pollaczek divergence", 30.0)
def _c13():
    z = spectra.op_zeros(family_recurrence(family("chebyshev-t")), 100)
    exact = sorted(math.cos((2 * k - 1) * math.pi / 200) for k in range(1, 101))
    cheb_err = max(abs(a - b) for a, b in zip(z, exact))
    x1 = spectra.op_zeros(constant_recurrence(0, Fraction(1, 4)), 100)[0]
    mp = spectra.blumenthal_experiment(
        family_recurrence(family("meixner-pollaczek", **{"lambda": 1, "cos": 0, "sin": 1})), [25, 50, 100, 200])
    ok = cheb_err < 1e-12 and abs(x1 + 1) < 0.01 and mp.lower_trend == "diverging_down" \
        and mp.upper_trend == "diverging_up"
    return ok, {"chebyshev_max_err": cheb_err, "x_100_1": x1, "mp_lower": mp.lower_trend,
                "mp_upper": mp.upper_trend}


@criterion(14, "Bernoulli ensembles: n=2 enumeration, n=4 timing, Monte Carlo semicircle", 120.0)
def _c14():
    r2 = spectra.bernoulli_exhaustive(2)
    s = math.sqrt(2)
    want = {(-2.0, 0.0): 2, (-round(s, 9), round(s, 9)): 4, (0.0, 2.0): 2}
    got = {tuple(k): c for k, c in r2.spectra}
    t0 = time.perf_counter()
    spectra.bernoulli_exhaustive(4)
    t4 = time.perf_counter() - t0
    mc1 = spectra.bernoulli_montecarlo(50, 10_000, seed=0)
    mc2 = spectra.bernoulli_montecarlo(50, 10_000, seed=0)
    same = json.dumps(mc1.to_json(), sort_keys=True) == json.dumps(mc2.to_json(), sort_keys=True)
    ok = got == want and t4 < 5.0 and mc1.kolmogorov < 0.05 and same
    return ok, {"n2_spectra": [[list(k), c] for k, c in sorted(got.items())], "n4_seconds": t4,
                "kolmogorov": mc1.kolmogorov, "byte_identical_rerun": same}
