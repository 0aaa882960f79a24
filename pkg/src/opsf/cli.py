"""Command line entry point ``opsf``.

Exit codes: 0 all checks passed, 1 exact mismatch (strict) or conjecture
counterexample, 2 usage/config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- config file -----------------------------------------------------------------


def read_config(path: str) -> dict:
    """``key = value`` per line; ``#`` starts a comment; keys use flag names."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _apply_config(parser: argparse.ArgumentParser, values: dict) -> None:
    actions = {a.dest: a for a in parser._actions}
    for a in parser._actions:
        for opt in a.option_strings:
            actions.setdefault(opt.lstrip("-").replace("-", "_"), a)
    defaults = {}
    for key, value in values.items():
        if key not in actions or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for this subcommand")
        act = actions[key]
        key = act.dest
        act.required = False
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            v = value.lower()
            if v not in _TRUE | _FALSE:
                raise UsageError(f"config key {key!r} expects a boolean")
            defaults[key] = v in _TRUE
        else:
            defaults[key] = value  # string defaults pass through the argument type
    parser.set_defaults(**defaults)


# -- output ----------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def run_config(args: argparse.Namespace) -> dict:
    # worker count and console flags do not change results, so they stay out
    # of the provenance header; reports are byte-identical across them
    skip = {"handler", "workers", "quiet"}
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def emit(args, body: dict, exit_code: int, started: float, rows: Optional[tuple] = None) -> int:
    report = {"tool": "opsf", "version": __version__, "run_config": run_config(args)}
    report.update(body)
    report["exit_code"] = exit_code
    if args.timing:
        report["wall_time_s"] = time.perf_counter() - started
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.csv and rows is not None:
        header, data = rows
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(data)
    if not args.quiet:
        summary = body.get("summary")
        if summary:
            print(summary)
        if not args.json:
            print(text)
    return exit_code


def _frac(text: str) -> Fraction:
    from .exact import rat

    try:
        return rat(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers: {text!r}") from exc


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers: {text!r}") from exc


# -- subcommands -----------------------------------------------------------------


def cmd_schur(args, t0):
    from .identities import schur_check

    rep = schur_check(args.n, samples=args.samples, seed=args.seed)
    verdict = rep.to_json()
    msg = f"schur n={args.n}: sos_exact={rep.sos_exact} verdict={verdict['verdict']}"
    return emit(args, {"schur": verdict, "summary": msg}, EXIT_OK if rep.passed else EXIT_MISMATCH, t0)


_IDENTITY_PARAMS = ("alpha", "beta", "gamma", "delta", "lambda", "mu", "q")


def cmd_identity(args, t0):
    from .identities import CONNECTION_KINDS, PARAM_NAMES, identity_check

    if args.kind not in PARAM_NAMES:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(PARAM_NAMES)}")
    params = {}
    for name in PARAM_NAMES[args.kind]:
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"--kind {args.kind} needs --{name}")
        params[name] = v
    rep = identity_check(args.kind, params, args.max, mode=args.mode, min_index=args.min, workers=args.workers)
    body = {"identity_check": rep.to_json()}
    first = rep.first_failure()
    msg = f"{args.kind}: {rep.n_match} match, {rep.n_mismatch} mismatch, {rep.n_error} formula error " \
          f"({rep.mode} mode) -> {rep.verdict}"
    if first is not None:
        detail = first.to_json()
        body["first_failure"] = detail
        where = "n" if args.kind in CONNECTION_KINDS else "(m,n)"
        msg += f"\nfirst failure at {where}={tuple(first.index)}: {first.verdict}"
        if first.first_mismatch is not None:
            k = first.first_mismatch
            msg += f" at k={k}: formula {first.formula[k]} vs oracle {first.oracle[k]}"
        if first.reason:
            msg += f" ({first.reason})"
    body["summary"] = msg
    rows = (["index", "k", "formula", "oracle"],
            [[" ".join(map(str, p.index)), c["k"], c["formula"], c["oracle"]]
             for p in rep.points for c in p.to_json()["coefficients"]])
    return emit(args, body, EXIT_OK if rep.passed else EXIT_MISMATCH, t0, rows)


def cmd_connect(args, t0):
    from .families import parse_family
    from .identities import connection_oracle

    src, tgt = parse_family(args.source), parse_family(args.target)
    coeffs = connection_oracle(src, tgt, args.n)
    msg = f"{src} P_{args.n} = " + " + ".join(f"({c})*Q_{k}" for k, c in enumerate(coeffs) if c) + f"  [Q = {tgt}]"
    rows = (["k", "coefficient"], [[k, str(c)] for k, c in enumerate(coeffs)])
    return emit(args, {"source": str(src), "target": str(tgt), "n": args.n, "coefficients": coeffs,
                       "summary": msg}, EXIT_OK, t0, rows)


def cmd_linearize(args, t0):
    from .families import parse_family
    from .identities import linearization_oracle

    f = parse_family(args.family)
    tgt = parse_family(args.target) if args.target else f
    coeffs = linearization_oracle(f, args.m, args.n, tgt)
    msg = f"P_{args.m} P_{args.n} [{f}] = " + " + ".join(f"({c})*Q_{k}" for k, c in enumerate(coeffs) if c) + \
          f"  [Q = {tgt}]"
    rows = (["k", "coefficient"], [[k, str(c)] for k, c in enumerate(coeffs)])
    return emit(args, {"family": str(f), "target": str(tgt), "m": args.m, "n": args.n,
                       "coefficients": coeffs, "summary": msg}, EXIT_OK, t0, rows)


def cmd_multisum(args, t0):
    from . import multisum as ms

    body, ok = {}, True
    if args.kdf:
        p = ms.KdfPoint(tuple(args.kdf), args.kappa)
        dbl, single = ms.kdf_double(p)[1], ms.kdf_single(p)
        res = ms.kdf_recurrence_residual(p)
        good = dbl == single and ms.kdf_symmetry_check(p) and res == 0
        ok &= good
        body["kdf_point"] = {"alphas": list(p.alphas), "kappa": p.kappa, "s_prime_double": dbl,
                             "s_prime_single": single, "symmetric": ms.kdf_symmetry_check(p),
                             "recurrence_residual": res}
    checks = {"closed", "recurrence", "kdf", "nonterm"} if args.check == "all" else \
        ({args.check} if args.check else set())
    if "closed" in checks:
        bad = ms.closed_form_sweep(args.max)
        ok &= not bad
        body["closed_form"] = {"max": args.max, "failures": bad}
    if "recurrence" in checks:
        bad = ms.recurrence_sweep(args.max)
        ok &= not any(bad.values())
        body["recurrences"] = bad
    if "kdf" in checks:
        out = ms.kdf_sweep(args.kdf_max_sum)
        ok &= not (out["double_vs_single"] or out["symmetry"] or out["recurrence"])
        body["kdf_sweep"] = out
    if "nonterm" in checks:
        rows = []
        for beta, n in ((Fraction(5, 2), 0), (Fraction(1, 3), 2)):
            val, tail = ms.s_nonterminating(beta, n, tol=args.tol)
            closed = ms.s_nonterm_closed(beta, n)
            rows.append({"beta": beta, "n": n, "series": val, "tail_bound": tail, "closed": closed,
                         "abs_diff": abs(val - closed)})
            ok &= abs(val - closed) <= 1e-8
        body["nonterminating"] = rows
    if not body:
        raise UsageError("nothing to do: give --check or --kdf")
    body["summary"] = f"multisum: {'all checks passed' if ok else 'FAILURES found'}"
    return emit(args, body, EXIT_OK if ok else EXIT_MISMATCH, t0)


def _recurrence_from_args(args):
    from .families import constant_recurrence, family_recurrence, load_recurrence_csv, parse_family

    given = [x for x in (args.family, args.recurrence, args.constant) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --family, --recurrence, --constant")
    if args.family:
        return family_recurrence(parse_family(args.family))
    if args.recurrence:
        return load_recurrence_csv(args.recurrence)
    parts = [_frac(v) for v in args.constant.split(",")]
    if len(parts) not in (2, 3):
        raise UsageError("--constant expects a,b or a,b,b1")
    return constant_recurrence(*parts)


def cmd_spectra(args, t0):
    from .spectra import blumenthal_experiment

    rec = _recurrence_from_args(args)
    rep = blumenthal_experiment(rec, args.sizes, track=args.track)
    msg = f"spectra {rep.source}: lower {rep.lower_trend}, upper {rep.upper_trend}, {rep.case}"
    rows = (["N", "side", "rank", "zero"],
            [[e["N"], side, i + 1, z] for e in rep.extremes for side in ("lowest", "highest")
             for i, z in enumerate(e[side])])
    return emit(args, {"spectra": rep.to_json(), "summary": msg}, EXIT_OK, t0, rows)


def cmd_zeros(args, t0):
    from .spectra import op_zeros

    rec = _recurrence_from_args(args)
    z = op_zeros(rec, args.n)
    rows = (["k", "zero"], [[k + 1, v] for k, v in enumerate(z)])
    return emit(args, {"source": rec.source, "n": args.n, "zeros": z,
                       "summary": f"{args.n} zeros of P_{args.n} [{rec.source}] in [{z[0]:.12g}, {z[-1]:.12g}]"},
                EXIT_OK, t0, rows)


def cmd_bernoulli(args, t0):
    from .spectra import bernoulli_exhaustive, bernoulli_montecarlo

    if args.exhaustive:
        rep = bernoulli_exhaustive(args.n, solver=args.solver, bins=args.bins)
    else:
        rep = bernoulli_montecarlo(args.n, args.samples, seed=args.seed, bins=args.bins or 80,
                                   workers=args.workers)
    msg = f"bernoulli n={args.n} {rep.mode}: {rep.samples} matrices"
    if rep.kolmogorov is not None:
        msg += f", Kolmogorov distance to semicircle {rep.kolmogorov:.4g}"
    rows = (["bin_lo", "bin_hi", "count"], rep.histogram)
    return emit(args, {"bernoulli": rep.to_json(), "summary": msg}, EXIT_OK, t0, rows)


def cmd_positivity(args, t0):
    from .positivity import PositivityScanConfig, monotonicity_check, positivity_scan

    lam, delta = float(args.lam), float(args.delta)
    cfg = PositivityScanConfig(lam, delta, args.nmax, args.tgrid, args.tol)
    rep = positivity_scan(cfg, workers=args.workers)
    body = {"scan": rep.to_json()}
    code = EXIT_OK
    if rep.counterexample:
        code = EXIT_MISMATCH
    elif rep.unconverged:
        code = EXIT_NUMERIC
    if args.monotone:
        deltas = [delta] + [float(d) for d in args.monotone]
        mono = monotonicity_check(lam, deltas, args.nmax, args.tgrid, args.tol, workers=args.workers)
        body["monotonicity"] = mono.to_json()
        if not mono.passed and code == EXIT_OK:
            code = EXIT_MISMATCH
    m = rep.min_row
    body["summary"] = f"positivity lambda={args.lam} delta={args.delta}: min F = {m[2]:.6g} at n={m[0]}, " \
                      f"t={m[1]:.6g}; verdict {rep.verdict}"
    rows = (["n", "t", "value", "err", "sign"], [list(r) for r in rep.rows])
    return emit(args, body, code, t0, rows)


def cmd_mzv(args, t0):
    from . import mzv

    body, ok, rows = {}, True, None
    if args.identity:
        lhs, rhs = mzv.parse_identity(args.identity)
        d = mzv.identity_difference(lhs, rhs, args.N)
        body["identity"] = d
        body["summary"] = f"zeta_N({','.join(map(str, lhs))}) - zeta_N({','.join(map(str, rhs))}) = {d['lhs_value'] - d['rhs_value']:.3e} at N={args.N}"
    if args.alternating:
        body["alternating"] = mzv.alternating_block_check(args.alternating, args.N)
    if args.family:
        fam = args.family.upper() if args.family.lower() != "atilde" else "ATILDE"
        if fam == "B":
            polys = mzv.b_poly_recurrence(args.alpha, args.n)
        elif fam in ("A", "ATILDE"):
            A, At = mzv.a_polys(args.n)
            polys = A if fam == "A" else At
        else:
            raise UsageError("--family must be B, A or Atilde")
        body["polynomials"] = [p.to_json() for p in polys]
        rows = (["n", "power_of_x", "coefficient"],
                [[n, i, c] for n, p in enumerate(polys) for i, c in enumerate(p.to_json()["coeffs"])])
        if args.zeros:
            zs = []
            for n, p in enumerate(polys):
                if p.degree < 1:
                    continue
                z = mzv.xpoly_real_zeros(p)
                zs.append({"n": n, **z.to_json()})
            body["zeros"] = zs
            body["zero_findings"] = [z["n"] for z in zs if not z["all_negative"] and not z["boundary_root_at_zero"]]
            neg = sum(z["all_negative"] for z in zs)
            body["summary"] = f"{fam} n<={args.n}: {neg}/{len(zs)} polynomials with all zeros real negative"
        body.setdefault("summary", f"{fam} polynomials up to n={args.n}")
    if args.limit:
        lim = mzv.limit_check(args.limit, N=args.n, J=args.J)
        body["limit"] = lim.to_json()
        body.setdefault("summary", "limit check: " + ", ".join(f"t={r[0]}: |diff|={r[4]:.3e}" for r in lim.rows))
    if not body:
        raise UsageError("nothing to do: give --family, --identity, --alternating or --limit")
    return emit(args, body, EXIT_OK if ok else EXIT_MISMATCH, t0, rows)


def cmd_all(args, t0):
    from .acceptance import run_criterion, CRITERIA

    results = []
    for k in sorted(CRITERIA):
        r = run_criterion(k)
        results.append(r)
        if not args.quiet:
            print(r.line(), flush=True)
    passed = sum(r.passed for r in results)
    body = {"criteria": [r.to_json(timing=args.timing) for r in results],
            "summary": f"{passed}/{len(results)} criteria passed"}
    return emit(args, body, EXIT_OK if passed == len(results) else EXIT_MISMATCH, t0)


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--config", help="key = value file; command-line flags override it")
    g.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    g.add_argument("--json", metavar="PATH", help="write the JSON report here")
    g.add_argument("--csv", metavar="PATH", help="write the main table as CSV here")
    g.add_argument("--workers", type=int, default=None, help="worker processes (default: OPSF_THREADS or 1)")
    g.add_argument("--timing", action="store_true", help="add wall time to the report")
    g.add_argument("--quiet", action="store_true", help="print nothing to stdout")

    p = argparse.ArgumentParser(prog="opsf", description="Exact and numerical checks for orthogonal "
                                                         "polynomial identities and related experiments.")
    p.add_argument("--version", action="version", version=f"opsf {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("schur", parents=[common], help="Schur inequality: exact SOS identity and sampling")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(handler=cmd_schur)

    s = sub.add_parser("identity-check", parents=[common], help="compare a printed formula with the oracle")
    s.add_argument("--kind", required=True, help="e.g. gegenbauer-lin, laguerre-conn, chebyshev-product")
    for name in _IDENTITY_PARAMS:
        s.add_argument(f"--{name}", type=_frac, default=None, dest=name)
    s.add_argument("--max", type=int, default=6, help="largest index (m, n or n)")
    s.add_argument("--min", type=int, default=0, help="smallest index")
    s.add_argument("--mode", choices=("strict", "survey"), default="strict")
    s.set_defaults(handler=cmd_identity)

    s = sub.add_parser("connect", parents=[common], help="connection coefficients between two families")
    s.add_argument("--from", dest="source", required=True, help="e.g. gegenbauer:lambda=1/3")
    s.add_argument("--to", dest="target", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(handler=cmd_connect)

    s = sub.add_parser("linearize", parents=[common], help="product P_m P_n expanded in a basis")
    s.add_argument("--family", required=True)
    s.add_argument("--target", default=None, help="expansion basis (default: same family)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(handler=cmd_linearize)

    s = sub.add_parser("multisum", parents=[common], help="terminating and nonterminating double sums")
    s.add_argument("--check", choices=("closed", "recurrence", "kdf", "nonterm", "all"), default=None)
    s.add_argument("--max", type=int, default=20)
    s.add_argument("--kdf-max-sum", type=int, default=10, dest="kdf_max_sum")
    s.add_argument("--kdf", type=_int_list, default=None, help="single point, e.g. 3,1,1,1")
    s.add_argument("--kappa", type=_frac, default=Fraction(1))
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(handler=cmd_multisum)

    for name, handler, hlp in (("spectra", cmd_spectra, "extreme zeros across sizes"),
                               ("zeros", cmd_zeros, "all zeros of P_n")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--family", default=None, help="e.g. meixner:beta=1,c=1/2")
        s.add_argument("--recurrence", default=None, help="CSV with header n,a_n,b_n")
        s.add_argument("--constant", default=None, help="a,b[,b1] for a constant recurrence")
        if name == "spectra":
            s.add_argument("--sizes", type=_int_list, default=[25, 50, 100, 200])
            s.add_argument("--track", type=int, default=3)
        else:
            s.add_argument("--n", type=int, required=True)
        s.set_defaults(handler=handler)

    s = sub.add_parser("bernoulli", parents=[common], help="spectra of random symmetric sign matrices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--solver", choices=("auto", "native", "lapack"), default="auto")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--bins", type=int, default=None)
    s.set_defaults(handler=cmd_bernoulli)

    s = sub.add_parser("positivity", parents=[common], help="sign scan of the weighted Gegenbauer integral")
    s.add_argument("--lambda", dest="lam", type=_frac, required=True)
    s.add_argument("--delta", type=_frac, required=True)
    s.add_argument("--nmax", type=int, default=20)
    s.add_argument("--tgrid", type=int, default=200)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--monotone", type=_float_list, default=None,
                   help="larger deltas for the monotonicity check, e.g. 3,4")
    s.set_defaults(handler=cmd_positivity)

    s = sub.add_parser("mzv", parents=[common], help="polynomials in t^3, product limit, truncated MZVs")
    s.add_argument("--family", default=None, help="B, A or Atilde")
    s.add_argument("--alpha", type=_frac, default=Fraction(1))
    s.add_argument("--n", type=int, default=20)
    s.add_argument("--zeros", action="store_true")
    s.add_argument("--identity", default=None, help="e.g. 2,1=3")
    s.add_argument("--alternating", type=int, default=None, help="block count l of the alternating identity")
    s.add_argument("--N", type=int, default=1_000_000, dest="N")
    s.add_argument("--limit", type=_float_list, default=None, help="t values for the product limit check")
    s.add_argument("--J", type=int, default=100_000, dest="J")
    s.set_defaults(handler=cmd_mzv)

    s = sub.add_parser("all", parents=[common], help="run the full acceptance suite")
    s.set_defaults(handler=cmd_all)
    return p


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for act in parser._actions:
        if isinstance(act, argparse._SubParsersAction):
            return act.choices[name]
    raise KeyError(name)


def _config_path(argv: Sequence[str]) -> Optional[str]:
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .exact import DomainError, ExactError
    from .families import GapInIndices, NonpositiveB, ParameterDomain, ParseError
    from .multisum import ToleranceNotReached as SeriesTolerance
    from .positivity import ToleranceNotReached as QuadTolerance
    from .spectra import NoConvergence

    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        config = _config_path(argv)
        if config is not None and argv and not argv[0].startswith("-"):
            try:
                sp = _subparser(parser, argv[0])
            except KeyError:
                sp = None
            if sp is not None:
                _apply_config(sp, read_config(config))
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"opsf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        return args.handler(args, t0)
    except (NoConvergence, SeriesTolerance, QuadTolerance) as exc:
        print(f"opsf: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ParameterDomain, ParseError, GapInIndices, NonpositiveB, DomainError, ExactError,
            ValueError, KeyError, OSError) as exc:
        print(f"opsf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
