"""Command-line front end: verification campaigns, norm estimates and plot data."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction

from . import addcomb, exponents, krawtchouk, operators
from .report import VerificationReport, dumps

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SUITES = ("krawtchouk", "exponents", "tough", "theorem2", "corollary", "all")
FIGURES = ("exponents", "pi-norms", "t-vs-n")
THETA1_GRID = tuple(f"0.{k:02d}" for k in range(5, 50, 5))
THEOREM2_DELTAS = tuple(f"0.{k}" for k in range(1, 10))


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _n_list(text: str) -> list[int]:
    """'12', '8,16,24' or 'a..b' / 'a..b:step'."""
    try:
        if ".." in text:
            lo, rest = text.split("..", 1)
            hi, _, step = rest.partition(":")
            return list(range(int(lo), int(hi) + 1, int(step) if step else 1))
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse dimension list {text!r}") from exc


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# verify


def _suite_krawtchouk(args) -> list[VerificationReport]:
    reps = []
    ident = VerificationReport("krawtchouk_identities", None, {"n_max": args.n_max})
    wht = VerificationReport("krawtchouk_wht", None, {"n_max": min(args.n_max, krawtchouk.WHT_CROSSCHECK_MAX_N)})
    rdd = VerificationReport("rdd", None, {"n_max": args.n_max})
    rzz = VerificationReport("rzz", None, {"n_max": args.n_max, "c1": Fraction(args.c1), "delta0": args.rzz_delta0})
    rqq = {th: VerificationReport("rqq", None, {"n_max": args.n_max, "theta1": th}) for th in THETA1_GRID}
    for n in range(1, args.n_max + 1):
        t = krawtchouk.build_table(n)
        ident.merge(krawtchouk.check_identities(t))
        if n <= krawtchouk.WHT_CROSSCHECK_MAX_N:
            wht.merge(krawtchouk.wht_crosscheck(t))
        rdd.merge(_tag(krawtchouk.check_rdd(n), n))
        rzz.merge(_tag(krawtchouk.check_rzz(n, args.c1, args.rzz_delta0), n))
        for th, rep in rqq.items():
            rep.merge(_tag(krawtchouk.check_rqq(n, th), n))
    reps += [ident, wht, rdd, *rqq.values(), rzz]
    return reps


def _tag(rep: VerificationReport, n: int) -> VerificationReport:
    """Stamp n into the witness and violation cells before merging across n."""
    if rep.witness is not None:
        rep.witness = {"n": n, **rep.witness}
    rep.violations = [{"n": n, **v} for v in rep.violations]
    return rep


def _suite_exponents(args) -> list[VerificationReport]:
    kas = VerificationReport("kasymp", None, {"n_max": args.n_max})
    for n in range(1, args.n_max + 1):
        kas.merge(_tag(exponents.check_kasymp(n), n))
    step = args.grid_step if args.grid_step is not None else 0.005
    return [kas, exponents.check_E_properties(grid_step=step)]


def _suite_tough(args) -> list[VerificationReport]:
    step = args.grid_step if args.grid_step is not None else 0.001
    return [exponents.check_tough(args.delta0, args.Delta, grid_step=step, required_margin=args.tough_margin)]


def _suite_theorem2(args) -> list[VerificationReport]:
    out = []
    for d in THEOREM2_DELTAS:
        rep = VerificationReport("theorem2", None, {"n_max": args.n_max, "delta": Fraction(d)})
        for n in range(1, args.n_max + 1):
            rep.merge(_tag(operators.check_theorem2(n, d, seed=args.seed), n))
        out.append(rep)
    return out


def _suite_corollary(args) -> list[VerificationReport]:
    n_top = min(args.n_max, 12)
    rep = VerificationReport("corollary", None, {"n_max": n_top, "eps": args.eps, "C": addcomb.DEFAULT_C})
    for n in range(1, n_top + 1):
        for r in addcomb.check_corollary(n, "all", eps=args.eps, seed=args.seed):
            if r.lambda_achieved <= 0:
                continue
            cell = {"n": n, "family": r.family, "set": r.label, "j": r.j}
            rep.observe(r.bound - r.ratio, {**cell, "bound": "hypercontractive"})
            if r.sg_bound is not None:
                # relative slack absorbs float rounding at the equality case
                rep.observe(r.sg_bound * (1 + addcomb.REL_TOL) - r.ratio, {**cell, "bound": "spectral_gap"})
    return [rep]


SUITE_RUNNERS = {
    "krawtchouk": _suite_krawtchouk,
    "exponents": _suite_exponents,
    "tough": _suite_tough,
    "theorem2": _suite_theorem2,
    "corollary": _suite_corollary,
}


def cmd_verify(args) -> int:
    if args.n_max < 1:
        raise UsageError(f"--n-max must be >= 1, got {args.n_max}")
    if args.n_max > krawtchouk.MAX_TABLE_N:
        raise UsageError(f"--n-max must be <= {krawtchouk.MAX_TABLE_N}")
    if not 0.0 < args.eps < 0.5:
        raise UsageError(f"--eps must lie in (0, 1/2) for the corollary harness, got {args.eps}")
    names = list(SUITE_RUNNERS) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        reports.extend(SUITE_RUNNERS[name](args))
    passed = all(r.passed for r in reports)
    doc = {
        "command": "verify",
        "suite": args.suite,
        "config": {"n_max": args.n_max, "seed": args.seed, "grid_step": args.grid_step, "eps": args.eps},
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }
    _emit(dumps(doc), args.out)
    for r in reports:
        mark = "ok  " if r.passed else "FAIL"
        print(f"{mark} {r.lemma} {dumps(r.params).replace(chr(10), '').replace('  ', '')} "
              f"cells={r.cells_checked} violations={len(r.violations)}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VIOLATION


# figure


def _p_values(args, delta: float | None = None) -> list[float]:
    if args.p is None:
        raise UsageError("--p is required")
    if args.p == "auto":
        if delta is None:
            raise UsageError("--p auto needs --delta")
        return [operators.p_of_delta(delta)]
    return _floats(args.p)


def cmd_figure(args) -> int:
    step = args.grid_step if args.grid_step is not None else 0.005
    if args.figure == "exponents":
        deltas = _floats(args.delta or "0.1,0.3")
        rows = exponents.exponent_curve_rows(deltas, step)
        text = _csv(["delta", "xi", "E", "E_minus_h", "in_critical_strip"], rows)
    elif args.figure == "pi-norms":
        rows = []
        for p in _p_values(args):
            rows.extend((p, *r) for r in operators.pi_norm_exponent_rows(p, step))
        text = _csv(["p", "a_over_n", "kkl_exponent", "interpolated_exponent", "lower_exponent"], rows)
    else:
        rows = []
        for d in _floats(args.delta or "0.3"):
            for p in _p_values(args, d):
                rows.extend((d, p, *r) for r in operators.t_vs_n_rows(d, p, step))
        text = _csv(["delta", "p", "a_over_n", "t_eigen_exponent", "n_eigen_exponent", "neg_pi_exponent",
                     "in_critical_strip"], rows)
    _emit(text, args.out)
    return EXIT_OK


# table


def cmd_table(args) -> int:
    if args.n is None:
        raise UsageError("table needs --n")
    n = _n_list(args.n)[0]
    if not 1 <= n <= krawtchouk.MAX_TABLE_N:
        raise UsageError(f"--n must lie in [1, {krawtchouk.MAX_TABLE_N}]")
    t = krawtchouk.build_table(n)
    if args.format == "json":
        _emit(dumps({"command": "table", "n": n, "krawtchouk": [list(r) for r in t.k]}), args.out)
    else:
        _emit(_csv(["j", *[f"x={x}" for x in range(n + 1)]], ([j, *t.k[j]] for j in range(n + 1))), args.out)
    return EXIT_OK


# norms


def _norm_record(n: int, delta: float, p: float, seed: int) -> dict:
    prof = operators.make_profile(n, "spherical", delta)
    est = operators.norm_lower_search(prof, p, operators.SearchConfig(seed=seed))
    if p == 1.0:
        upper = operators.norm_1_to_2_exact(prof)
    else:
        upper = operators.norm_upper_certificate(prof, p)
    return {"n": n, "delta": delta, "p": p, "radius": prof.radius, "lower": est.lower, "upper_certificate": upper,
            "witness_kind": est.witness_kind, "iterations": est.iterations}


def cmd_norms(args) -> int:
    if args.growth:
        if args.delta is None or args.p in (None, "auto") or args.eps is None:
            raise UsageError("--growth needs --delta, --p and --eps")
        ns = _n_list(args.n or "8..64:8")
        records = []
        for d in _floats(args.delta):
            for p in _floats(args.p):
                seq = operators.counterexample_growth(d, p, args.eps, ns)
                ratios = [r for _, r in seq]
                records.append({
                    "delta": d, "p": p, "eps": args.eps,
                    "n": [m for m, _ in seq], "ratio": ratios,
                    "strictly_increasing": all(b > a for a, b in zip(ratios, ratios[1:])),
                })
        _emit(dumps({"command": "norms", "mode": "growth", "records": records}), args.out)
        return EXIT_OK
    if args.n is None:
        raise UsageError("norms needs --n")
    n = _n_list(args.n)[0]
    if args.grid == "K":
        pairs = operators.norm_grid_K(args.theta, args.p0)
    elif args.grid is not None:
        raise UsageError(f"unknown grid {args.grid!r}; only K is defined")
    else:
        if args.delta is None or args.p is None:
            raise UsageError("norms needs --delta and --p, or --grid K")
        deltas = _floats(args.delta)
        pairs = [(d, p) for d in deltas for p in _p_values(args, d)]
    records = [_norm_record(n, d, p, args.seed) for d, p in pairs]
    doc = {"command": "norms", "mode": "grid" if args.grid else "points", "n": n, "records": records}
    code = EXIT_OK
    if args.check_le is not None:
        worst = max(r["lower"] for r in records)
        doc["check_le"] = {"limit": args.check_le, "max_lower": worst, "passed": worst <= args.check_le}
        code = EXIT_OK if worst <= args.check_le else EXIT_VIOLATION
    _emit(dumps(doc), args.out)
    return code


# addcomb


def cmd_addcomb(args) -> int:
    if args.n is None:
        raise UsageError("addcomb needs --n")
    eps = 0.25 if args.eps is None else args.eps
    reports = []
    for n in _n_list(args.n):
        reports.extend(addcomb.check_corollary(n, args.family, eps=eps, seed=args.seed))
    if args.format == "csv":
        _emit(addcomb.reports_to_csv(reports), args.out)
    else:
        _emit(dumps({"command": "addcomb", "eps": eps, "C": addcomb.DEFAULT_C,
                     "records": addcomb.reports_to_records(reports)}), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", help="dimension, list 'a,b' or range 'a..b[:step]'")
    common.add_argument("--n-max", type=int, default=32)
    common.add_argument("--delta", help="comma-separated delta values")
    common.add_argument("--p", help="comma-separated p values, or 'auto' for p(delta) = 1 + (1-2 delta)^2")
    common.add_argument("--q", type=float, default=2.0)
    common.add_argument("--eps", type=float)
    common.add_argument("--grid-step", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path; stdout when omitted")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    ap = argparse.ArgumentParser(prog="hamming-hc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run exhaustive and grid verification suites")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--c1", default="1", help="rzz constant C1 (exact decimal)")
    v.add_argument("--rzz-delta0", default="0.174", help="rzz range delta0 (exact decimal)")
    v.add_argument("--delta0", type=float, default=0.05, help="tough scan lower end")
    v.add_argument("--Delta", type=float, default=0.45, help="tough scan upper end")
    v.add_argument("--tough-margin", type=float, default=1e-3, help="required negative margin of the tough objective")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("figure", parents=[common], help="emit CSV data for exponent plots")
    f.add_argument("figure", choices=FIGURES)
    f.set_defaults(func=cmd_figure)

    t = sub.add_parser("table", parents=[common], help="print the exact Krawtchouk table")
    t.set_defaults(func=cmd_table)

    nm = sub.add_parser("norms", parents=[common], help="p->2 norm estimates of the spherical average")
    nm.add_argument("--grid", help="'K' for the compact grid of (delta, p)")
    nm.add_argument("--theta", default="0.1")
    nm.add_argument("--p0", default="1.02")
    nm.add_argument("--check-le", type=float, help="exit 1 if any lower estimate exceeds this value")
    nm.add_argument("--growth", action="store_true", help="epsilon-product ratio over a list of n")
    nm.set_defaults(func=cmd_norms)

    ac = sub.add_parser("addcomb", parents=[common], help="corollary harness over structured and random sets")
    ac.add_argument("--family", choices=("all", *addcomb.FAMILIES), default="all")
    ac.set_defaults(func=cmd_addcomb)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "verify" and args.eps is None:
        args.eps = 0.25
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"hamming-hc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
