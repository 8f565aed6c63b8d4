"""``isingser`` command line.

Exit codes: 0 success, 1 usage or domain error, 2 resource refusal,
3 golden or cache-audit mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fitting, painleve, refdata, transforms
from .cache import SeriesCache, cache_key
from .errors import IsingSeriesError, ResourceBudgetExceeded
from .ht import CorrelationId, ht_compute
from .lt import lt_compute, magnetization_squared
from .series import TruncatedSeries, format_series

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------- helpers


def _cid(args) -> CorrelationId:
    if args.row is not None:
        return CorrelationId.row(args.row)
    if args.diag is not None:
        return CorrelationId.diagonal(args.diag)
    try:
        m, n = (int(p) for p in args.offset.split(","))
    except ValueError:
        raise UsageError(f"--offset expects m,n, got {args.offset!r}") from None
    if n == 0:
        return CorrelationId.row(m)
    return CorrelationId.diagonal(m) if m == n else CorrelationId.general(m, n)


def _oracle_series(oracle, cid, order, args):
    compute = ht_compute if oracle == "ht" else lt_compute
    kw = {"method": args.method, "padding": args.padding}
    if args.state_cap:
        kw["state_cap"] = args.state_cap

    def run():
        return compute(cid, order, **kw)

    if args.no_cache:
        series, prov = run()
        return series, prov
    cache = SeriesCache(args.cache_dir)
    key = cache_key(oracle, cid, order, args.padding, args.method)
    series, prov, hit = cache.fetch(key, run)
    if args.audit:
        fresh, _ = run()
        if fresh != series or fresh.to_json_obj() != series.to_json_obj():
            raise _Mismatch(f"cache audit failed for {key}")
        print(f"cache audit: identical ({'hit' if hit else 'fresh entry'})", file=sys.stderr)
    return series, dict(prov, cache="hit" if hit else "miss")


class _Mismatch(Exception):
    pass


def _emit(series: TruncatedSeries, fmt: str, prov: dict | None = None, trivial: bool = False):
    if fmt == "json":
        obj = series.to_json_obj()
        if prov is not None:
            obj["provenance"] = prov
        print(json.dumps(obj, sort_keys=True))
    elif fmt == "csv":
        print("exponent,numerator,denominator")
        for e, c in series.terms():
            print(f"{e},{c.numerator},{c.denominator}")
    elif trivial:
        print("1")
    else:
        print(format_series(series))


_HT_VARS = ("v", "x", "wgt", "kgt_hat")
_LT_VARS = ("u", "klt_hat")


def _ht_view(s: TruncatedSeries, var: str) -> TruncatedSeries:
    if var == "v":
        return s
    if var == "x":
        return transforms.x_series_from_v(s)
    w = transforms.to_khat_gt(s)
    if var == "wgt":
        return w
    try:
        return transforms.to_kgt_hat(w)
    except ValueError:
        raise UsageError("odd powers of sqrt(khat) present; use --var wgt") from None


# ------------------------------------------------------------ commands


def cmd_ht(args):
    cid = _cid(args)
    if args.connected:
        raise UsageError("--connected applies to the low-temperature series only")
    if args.var not in _HT_VARS:
        raise UsageError(f"--var for ht must be one of {', '.join(_HT_VARS)}")
    order = args.order if args.order is not None else cid.distance + 16
    s, prov = _oracle_series("ht", cid, order, args)
    _emit(_ht_view(s, args.var), args.format, prov, trivial=cid.offset == (0, 0))


def cmd_lt(args):
    cid = _cid(args)
    if args.var not in _LT_VARS:
        raise UsageError(f"--var for lt must be one of {', '.join(_LT_VARS)}")
    order = args.order if args.order is not None else cid.distance + 10
    if args.connected and order < cid.distance + 2:
        raise UsageError(f"connected series need --order >= {cid.distance + 2}")
    s, prov = _oracle_series("lt", cid, order, args)
    if args.connected:
        s = s - magnetization_squared(order)
    if args.var == "klt_hat":
        s = transforms.to_khat_lt(s)
    _emit(s, args.format, prov, trivial=cid.offset == (0, 0) and not args.connected)


def cmd_fit(args):
    data = fitting.collect_coefficients(args.family, args.offset, range(args.nmin, args.nmax + 1))
    if args.denominator:
        fit = fitting.fit_rational(data, fitting.parse_poly(args.denominator))
    else:
        fit = fitting.fit_minimal_polynomial(data)
    if args.format == "json":
        print(json.dumps(fit.to_json_obj(), sort_keys=True))
    else:
        res = ", ".join(str(r) for r in fit.surplus_residuals)
        print(f"{fit.formula()}, surplus residuals: [{res}]")
    if args.stationary:
        rep = fitting.stationary_analysis(fit)
        print(json.dumps(rep.to_json_obj(), sort_keys=True))


def cmd_painleve(args):
    order = args.order if args.order is not None else args.n + 10
    check = painleve.verify_p6(args.n, args.branch, order)
    if args.format == "json":
        print(json.dumps({"n": check.n, "branch": check.branch, "order": check.order,
                          "through": check.through, "ok": check.ok,
                          "residual": check.residual.to_json_obj()}, sort_keys=True))
    else:
        print(check.summary())
    return EXIT_OK if check.ok else EXIT_MISMATCH


def cmd_critical(args):
    ns = range(1, 7) if args.n is None else [args.n]
    for n in ns:
        value = refdata.critical_value(n, args.digits)
        print(value if args.n is not None else f"R{n}: {value}")


def _emit_selection(which):
    prefixes = ("v_taylor", "kkg_taylor") if which == "appendixB" else (
        "u_conn_taylor", "kl_conn_taylor", "u_taylor", "kl_taylor")
    labs = [lab for lab in refdata.labels() if lab[2:] in prefixes]
    if which == "appendixC":
        labs.append("Msq_taylor")
    return labs


def cmd_golden(args):
    if args.emit:
        return _golden_table(_emit_selection(args.emit))
    if args.check:
        sel = None if args.check == "all" else [args.check]
        return _golden_table(sel or refdata.labels(), compact=True)
    if not args.label:
        print("\n".join(refdata.labels()))
        return EXIT_OK
    g = refdata.golden(args.label)
    if args.format == "json":
        print(json.dumps({"label": g.label, "series": g.series().to_json_obj(),
                          "known_through": g.known_through,
                          "ambiguous": {str(e): [str(c) for c in cs] for e, cs in g.ambiguous.items()}},
                         sort_keys=True))
    else:
        text = format_series(g.series())
        if g.prefactor is not None:
            text = f"{g.var.value}^({g.prefactor}) * [{text}]"
        print(text)
        for e, cs in g.ambiguous.items():
            print(f"  ambiguous power {e}: printed candidates {', '.join(str(c) for c in cs)}")
        if g.note:
            print(f"  note: {g.note}")
    return EXIT_OK


def _golden_table(selection, compact=False):
    failed = 0
    if not compact:
        print(f"{'label':<20} {'power':>5} {'printed':>14} {'derived':>14}  status")
    for lab in selection:
        if compact:
            res = refdata.check(lab)
            status = "PASS" if res.ok else f"FAIL ({len(res.mismatches)} coefficients)"
            extra = "".join(f"; power {e} resolved to {d} (printed {', '.join(map(str, c))})"
                            for e, (d, c) in res.resolved.items())
            print(f"{lab:<20} {status}{extra}")
            failed += not res.ok
            continue
        g = refdata.golden(lab)
        got = refdata.derive(lab)
        for e in range(g.known_through + 1):
            if e in g.ambiguous:
                printed = "/".join(str(c) for c in g.ambiguous[e])
                status = "ambiguous"
            else:
                printed = str(g.coefficient(e))
                status = "ok" if got[e] == g.coefficient(e) else "MISMATCH"
                failed += status == "MISMATCH"
            if printed == "0" and got[e] == 0:
                continue
            print(f"{lab:<20} {e:>5} {printed:>14} {str(got[e]):>14}  {status}")
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_table(args):
    ks = [args.k] if args.k is not None else [f"{i / 10:g}" if i not in (0, 10) else str(i // 10) for i in range(11)]
    ns = [args.n] if args.n is not None else list(range(1, 7))
    for k in ks:
        cells = []
        for n in ns:
            entry = refdata.table_entry(args.which, k, n)
            cell = f"{entry.canonical:g}"
            if args.derive and float(k) < 1:
                est = refdata.numeric_from_series(CorrelationId.row(n), args.which, k, args.order)
                cell += f" [series {est.value:.6f} +- {est.last_term:.1e}]"
            if entry.note and args.notes:
                cell += f" (printed {entry.raw}: {entry.note})"
            cells.append(cell)
        print(" ".join(cells) if args.k is not None and args.n is not None else f"k={k}: " + "  ".join(cells))


# -------------------------------------------------------------- parser


def _add_series_flags(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--row", type=int, help="row correlation R_n")
    g.add_argument("--diag", type=int, help="diagonal correlation D_n")
    g.add_argument("--offset", help="general offset m,n")
    p.add_argument("--order", type=int, help="highest power kept")
    p.add_argument("--var", help="expansion variable of the output")
    p.add_argument("--connected", action="store_true", help="subtract M^2 (low temperature)")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    p.add_argument("--method", choices=("flm", "window"), default="flm")
    p.add_argument("--padding", type=int, help="extra rectangle or window padding")
    p.add_argument("--state-cap", type=int, help="maximum frontier states per cell")
    p.add_argument("--no-cache", action="store_true", help="always recompute")
    p.add_argument("--audit", action="store_true", help="recompute and compare with the cache")
    p.add_argument("--cache-dir", help="override ISINGSER_CACHE")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isingser", description="Exact series for Ising spin correlations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ht", help="high-temperature series in v")
    _add_series_flags(p)
    p.set_defaults(func=cmd_ht, var_default="v")

    p = sub.add_parser("lt", help="low-temperature series in u")
    _add_series_flags(p)
    p.set_defaults(func=cmd_lt, var_default="u")

    p = sub.add_parser("fit", help="fit a general-n polynomial to series coefficients")
    p.add_argument("--family", required=True, choices=fitting.FAMILIES)
    p.add_argument("--offset", type=int, required=True)
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--denominator", help="fit P(n)/Q(n) with this Q, e.g. 'n+1'")
    p.add_argument("--stationary", action="store_true", help="also report real roots and extrema")
    p.add_argument("--format", choices=("json", "pretty"), default="pretty")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("painleve", help="sigma-form Painleve VI check for D_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--branch", choices=painleve.BRANCHES, default="plus")
    p.add_argument("--format", choices=("json", "pretty"), default="pretty")
    p.set_defaults(func=cmd_painleve)

    p = sub.add_parser("critical", help="critical-point values of R_n")
    p.add_argument("--n", type=int)
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("golden", help="reference series and their re-derivation")
    p.add_argument("label", nargs="?")
    p.add_argument("--check", metavar="LABEL|all")
    p.add_argument("--emit", choices=("appendixB", "appendixC"))
    p.add_argument("--format", choices=("json", "pretty"), default="pretty")
    p.set_defaults(func=cmd_golden)

    p = sub.add_parser("table", help="tabulated numerical values of R_n")
    p.add_argument("--which", choices=refdata.TABLES, required=True)
    p.add_argument("--k")
    p.add_argument("--n", type=int)
    p.add_argument("--derive", action="store_true", help="add the series partial sum")
    p.add_argument("--order", type=int)
    p.add_argument("--notes", action="store_true", help="show corrections of printed entries")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "var_default", None) and args.var is None:
        args.var = args.var_default
    try:
        code = args.func(args)
    except UsageError as exc:
        print(f"isingser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBudgetExceeded as exc:
        print(f"isingser: refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except _Mismatch as exc:
        print(f"isingser: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (IsingSeriesError, ValueError) as exc:
        print(f"isingser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
