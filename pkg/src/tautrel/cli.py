"""Command-line front end with canonical JSON/CSV output and a table cache.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage error.
The coefficient-table cache lives under --cache-dir (or TAUTREL_CACHE_DIR);
a cached table built at a larger size serves any smaller request with
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import coeffs as co
from . import relations as rel
from . import tautring as tr
from .exact import bernoulli_table

CACHE_VERSION = 1
_TABLE_KINDS = ("q", "c", "alpha", "p", "bernoulli")


def _json_line(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


# ---------------------------------------------------------------------------
# table materialization: rows of (k, j, value) or (k, value) strings

def _table_rows(kind: str, k_max: int) -> list[tuple]:
    if kind == "q":
        q = co.build_q_table(k_max)
        return [(k, j, str(q.get(k, j))) for k in range(k_max + 1) for j in range(k + 1)]
    if kind == "c":
        c = co.build_c_table(co.build_q_table(k_max))
        return [(k, j, str(c.get(k, j))) for k in range(1, k_max + 1) for j in range(k + 1)]
    if kind == "alpha":
        a = co.solve_series_ode(k_max, k_max)
        return [
            (k, j, str(a.get(k, j)))
            for k in range(k_max + 1)
            for j in range(k_max + 1)
        ]
    if kind == "p":
        p = co.p_series(k_max)
        return [(k, str(p.coeff(k))) for k in range(k_max + 1)]
    if kind == "bernoulli":
        b = bernoulli_table(k_max)
        return [(k, str(b[k])) for k in range(k_max + 1)]
    raise ValueError(f"unknown table kind {kind!r}")


def _rows_to_csv(kind: str, rows: list[tuple]) -> str:
    header = "k,value" if kind in ("p", "bernoulli") else "k,j,value"
    return "\n".join([header] + [",".join(str(x) for x in r) for r in rows])


def _rows_to_json(kind: str, k_max: int, rows: list[tuple]) -> str:
    return _json_line(
        {"table": kind, "k_max": k_max, "entries": [list(r) for r in rows]}
    )


# ---------------------------------------------------------------------------
# disk cache: the CSV dump itself behind one metadata line

def _cache_path(cache_dir: Path, kind: str, k_max: int) -> Path:
    return cache_dir / f"{kind}-{k_max}.csv"


def _cache_save(cache_dir: Path, kind: str, k_max: int, rows: list[tuple]) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    body = _rows_to_csv(kind, rows)
    meta = f"# kind={kind} k_max={k_max} version={CACHE_VERSION}"
    _cache_path(cache_dir, kind, k_max).write_text(meta + "\n" + body + "\n")

def _cache_load(cache_dir: Path, kind: str, k_max: int) -> list[tuple] | None:
    """Smallest cached table of this kind with k_max >= requested, truncated."""
    if not cache_dir.is_dir():
        return None
    best: tuple[int, Path] | None = None
    for path in cache_dir.glob(f"{kind}-*.csv"):
        try:
            cached_max = int(path.stem.split("-", 1)[1])
        except ValueError:
            continue
        if cached_max >= k_max and (best is None or cached_max < best[0]):
            best = (cached_max, path)
    if best is None:
        return None
    lines = best[1].read_text().splitlines()
    if not lines or not lines[0].startswith(f"# kind={kind} "):
        return None
    if f"version={CACHE_VERSION}" not in lines[0]:
        return None
    rows: list[tuple] = []
    for line in lines[2:]:  # skip metadata + header
        parts = line.split(",")
        if len(parts) == 3:
            k, j, v = int(parts[0]), int(parts[1]), parts[2]
            if k <= k_max and j <= k_max:
                rows.append((k, j, v))
        elif len(parts) == 2:
            k, v = int(parts[0]), parts[1]
            if k <= k_max:
                rows.append((k, v))
    return rows


# ---------------------------------------------------------------------------
# subcommands

def _cmd_coeffs(args) -> int:
    cache_dir = args.cache_dir or os.environ.get("TAUTREL_CACHE_DIR")
    rows = None
    if cache_dir:
        try:
            rows = _cache_load(Path(cache_dir), args.table, args.max_k)
        except OSError as exc:
            print(f"error: cache unreadable: {exc}", file=sys.stderr)
            return 2
    if rows is None:
        rows = _table_rows(args.table, args.max_k)
        if cache_dir:
            try:
                _cache_save(Path(cache_dir), args.table, args.max_k, rows)
            except OSError as exc:
                print(f"error: cache unwritable: {exc}", file=sys.stderr)
                return 2
    if args.format == "csv":
        print(_rows_to_csv(args.table, rows))
    else:
        print(_rows_to_json(args.table, args.max_k, rows))
    return 0


def _cmd_verify(args) -> int:
    failures = 0
    suites = [args.suite] if args.suite != "all" else [
        "identities", "ode", "genfunc", "crosscheck"
    ]
    for suite in suites:
        if suite == "identities":
            rep = co.verify_coeff_identities(args.order)
            if rep.ok:
                print(f"PASS identities: {rep.checked} exact checks to k={args.order}")
            else:
                failures += len(rep.failures)
                print(f"FAIL identities: {rep.failures[0]}")
        elif suite == "ode":
            n = args.order
            alpha = co.solve_series_ode(n, n)
            q = co.build_q_table(max(n - 1, 1))
            c = co.build_c_table(q)
            ok = True
            if not co.ode_residual(alpha).is_zero():
                ok = False
                print("FAIL ode: nonzero residual in the defining equation")
            if alpha.to_series() != co.expand_closed_form(c, n, n):
                ok = False
                print("FAIL ode: closed form differs from the solved series")
            gw = alpha.to_series().derivative(1)
            if gw != co.expand_w_deriv_closed(q, n, n).truncate((n, n - 1)):
                ok = False
                print("FAIL ode: derivative closed form differs")
            if ok:
                print(f"PASS ode: alpha vs closed-form: match through ({n},{n})")
            else:
                failures += 1
        elif suite == "genfunc":
            q = co.build_q_table(args.order)
            c = co.build_c_table(q)
            from .series import UniSeries

            diag = UniSeries.from_terms(
                "z", args.order, {k: c.get(k, k) for k in range(1, args.order + 1)}
            )
            p = co.p_series(args.order)
            ok = diag.exp() == p and co.diag_ode_residual(q, args.order).is_zero()
            if ok:
                spots = ", ".join(
                    f"p_{k} = {p.coeff(k)}" for k in range(1, min(3, args.order) + 1)
                )
                print(f"PASS genfunc: diagonal series matched; {spots}")
            else:
                failures += 1
                print("FAIL genfunc: diagonal generating series mismatch")
        elif suite == "crosscheck":
            bad = _crosscheck(min(args.order, 14))
            if bad is None:
                print("PASS crosscheck: both extraction pipelines proportional")
            else:
                failures += 1
                print(f"FAIL crosscheck: {bad}")
    return 1 if failures else 0


def _crosscheck(g_max: int) -> str | None:
    """Compare the two extraction pipelines on a small grid; None when clean."""
    for g in range(4, g_max + 1):
        q = co.build_q_table(g)
        c = co.build_c_table(q)
        alpha = co.solve_series_ode(g, (g + 2) // 2)
        for d in range(2, (g + 2) // 2 + 1):
            for b in range(0, 4):
                x_exp = (g + 1 - 2 * d) if b == 0 else (g + 2 - 2 * d)
                if x_exp < 0:
                    continue
                r1 = tr.extract_relation(g, d, b, q, c)
                r2 = tr.extract_relation_from_ode(g, d, b, alpha)
                sign = (-1) ** d
                if r2.poly != r1.poly.scale(sign):
                    return f"(g={g}, d={d}, b={b}) pipelines disagree"
    return None


def _cmd_relation(args) -> int:
    if args.psi:
        a_exp = args.g + 2 - 2 * args.d
    else:
        a_exp = (args.g + 1 - 2 * args.d) if args.b == 0 else (args.g + 2 - 2 * args.d)
    if a_exp < 0:
        print(
            f"error: relation out of range for (g={args.g}, d={args.d}, b={args.b})",
            file=sys.stderr,
        )
        return 2
    size = max(a_exp, 1)
    q = co.build_q_table(size)
    c = co.build_c_table(q)
    if args.psi:
        out = tr.extract_psi_relation(args.g, args.d, q, c)
    else:
        out = tr.extract_relation(args.g, args.d, args.b, q, c)
    print(tr.relation_json(out))
    return 0


def _cmd_faber(args) -> int:
    size = max(args.g, 1)
    q = co.build_q_table(size)
    c = co.build_c_table(q)
    try:
        exprs = rel.faber_solve(args.g, q, c, rewrite=args.rewrite)
    except rel.FaberConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    obj = {
        "g": args.g,
        "rewrite": bool(args.rewrite),
        "expressions": [
            {"a": e.a, "rhs": tr.terms_json(e.rhs)} for e in exprs
        ],
    }
    print(_json_line(obj))
    return 0


def _cmd_scan(args) -> int:
    q = co.build_q_table(args.max_a)
    c = co.build_c_table(q)
    report = rel.scan_nonvanishing(args.max_a, q, c)
    print(_json_line(report.to_obj()))
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tautrel",
        description="Exact kappa-class relation toolkit: tables, checks, extraction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="emit a coefficient table")
    p.add_argument("--table", required=True, choices=_TABLE_KINDS)
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("verify", help="run an exact verification suite")
    p.add_argument(
        "--suite",
        required=True,
        choices=("identities", "ode", "genfunc", "crosscheck", "all"),
    )
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("relation", help="extract one relation as canonical JSON")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--psi", action="store_true")
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=_cmd_relation)

    p = sub.add_parser("faber", help="solve for the high kappa classes")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--rewrite", action="store_true")
    p.set_defaults(func=_cmd_faber)

    p = sub.add_parser("scan", help="nonvanishing scan of the fallback coefficients")
    p.add_argument("--max-a", type=int, required=True)
    p.set_defaults(func=_cmd_scan)
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "coeffs":
        if args.max_k < 0 or (args.table == "c" and args.max_k < 1):
            parser.error(f"--max-k {args.max_k} out of range for table {args.table}")
    elif args.command == "verify":
        if args.order < 1:
            parser.error("--order must be >= 1")
    elif args.command == "relation":
        if args.g < 2 or args.d < 2 or args.b < 0:
            parser.error("need --g >= 2, --d >= 2, --b >= 0")
    elif args.command == "faber":
        if args.g < 2:
            parser.error("need --g >= 2")
    elif args.command == "scan":
        if args.max_a < 1:
            parser.error("--max-a must be >= 1")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
