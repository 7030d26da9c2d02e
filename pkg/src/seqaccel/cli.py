"""Command-line front end.

    seqaccel transform --method epsilon --input seq.csv
    seqaccel classify --input seq.csv
    seqaccel zeta --z 1.01 --n 20 --k 3
    seqaccel oligomer --fixture table1
    seqaccel reproduce --table 4

Output goes to stdout, diagnostics to stderr. Exit status 0 means success
(and, for ``reproduce``, that every cell matched).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .core import (
    DEFAULT_TOL,
    AcceleratorConfig,
    DomainError,
    Method,
    RealSequence,
    SeqAccelError,
    select_best,
)
from .diagnostics import classify
from .euler_maclaurin import partial_sum, zeta_estimate, zeta_tail
from .fileio import IoError, ParseError, dumps, number, read_sequence, report_json, tableau_json
from .linear import epsilon_staged
from .logarithmic import InterpolationPoints
from .oligomer import FIXTURES, build_tableau, chain_limit, load_fixture, read_energy_table
from .reproduce import TABLES, reproduce

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_DOMAIN = 5
EXIT_NUMERIC = 6

TOL_ENV = "SEQACCEL_TOL"

COMMANDS = ("transform", "classify", "zeta", "oligomer", "reproduce")

ALIASES = {
    "aitken": Method.AITKEN_ITERATED,
    "richardson": Method.RICHARDSON_STANDARD,
    "rho": Method.RHO_STANDARD,
    "rho_iterated": Method.RHO_ITERATED_STANDARD,
}


class UsageError(SeqAccelError):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


@dataclass(frozen=True)
class RunSpec:
    command: str
    input_path: str | None = None
    fixture: str | None = None
    method: Method | None = None
    alpha: float | None = None
    beta: float = 1.0
    tol: float = DEFAULT_TOL
    points: InterpolationPoints | None = None
    digits: int | None = None
    staged: bool = False
    output_format: str = "table"
    z: float | None = None
    n: int = 20
    k: int = 3
    table: str = "all"

    def config(self) -> AcceleratorConfig:
        return AcceleratorConfig(
            self.method or Method.EPSILON,
            beta=self.beta,
            alpha=self.alpha,
            points=self.points,
            breakdown_tol=self.tol,
            digits=self.digits,
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


def _method(text: str) -> Method:
    key = text.strip().lower().replace("-", "_")
    if key in ALIASES:
        return ALIASES[key]
    try:
        return Method(key)
    except ValueError:
        names = ", ".join([m.value for m in Method] + list(ALIASES))
        raise argparse.ArgumentTypeError(f"unknown method {text!r} (choose from {names})") from None


def _points(text: str) -> InterpolationPoints:
    try:
        return InterpolationPoints.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seqaccel", description="Convergence acceleration of real sequences.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, data=True, method=True):
        p.add_argument("--format", dest="output_format", choices=("table", "json"), default="table")
        if data:
            p.add_argument("--input", dest="input_path", help="CSV or JSON file, '-' for stdin")
        if method:
            p.add_argument("--method", type=_method)
            p.add_argument("--alpha", type=float)
            p.add_argument("--beta", type=float, default=1.0)
            p.add_argument("--points", type=_points, help="n+1, 1/(n+B) or a comma separated list")
            p.add_argument("--staged", action="store_true", help="stage the epsilon algorithm")
        p.add_argument("--tol", type=float, help=f"breakdown tolerance (default {DEFAULT_TOL:g} or ${TOL_ENV})")
        p.add_argument("--digits", type=int, help="use decimal arithmetic with this many digits")

    common(sub.add_parser("transform", help="run an accelerator and print its tableau"))
    common(sub.add_parser("classify", help="diagnose the convergence type"), method=False)
    z = sub.add_parser("zeta", help="Euler-Maclaurin estimate of zeta(z)")
    z.add_argument("--z", type=float, required=True)
    z.add_argument("--n", type=int, default=20)
    z.add_argument("--k", type=int, default=3)
    z.add_argument("--format", dest="output_format", choices=("table", "json"), default="table")
    o = sub.add_parser("oligomer", help="extrapolate oligomer energies to the infinite chain")
    common(o)
    o.add_argument("--fixture", choices=sorted(FIXTURES))
    r = sub.add_parser("reproduce", help="regenerate the bundled reference tables")
    r.add_argument("--table", choices=list(TABLES) + ["all"], default="all")
    r.add_argument("--format", dest="output_format", choices=("table", "json"), default="table")
    return parser


def _default_tol(env) -> float:
    text = env.get(TOL_ENV)
    if not text:
        return DEFAULT_TOL
    try:
        tol = float(text)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={text!r} is not a number") from None
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return tol


def parse_args(argv=None, env=None) -> RunSpec:
    """Turn command-line arguments into a validated :class:`RunSpec`."""
    parser = build_parser()
    ns = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    usage = parser.format_usage()
    if ns.command is None:
        raise UsageError("a command is required", usage)
    args = vars(ns)
    tol = args.get("tol")
    if tol is None:
        tol = _default_tol(os.environ if env is None else env)
    elif not tol > 0:
        raise UsageError("--tol must be positive", usage)
    spec = RunSpec(
        command=ns.command,
        input_path=args.get("input_path"),
        fixture=args.get("fixture"),
        method=args.get("method"),
        alpha=args.get("alpha"),
        beta=args.get("beta") or 1.0,
        tol=tol,
        points=args.get("points"),
        digits=args.get("digits"),
        staged=args.get("staged", False),
        output_format=ns.output_format,
        z=args.get("z"),
        n=args.get("n", 20),
        k=args.get("k", 3),
        table=args.get("table", "all"),
    )
    _validate(spec, usage)
    return spec


def _validate(spec: RunSpec, usage: str) -> None:
    if spec.command in ("transform", "classify", "oligomer"):
        if spec.input_path is None and spec.fixture is None:
            raise UsageError(f"{spec.command} needs --input" + (" or --fixture" if spec.command == "oligomer" else ""), usage)
        if spec.input_path is not None and spec.fixture is not None:
            raise UsageError("give either --input or --fixture, not both", usage)
    if spec.method is not None and spec.method.needs_alpha and spec.alpha is None:
        raise UsageError(f"--method {spec.method.value} requires --alpha", usage)
    if spec.alpha is not None and not spec.alpha > 0:
        raise UsageError("--alpha must be positive", usage)
    if not spec.beta > 0:
        raise UsageError("--beta must be positive", usage)
    if spec.digits is not None and spec.digits < 1:
        raise UsageError("--digits must be positive", usage)
    if spec.staged and spec.method not in (None, Method.EPSILON):
        raise UsageError("--staged applies to the epsilon method only", usage)
    if spec.command == "zeta":
        if not spec.z > 1:
            raise UsageError("--z must be greater than 1", usage)
        if spec.n < 0 or spec.k < 0:
            raise UsageError("--n and --k must be non-negative", usage)


def _fmt(x) -> str:
    if x is None or x != x:
        return "--"
    return f"{x:.15g}"


def render_tableau(tab, report) -> str:
    orders = tab.reportable_orders()
    head = ["n".rjust(4)] + [f"k={k}".rjust(22) for k in orders]
    lines = [f"method: {tab.method.value}", "  ".join(head)]
    for n in range(len(tab.column(0))):
        row = [str(n).rjust(4)]
        for k in orders:
            col = tab.column(k)
            row.append((_fmt(col[n].value) if n < len(col) and col[n].valid else ("--" if n < len(col) else "")).rjust(22))
        lines.append("  ".join(row).rstrip())
    lines.append(render_report(report))
    return "\n".join(lines)


def render_report(report, label: str = "estimate") -> str:
    text = f"{label}: {_fmt(report.estimate)} (k={report.order_k}, n={report.start_n})"
    if report.degraded:
        text += " [degraded: no valid transform, last input returned]"
    return text


def _sequence(spec: RunSpec) -> RealSequence:
    return read_sequence(spec.input_path)


def cmd_transform(spec: RunSpec, out) -> int:
    s = _sequence(spec)
    cfg = spec.config()
    stages = []
    if spec.staged:
        res = epsilon_staged(s, cfg)
        tab, report, stages = res.tableau, res.report, res.stages
    else:
        tab = build_tableau(s, cfg)
        report = select_best(tab)
    if spec.output_format == "json":
        doc = tableau_json(tab, report)
        if spec.staged:
            doc["stages"] = [
                {"k": st.k, "agreement": number(st.agreement), "parent_agreement": number(st.parent_agreement)}
                for st in stages
            ]
        out.write(dumps(doc) + "\n")
    else:
        out.write(render_tableau(tab, report) + "\n")
        for st in stages:
            out.write(f"stage k={st.k}: agreement {st.agreement:.3e}, versus parent {st.parent_agreement:.3e}\n")
    return EXIT_OK


def cmd_classify(spec: RunSpec, out) -> int:
    s = _sequence(spec)
    c = classify(s, spec.tol)
    if spec.output_format == "json":
        doc = c.to_dict()
        doc["evidence"] = {k: _jsonable(v) for k, v in doc["evidence"].items()}
        out.write(dumps(doc) + "\n")
        return EXIT_OK
    ev = c.evidence
    lines = [f"classification: {c}"]
    lines.append(f"{'n':>4}  {'R_n':>22}  {'T_n':>22}")
    ratios, tvals = ev.get("ratios", []), ev.get("decay_parameters", [])
    for n in range(max(len(ratios), len(tvals))):
        r = ratios[n] if n < len(ratios) else None
        t = tvals[n] if n < len(tvals) else None
        lines.append(f"{n:>4}  {_fmt(r):>22}  {_fmt(t):>22}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def _jsonable(v):
    if isinstance(v, float):
        return number(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def cmd_zeta(spec: RunSpec, out) -> int:
    tail = zeta_tail(spec.z, spec.n, spec.k)
    ps = partial_sum(spec.z, spec.n)
    total = zeta_estimate(spec.z, spec.n, spec.k)
    terms = [("partial_sum", ps), ("integral_term", tail.integral_term), ("half_term", tail.half_term)]
    terms += [(f"bernoulli_term_{j}", b) for j, b in enumerate(tail.bernoulli_terms, start=1)]
    if spec.output_format == "json":
        doc = {"z": spec.z, "n": spec.n, "k": spec.k, "terms": {name: number(v) for name, v in terms},
               "estimate": number(total)}
        out.write(dumps(doc) + "\n")
        return EXIT_OK
    lines = [f"zeta({spec.z:g}) with n={spec.n}, k={spec.k}"]
    lines += [f"{name:>18}  {v:.15g}" for name, v in terms]
    lines.append(f"{'estimate':>18}  {total:.15g}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_oligomer(spec: RunSpec, out) -> int:
    table = load_fixture(spec.fixture) if spec.fixture else read_energy_table(spec.input_path)
    cfg = "auto" if spec.method is None else spec.config()
    rep = chain_limit(table, cfg)
    if spec.output_format == "json":
        doc = {
            "estimate": number(rep.estimate),
            "methods": rep.methods,
            "e_dif_limit": report_json(rep.e_dif_limit),
            "e_av_limit": report_json(rep.e_av_limit),
            "classification_dif": _class_json(rep.classification_dif),
            "classification_av": _class_json(rep.classification_av),
        }
        out.write(dumps(doc) + "\n")
        return EXIT_OK
    lines = [
        f"rows: {len(table)}",
        f"classification_dif: {rep.classification_dif}",
        f"classification_av: {rep.classification_av}",
        render_report(rep.e_dif_limit, f"E_dif limit [{rep.methods['dif']}]"),
        render_report(rep.e_av_limit, f"E_av limit [{rep.methods['av']}]"),
        f"infinite-chain estimate: {_fmt(rep.estimate)}",
    ]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def _class_json(c) -> dict:
    return {"kind": c.kind.value, "rho": number(c.rho), "alpha": number(c.alpha)}


def cmd_reproduce(spec: RunSpec, out) -> int:
    results = reproduce(None if spec.table == "all" else spec.table)
    if spec.output_format == "json":
        out.write(dumps([_jsonable_table(r.to_dict()) for r in results]) + "\n")
    else:
        out.write("\n\n".join(r.render() for r in results) + "\n")
    bad = sum(len(r.mismatches) for r in results)
    if bad:
        print(f"{bad} cell(s) outside tolerance", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _jsonable_table(doc: dict) -> dict:
    for c in doc["cells"]:
        c["computed"] = number(c["computed"])
    return doc


COMMAND_FUNCS = {
    "transform": cmd_transform,
    "classify": cmd_classify,
    "zeta": cmd_zeta,
    "oligomer": cmd_oligomer,
    "reproduce": cmd_reproduce,
}


def run(spec: RunSpec, out=None) -> int:
    """Execute ``spec``; errors become distinct exit statuses."""
    out = sys.stdout if out is None else out
    try:
        return COMMAND_FUNCS[spec.command](spec, out)
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SeqAccelError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None) -> int:
    try:
        spec = parse_args(argv)
    except UsageError as exc:
        print(exc.usage.rstrip() or "usage: seqaccel {transform,classify,zeta,oligomer,reproduce} ...", file=sys.stderr)
        print(f"seqaccel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(spec)
