"""Command-line interface.

Exit codes: 0 success, 1 analysis error, 2 usage error, 3 consistency-suite
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .consistency import Published, paper_consistency_suite, render_suite_json, render_suite_text, suite_passed
from .dataset import load_csv
from .descriptive import correlation_matrix
from .errors import EconRegError
from .figures import FigureKind, line_spec, render_figure, scatter_spec
from .ols import equation_string, fit
from .report import render_correlation_table, render_regression_tables, render_verdicts
from .workflow import PaperVariables, published_model, run_staged_analysis, verdict_report

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3
OUTPUT_DIR_ENV = "ECONREG_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "econreg-output"


def _names(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_correlate(args, parser) -> int:
    names = _names(args.vars)
    if len(names) < 2:
        parser.error("--vars needs at least two variable names")
    stats = _names(args.stats)
    ds = load_csv(args.csv)
    m = correlation_matrix(ds, names)
    table = render_correlation_table(m, statistics=stats, plain=args.plain)
    if args.json:
        print(json.dumps({"matrix": m.to_dict(), "table": table.to_dict()}, indent=2))
    else:
        sys.stdout.write(table.to_text())
    return EXIT_OK


def cmd_regress(args, parser) -> int:
    preds = _names(args.pred)
    if not preds:
        parser.error("--pred needs at least one predictor")
    if not 0.0 < args.alpha < 1.0:
        parser.error("--alpha must lie in (0, 1)")
    ds = load_csv(args.csv)
    model = fit(ds, args.dep, preds)
    tables = render_regression_tables(model, plain=args.plain)
    verdicts = verdict_report(model, args.alpha)
    if args.json:
        print(json.dumps({
            "model": model.to_dict(),
            "tables": [t.to_dict() for t in tables],
            "verdicts": [v.to_dict() for v in verdicts],
        }, indent=2))
    else:
        for t in tables:
            sys.stdout.write(t.to_text() + "\n")
        print(equation_string(model))
        print()
        sys.stdout.write(render_verdicts(verdicts, args.paper_wording))
    return EXIT_OK


def _published_tables(pub: Published):
    """Published regression tables rebuilt from the fixture, labels verbatim."""
    out = []
    for key, spec in pub.models.items():
        model = published_model(pub, key)
        tables = render_regression_tables(model, pub.labels, dependent_label=spec["dependent_label"])
        out.append((key, spec, model, tables))
    return out


def _short_labels(pub: Published) -> dict:
    # "CONSUMER PRICE INDEX-URBAN (CPI-U)" -> "CPI-U"
    return {k: v.rsplit(" (", 1)[-1].rstrip(")") for k, v in pub.labels.items()}


def cmd_paper_verify(args, parser) -> int:
    pub = Published.load(args.fixture)
    checks = paper_consistency_suite(pub)
    ok = suite_passed(checks)
    published = _published_tables(pub)
    if args.json:
        doc = json.loads(render_suite_json(checks))
        doc["published_tables"] = {
            name: t.to_dict()
            for _, spec, _, tables in published
            for name, t in zip(spec["tables"], tables)
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK if ok else EXIT_INCONSISTENT
    sys.stdout.write(render_suite_text(checks))
    if not args.no_tables:
        for _, spec, model, tables in published:
            print()
            for name, t in zip(spec["tables"], tables):
                print(name)
                sys.stdout.write(t.to_text() + "\n")
            print(equation_string(model, labels=_short_labels(pub)))
    return EXIT_OK if ok else EXIT_INCONSISTENT


def _write(path: Path, text: str, written: list):
    path.write_text(text, encoding="utf-8")
    written.append(path.name)


def cmd_paper_run(args, parser) -> int:
    try:
        config = PaperVariables.from_mapping(dict(kv.split("=", 1) for kv in args.var or []))
    except ValueError as exc:
        parser.error(str(exc))
    out = Path(args.out or os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR)
    ds = load_csv(args.csv)
    stages = run_staged_analysis(ds, config)
    out.mkdir(parents=True, exist_ok=True)
    written: list = []
    tables = {}

    def table(name, t):
        tables[name] = t.to_dict()
        _write(out / f"{name}.txt", t.to_delimited(), written)

    s1, s2, s3, s4 = stages
    table("table-1-1", render_correlation_table(s1.correlations[0], plain=args.plain))
    for k, m in enumerate(s2.correlations, start=1):
        table(f"table-2-{k}", render_correlation_table(m, statistics=("r", "sig", "n"), plain=args.plain))
    for stage, chapter in ((s2, 2), (s3, 3), (s4, 4)):
        first = 3 if chapter == 2 else 1
        for k, t in enumerate(render_regression_tables(stage.model, plain=args.plain)):
            table(f"table-{chapter}-{first + k}", t)
    present = [nm for nm in config.all if nm in ds]
    if len(present) >= 2:
        table("table-appendix", render_correlation_table(
            correlation_matrix(ds, present), statistics=("r", "sig", "n"), plain=args.plain))

    v = config
    chosen = s2.selected[0]
    figures = [
        ("fig-1-1", line_spec(ds, v.nyse)),
        ("fig-1-2", line_spec(ds, v.dj)),
        ("fig-1-3", line_spec(ds, v.sp500)),
        ("fig-1-4", scatter_spec(ds, v.nyse, v.dj)),
        ("fig-1-5", scatter_spec(ds, v.sp500, v.dj)),
        ("fig-1-6", scatter_spec(ds, v.nyse, v.sp500)),
        ("fig-2-1", line_spec(ds, v.cpiu)),
        ("fig-2-2", scatter_spec(ds, v.cpiu, chosen)),
        ("fig-3-1", line_spec(ds, v.tb3)),
        ("fig-3-2", scatter_spec(ds, chosen, v.tb3)),
        ("fig-3-3", scatter_spec(ds, v.cpiu, v.tb3)),
        ("fig-4-1", line_spec(ds, v.gpdi)),
        ("fig-4-2", scatter_spec(ds, v.gpdi, chosen)),
        ("fig-4-3", scatter_spec(ds, v.gpdi, v.cpiu)),
        ("fig-4-4", scatter_spec(ds, v.gpdi, v.tb3)),
    ]
    for name, spec in figures:
        _write(out / f"{name}.svg", render_figure(spec), written)

    lines = []
    verdicts = {}
    for stage in stages:
        lines.append(f"[{stage.plan.stage_id.value}]")
        lines += [f"  {d}" for d in stage.decisions]
        if stage.model is not None:
            lines += ["  " + ln for ln in equation_string(stage.model).splitlines()]
            vs = verdict_report(stage.model, args.alpha)
            verdicts[stage.plan.stage_id.value] = [x.to_dict() for x in vs]
            lines += ["  " + ln for ln in render_verdicts(vs, args.paper_wording).splitlines()]
    _write(out / "report.txt", "\n".join(lines) + "\n", written)

    results = {
        "dataset": {
            "n": ds.n,
            "years": [ds.years[0], ds.years[-1]],
            "variables": list(ds.names),
            "dropped_rows": list(ds.dropped_rows),
        },
        "alpha": args.alpha,
        "stages": [s.to_dict() for s in stages],
        "verdicts": verdicts,
        "tables": tables,
        "figures": [f"{name}.svg" for name, _ in figures],
    }
    _write(out / "results.json", json.dumps(results, indent=2) + "\n", written)
    sys.stdout.write("\n".join(lines) + "\n")
    print(f"wrote {len(written)} files to {out}")
    return EXIT_OK


def cmd_plot(args, parser) -> int:
    ds = load_csv(args.csv)
    kind = FigureKind(args.kind)
    if kind is FigureKind.SCATTER:
        if not args.x:
            parser.error("--x is required for scatter plots")
        spec = scatter_spec(ds, args.x, args.y, args.title or "")
    else:
        if args.x and args.x.upper() != "YEAR":
            parser.error("line plots use YEAR on the x axis")
        spec = line_spec(ds, args.y, args.title or "")
    svg = render_figure(spec)
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="econreg", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("correlate", help="Pearson correlation matrix")
    c.add_argument("csv")
    c.add_argument("--vars", required=True, help="comma-separated variable names (at least two)")
    c.add_argument("--stats", default="r,sig,sscp,cov,n", help="rows to show: r,sig,sscp,cov,n")
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--text", action="store_true", help="aligned text (default)")
    c.add_argument("--plain", action="store_true", help="full-precision numbers")
    c.set_defaults(func=cmd_correlate)

    r = sub.add_parser("regress", help="OLS regression with ANOVA and coefficient tests")
    r.add_argument("csv")
    r.add_argument("--dep", required=True)
    r.add_argument("--pred", required=True, help="comma-separated predictor names")
    r.add_argument("--alpha", type=float, default=0.05)
    r.add_argument("--json", action="store_true")
    r.add_argument("--plain", action="store_true")
    r.add_argument("--paper-wording", action="store_true", help='print "Accept H0" for non-rejection')
    r.set_defaults(func=cmd_regress)

    v = sub.add_parser("paper-verify", help="check the published statistics for internal consistency")
    v.add_argument("--fixture", help="alternative fixture file")
    v.add_argument("--json", action="store_true")
    v.add_argument("--no-tables", action="store_true", help="omit the rebuilt published tables")
    v.set_defaults(func=cmd_paper_verify)

    w = sub.add_parser("paper-run", help="staged analysis; writes tables, figures and results.json")
    w.add_argument("csv")
    w.add_argument("--out", help=f"output directory (default ${OUTPUT_DIR_ENV} or ./{DEFAULT_OUTPUT_DIR})")
    w.add_argument("--var", action="append", metavar="ROLE=COLUMN",
                   help="map a role (gpdi, nyse, dj, sp500, cpiu, tb3) to a CSV column")
    w.add_argument("--alpha", type=float, default=0.05)
    w.add_argument("--plain", action="store_true")
    w.add_argument("--paper-wording", action="store_true")
    w.set_defaults(func=cmd_paper_run)

    g = sub.add_parser("plot", help="SVG line or scatter chart")
    g.add_argument("csv")
    g.add_argument("--x")
    g.add_argument("--y", required=True)
    g.add_argument("--kind", choices=[k.value for k in FigureKind], default="scatter")
    g.add_argument("--title")
    g.add_argument("--out", help="write SVG here instead of stdout")
    g.set_defaults(func=cmd_plot)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        return args.func(args, sub)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (EconRegError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
