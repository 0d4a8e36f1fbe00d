"""``io-impact`` command-line interface.

Machine-readable results go to stdout (CSV for matrices, JSON for
reports); diagnostics go to stderr. Exit status is 0 on success, 1 on a
domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import allocation, demand, supply
from .errors import IOImpactError, InvalidTableError
from .io_table import (
    DEFAULT_REL_TOL,
    DEFAULT_UNIT,
    UNIT_SCALES,
    load_table,
    validate,
    write_matrix_csv,
)
from .sankey import emit_sankey
from .scenario import (
    LEONTIEF_DOWNSTREAM,
    LEONTIEF_UPSTREAM,
    ModelSide,
    evaluate_scenario,
    keynesian_multiplier,
    load_scenario,
)

PROG = "io-impact"


def _styled(text: str, code: str) -> str:
    if os.environ.get("IO_IMPACT_NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def resolve_input(name: str) -> Path:
    """Local path if it exists, else a file of that name bundled with the package."""
    path = Path(name)
    if path.exists():
        return path
    bundled = resources.files("io_impact") / "data" / path.name
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(name)


def _open(name: str):
    return open(resolve_input(name), newline="", encoding="utf-8")


def _load_table(args):
    with _open(args.flows) as flows, _open(args.vectors) as vectors:
        return load_table(flows, vectors, unit=args.unit, clamp_negative=args.clamp_negative)


def _balanced_table(args):
    t = _load_table(args)
    if t.clamped_flows:
        print(f"note: clamped {t.clamped_flows} negative flow(s) to zero", file=sys.stderr)
    report = validate(t, args.rel_tol)
    if not report.is_balanced:
        raise InvalidTableError(
            f"table is not balanced at rel_tol={args.rel_tol}: "
            f"{len(report.findings)} finding(s); run 'validate' for details"
        )
    return t


def _dump_json(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_validate(args) -> int:
    t = _load_table(args)
    report = validate(t, args.rel_tol)
    print(f"balanced: {'true' if report.is_balanced else 'false'}")
    print(f"sectors: {t.n}")
    print(f"rel_tol: {args.rel_tol:g}")
    if t.clamped_flows:
        print(f"clamped_negative_flows: {t.clamped_flows}")
    for f in report.findings:
        print(f"{f.kind}-imbalance sector={f.sector} magnitude={f.magnitude:.6g}")
    return 0 if report.is_balanced else 1


def cmd_coefficients(args) -> int:
    t = _balanced_table(args)
    if args.side == "demand":
        m = demand.build_demand_model(t)
        outputs = {"a": m.a, "l": m.l}
    else:
        m = supply.build_supply_model(t)
        outputs = {"b": m.b, "g": m.g}
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, matrix in outputs.items():
            with open(out_dir / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
                write_matrix_csv(fh, t.codes, matrix)
            print(f"wrote {out_dir / f'{name}.csv'}", file=sys.stderr)
    else:
        for k, (name, matrix) in enumerate(outputs.items()):
            if k:
                sys.stdout.write("\n")
            sys.stdout.write(f"# {name}\n")
            write_matrix_csv(sys.stdout, t.codes, matrix)
    return 0


def cmd_shock(args) -> int:
    t = _balanced_table(args)
    shock = [0.0] * t.n
    shock[t.index(args.sector)] = args.amount
    if args.side == "demand":
        m = demand.build_demand_model(t)
        delta = demand.propagate_demand_shock(m, shock)
        sector_multiplier = demand.demand_multiplier(m, args.sector)
    else:
        m = supply.build_supply_model(t)
        delta = supply.propagate_supply_shock(m, shock)
        sector_multiplier = supply.supply_multiplier(m, args.sector)
    total = float(delta.sum())
    _dump_json(
        {
            "side": args.side,
            "sector": args.sector,
            "amount": args.amount,
            "unit": t.currency_unit,
            "total_impact": total,
            "multiplier": keynesian_multiplier(total, args.amount) if args.amount > 0 else None,
            "output_multiplier": sector_multiplier,
            "delta": {c: float(d) for c, d in zip(t.codes, delta)},
        }
    )
    return 0


def _evaluate(args):
    t = _balanced_table(args)
    with _open(args.scenario) as fh:
        s = load_scenario(fh)
    report = evaluate_scenario(
        s,
        demand.build_demand_model(t),
        supply.build_supply_model(t),
        paper_rounding=getattr(args, "paper_rounding", False),
        indirect_labels=getattr(args, "labels", LEONTIEF_UPSTREAM),
    )
    return s, report


def _scenario_table(report, s) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["program", "side", "budget", "shock", "total_impact",
                     "keynesian_multiplier", "shock_multiplier"])
    for name, p in report.per_program.items():
        writer.writerow([name, p.model_side.value, f"{p.budget:.6g}", f"{p.shock:.6g}",
                         f"{p.total_impact:.6g}", f"{p.keynesian_multiplier:.6g}",
                         f"{p.shock_multiplier:.6g}"])
    totals = report.totals.to_dict()
    shares = report.gdp_shares.to_dict()
    writer.writerow([])
    writer.writerow(["component", f"amount_{report.unit}", "gdp_share_pct"])
    for key in totals:
        writer.writerow([key, f"{totals[key]:.6g}", f"{shares[key]:.6g}"])
    return out.getvalue()


def cmd_scenario(args) -> int:
    s, report = _evaluate(args)
    if args.format == "table":
        sys.stdout.write(_scenario_table(report, s))
    else:
        _dump_json(report.to_dict(s))
    for caveat in report.caveats:
        print(_styled("note:", "33"), caveat, file=sys.stderr)
    return 0


def cmd_sankey(args) -> int:
    s, report = _evaluate(args)
    _dump_json(emit_sankey(report, s, args.top_k).to_dict())
    return 0


def cmd_allocation(args) -> int:
    with _open(args.states) as fh:
        records = allocation.load_states(fh)
    rankings = [
        allocation.rank_states(records, allocation.Metric.ALLOCATION_PER_UNCONNECTED),
        allocation.rank_states(records, allocation.Metric.ENROLLMENT_RATE),
    ]
    correlation = allocation.rank_correlation(records, args.x_metric, args.y_metric)
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["metric", "rank", "state", "value"])
        for ranking in rankings:
            for k, (state, value) in enumerate(ranking.ranked, start=1):
                writer.writerow([ranking.metric.value, k, state, f"{value:.6g}"])
            for state in ranking.excluded:
                writer.writerow([ranking.metric.value, "n/a", state, ""])
        writer.writerow(["spearman", "", f"{args.x_metric}~{args.y_metric}", f"{correlation:.6g}"])
    else:
        _dump_json(
            {
                "rankings": {
                    r.metric.value: {
                        "ranked": [{"state": st, "value": v} for st, v in r.ranked],
                        "excluded": list(r.excluded),
                    }
                    for r in rankings
                },
                "spearman": {
                    "x_metric": args.x_metric,
                    "y_metric": args.y_metric,
                    "value": correlation,
                },
            }
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Leontief/Ghosh input-output impact modelling."
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    table = argparse.ArgumentParser(add_help=False)
    table.add_argument("--flows", required=True, help="flows.csv (inter-industry matrix)")
    table.add_argument("--vectors", required=True, help="vectors.csv (f, v, x per sector)")
    table.add_argument("--unit", default=DEFAULT_UNIT, choices=sorted(UNIT_SCALES))
    table.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL,
                       help="relative balance tolerance (default %(default)g)")
    table.add_argument("--clamp-negative", action="store_true",
                       help="set negative flows to zero instead of rejecting the table")

    p = sub.add_parser("validate", parents=[table], help="check row and column balances")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("coefficients", parents=[table], help="emit coefficient and inverse matrices")
    p.add_argument("--side", choices=[m.value for m in ModelSide], default="demand")
    p.add_argument("--out-dir", help="write one CSV per matrix here instead of stdout")
    p.set_defaults(func=cmd_coefficients)

    p = sub.add_parser("shock", parents=[table], help="propagate a single-sector shock")
    p.add_argument("--side", choices=[m.value for m in ModelSide], required=True)
    p.add_argument("--sector", required=True)
    p.add_argument("--amount", type=float, required=True)
    p.set_defaults(func=cmd_shock)

    p = sub.add_parser("scenario", parents=[table], help="evaluate a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--paper-rounding", action="store_true",
                   help="use reported subsidy totals where the scenario records them")
    p.add_argument("--labels", choices=[LEONTIEF_UPSTREAM, LEONTIEF_DOWNSTREAM],
                   default=LEONTIEF_UPSTREAM,
                   help="which indirect effects count as upstream")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("sankey", parents=[table], help="emit Sankey flow data as JSON")
    p.add_argument("--scenario", required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--paper-rounding", action="store_true")
    p.set_defaults(func=cmd_sankey)

    metrics = [m.value for m in allocation.Metric]
    p = sub.add_parser("allocation", help="rank states and correlate allocation with enrolment")
    p.add_argument("--states", required=True)
    p.add_argument("--x-metric", choices=metrics,
                   default=allocation.Metric.ALLOCATION_PER_UNCONNECTED.value)
    p.add_argument("--y-metric", choices=metrics,
                   default=allocation.Metric.ENROLLMENT_RATE.value)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_allocation)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except IOImpactError as exc:
        print(f"{_styled(type(exc).__name__, '31')}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"{_styled('FileNotFoundError', '31')}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
