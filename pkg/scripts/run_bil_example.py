"""Evaluate the bundled broadband scenario on a table and print a summary.

    python scripts/run_bil_example.py [--flows F --vectors V] [--paper-rounding]

Defaults to the bundled illustrative 12-sector table (synthetic, not BEA
data), so the numbers show the mechanics rather than reproduce published
impacts. The reported ratios printed at the end are computed from the
published impact figures, not from this model run.
"""

import argparse

from io_impact.cli import resolve_input
from io_impact.demand import build_demand_model
from io_impact.io_table import load_table, validate
from io_impact.scenario import evaluate_scenario, keynesian_multiplier, load_scenario
from io_impact.supply import build_supply_model

REPORTED = {  # impact, outlay (US$ billions)
    "BEAD": (84.8, 42.45),
    "ACP": (55.2, 14.2),
    "ACP incl. household spend": (55.2, 29.1),
    "TBCP": (5.99, 3.0),
    "package": (146.0, 59.7),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--flows", default="illustrative_flows.csv")
    parser.add_argument("--vectors", default="illustrative_vectors.csv")
    parser.add_argument("--scenario", default="bil_example.json")
    parser.add_argument("--paper-rounding", action="store_true")
    args = parser.parse_args()

    with open(resolve_input(args.flows)) as fl, open(resolve_input(args.vectors)) as ve:
        t = load_table(fl, ve)
    assert validate(t).is_balanced, "table is not balanced"
    with open(resolve_input(args.scenario)) as fh:
        s = load_scenario(fh)
    report = evaluate_scenario(
        s, build_demand_model(t), build_supply_model(t), paper_rounding=args.paper_rounding
    )

    print(f"{'program':<8}{'side':>8}{'budget':>12}{'shock':>12}{'impact':>12}{'mult':>8}{'mult/shock':>12}")
    for name, p in report.per_program.items():
        print(
            f"{name:<8}{p.model_side.value:>8}{p.budget:>12,.0f}{p.shock:>12,.0f}"
            f"{p.total_impact:>12,.0f}{p.keynesian_multiplier:>8.2f}{p.shock_multiplier:>12.2f}"
        )
    tot, pct = report.totals, report.gdp_shares
    for field in ("direct", "upstream", "downstream", "grand_total"):
        print(f"{field:<12}{getattr(tot, field):>14,.0f} {t.currency_unit}  {getattr(pct, field):.3f}% of GDP")
    print(f"package multiplier {report.keynesian_multiplier:.2f} (vs budget), "
          f"{report.shock_multiplier:.2f} (vs shock)")

    print("\nreported ratios:")
    for label, (impact, outlay) in REPORTED.items():
        print(f"  {label:<26}{keynesian_multiplier(impact, outlay):.2f}")

    top = sorted(zip(t.sectors, report.per_sector_total), key=lambda kv: -kv[1])[:5]
    print("\nlargest sector changes:")
    for sector, delta in top:
        print(f"  {sector.name:<50}{delta:>12,.0f}")


if __name__ == "__main__":
    main()
