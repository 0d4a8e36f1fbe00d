"""Investment programs, shock construction and scenario impact reports.

A program injects its budget into one target sector. Demand-side
programs are propagated as a final-demand change through the Leontief
inverse; supply-side programs as a value-added change through the Ghosh
inverse. Subsidy programs add the co-payment households make on top of
the subsidy to the demand shock.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TextIO

import numpy as np

from . import demand, supply
from .errors import InvalidScenarioError, ModelMismatchError
from .io_table import IoTable, unit_scale
from .supply import SUPPLY_SIDE_CAVEAT

MONTHS_PER_YEAR = 12
LEONTIEF_UPSTREAM = "leontief_upstream"
LEONTIEF_DOWNSTREAM = "leontief_downstream"


class ModelSide(str, Enum):
    DEMAND = "demand"
    SUPPLY = "supply"


@dataclass(frozen=True)
class SubsidyRule:
    """Per-household monthly subsidy against the market price of the service.

    Amounts are in plain dollars per household per month, independent of
    the table unit. ``reported_total_demand`` optionally records a
    published total (table units) to use instead of the formula value when
    evaluating with ``paper_rounding``.
    """

    monthly_subsidy: float = 30.0
    market_price: float = 61.0
    program_years: int = 1
    reported_total_demand: float | None = None

    def __post_init__(self):
        if not 0 < self.monthly_subsidy <= self.market_price:
            raise InvalidScenarioError(
                f"need 0 < monthly_subsidy <= market_price, got "
                f"{self.monthly_subsidy} and {self.market_price}"
            )
        if self.program_years < 1:
            raise InvalidScenarioError("program_years must be >= 1")


@dataclass(frozen=True)
class SubsidyDemand:
    households: float
    induced_household_spend: float
    total_demand: float


def derive_subsidy_demand(rule: SubsidyRule, budget: float) -> SubsidyDemand:
    """Households reached by a subsidy budget and the demand they generate.

    Each household draws one year of subsidy; it also pays the remaining
    ``market_price - monthly_subsidy`` each month. All amounts in dollars.
    """
    if budget <= 0:
        raise InvalidScenarioError(f"budget must be positive, got {budget}")
    households = budget / (rule.monthly_subsidy * MONTHS_PER_YEAR)
    copay = (rule.market_price - rule.monthly_subsidy) * MONTHS_PER_YEAR
    induced = households * copay
    return SubsidyDemand(households, induced, budget + induced)


@dataclass(frozen=True)
class Program:
    name: str
    budget: float
    target_sector: str
    model_side: ModelSide
    subsidy: SubsidyRule | None = None
    horizon_years: int = 1

    def __post_init__(self):
        object.__setattr__(self, "model_side", ModelSide(self.model_side))
        if not self.budget > 0:
            raise InvalidScenarioError(f"program {self.name!r}: budget must be positive")
        if self.horizon_years < 1:
            raise InvalidScenarioError(f"program {self.name!r}: horizon_years must be >= 1")


@dataclass(frozen=True)
class Scenario:
    programs: tuple[Program, ...]
    gdp_denominator: float

    def __post_init__(self):
        object.__setattr__(self, "programs", tuple(self.programs))
        names = [p.name for p in self.programs]
        if len(set(names)) != len(names):
            raise InvalidScenarioError(f"duplicate program names in {names}")
        if not self.gdp_denominator > 0:
            raise InvalidScenarioError("gdp_denominator must be positive")


def keynesian_multiplier(total_impact: float, outlay: float) -> float:
    """Total modelled impact per unit of money committed."""
    if outlay <= 0:
        raise InvalidScenarioError(f"outlay must be positive, got {outlay}")
    return total_impact / outlay


def gdp_share(amount: float, s: Scenario) -> float:
    """``amount`` as a percentage of the scenario's GDP denominator."""
    return 100.0 * amount / s.gdp_denominator


def program_shock(p: Program, unit: str, paper_rounding: bool = False) -> float:
    """Shock size in table units: the budget, or budget plus co-payments."""
    if p.subsidy is None:
        return p.budget
    if paper_rounding and p.subsidy.reported_total_demand is not None:
        return p.subsidy.reported_total_demand
    scale = unit_scale(unit)
    return derive_subsidy_demand(p.subsidy, p.budget * scale).total_demand / scale


def program_shock_vector(p: Program, t: IoTable, paper_rounding: bool = False) -> np.ndarray:
    """Shock placed in the target sector, zero elsewhere.

    Read as a final-demand change for demand-side programs and as a
    value-added change for supply-side ones.
    """
    vec = np.zeros(t.n)
    vec[t.index(p.target_sector)] = program_shock(p, t.currency_unit, paper_rounding)
    return vec


@dataclass(frozen=True)
class ImpactTotals:
    direct: float = 0.0
    upstream: float = 0.0
    downstream: float = 0.0
    grand_total: float = 0.0

    def to_dict(self) -> dict:
        return {
            "direct": self.direct,
            "upstream": self.upstream,
            "downstream": self.downstream,
            "grand_total": self.grand_total,
        }


@dataclass(frozen=True, eq=False)
class ProgramImpact:
    name: str
    model_side: ModelSide
    target_sector: str
    budget: float
    shock: float
    total_impact: float
    keynesian_multiplier: float  # total_impact / budget
    shock_multiplier: float  # total_impact / shock
    per_sector_delta: np.ndarray
    horizon_years: int
    subsidy_demand: SubsidyDemand | None = None
    reported_total_demand: float | None = None

    def to_dict(self, codes, s: Scenario) -> dict:
        out = {
            "model_side": self.model_side.value,
            "target_sector": self.target_sector,
            "budget": self.budget,
            "shock": self.shock,
            "total_impact": self.total_impact,
            "keynesian_multiplier": self.keynesian_multiplier,
            "shock_multiplier": self.shock_multiplier,
            "gdp_share_pct": gdp_share(self.total_impact, s),
            "horizon_years": self.horizon_years,
            "per_sector_delta": {c: float(d) for c, d in zip(codes, self.per_sector_delta)},
        }
        if self.subsidy_demand is not None:
            out["subsidy_derivation"] = {
                "households": self.subsidy_demand.households,
                "induced_household_spend": self.subsidy_demand.induced_household_spend,
                "formula_total_demand": self.subsidy_demand.total_demand,
                "reported_total_demand": self.reported_total_demand,
            }
        if self.model_side is ModelSide.SUPPLY:
            out["caveat"] = SUPPLY_SIDE_CAVEAT
        return out


@dataclass(frozen=True, eq=False)
class ImpactReport:
    sectors: tuple[str, ...]
    unit: str
    per_program: dict[str, ProgramImpact]
    totals: ImpactTotals
    gdp_shares: ImpactTotals
    keynesian_multiplier: float  # grand_total / sum of budgets
    shock_multiplier: float  # grand_total / direct
    indirect_labels: str = LEONTIEF_UPSTREAM
    caveats: tuple[str, ...] = field(default_factory=tuple)

    @property
    def per_sector_total(self) -> np.ndarray:
        total = np.zeros(len(self.sectors))
        for impact in self.per_program.values():
            total += impact.per_sector_delta
        return total

    def to_dict(self, s: Scenario) -> dict:
        return {
            "unit": self.unit,
            "sectors": list(self.sectors),
            "gdp_denominator": s.gdp_denominator,
            "indirect_labels": self.indirect_labels,
            "programs": {
                name: impact.to_dict(self.sectors, s)
                for name, impact in self.per_program.items()
            },
            "totals": self.totals.to_dict(),
            "gdp_shares_pct": self.gdp_shares.to_dict(),
            "keynesian_multiplier": self.keynesian_multiplier,
            "shock_multiplier": self.shock_multiplier,
            "caveats": list(self.caveats),
        }


def _same_table(a: IoTable, b: IoTable) -> bool:
    if a is b:
        return True
    return (
        a.codes == b.codes
        and a.currency_unit == b.currency_unit
        and all(np.array_equal(getattr(a, k), getattr(b, k)) for k in ("z", "f", "v", "x"))
    )


def evaluate_scenario(
    s: Scenario,
    dm: demand.DemandModel,
    sm: supply.SupplyModel,
    *,
    paper_rounding: bool = False,
    indirect_labels: str = LEONTIEF_UPSTREAM,
) -> ImpactReport:
    """Propagate every program through its model side and total the effects.

    Indirect effects (impact minus direct shock) of demand-side programs are
    labelled upstream and those of supply-side programs downstream; pass
    ``indirect_labels=LEONTIEF_DOWNSTREAM`` to swap the labels.
    """
    if indirect_labels not in (LEONTIEF_UPSTREAM, LEONTIEF_DOWNSTREAM):
        raise InvalidScenarioError(f"unknown indirect_labels {indirect_labels!r}")
    if not _same_table(dm.table, sm.table):
        raise ModelMismatchError("demand and supply models derive from different tables")
    t = dm.table
    scale = unit_scale(t.currency_unit)

    per_program: dict[str, ProgramImpact] = {}
    direct = demand_indirect = supply_indirect = 0.0
    for p in s.programs:
        shock_vec = program_shock_vector(p, t, paper_rounding)
        if p.model_side is ModelSide.DEMAND:
            delta = demand.propagate_demand_shock(dm, shock_vec)
        else:
            delta = supply.propagate_supply_shock(sm, shock_vec)
        shock = float(shock_vec.sum())
        total = float(delta.sum())
        derivation = None
        if p.subsidy is not None:
            d = derive_subsidy_demand(p.subsidy, p.budget * scale)
            derivation = SubsidyDemand(
                d.households, d.induced_household_spend / scale, d.total_demand / scale
            )
        per_program[p.name] = ProgramImpact(
            name=p.name,
            model_side=p.model_side,
            target_sector=p.target_sector,
            budget=p.budget,
            shock=shock,
            total_impact=total,
            keynesian_multiplier=keynesian_multiplier(total, p.budget),
            shock_multiplier=keynesian_multiplier(total, shock),
            per_sector_delta=delta,
            horizon_years=p.horizon_years,
            subsidy_demand=derivation,
            reported_total_demand=p.subsidy.reported_total_demand if p.subsidy else None,
        )
        direct += shock
        if p.model_side is ModelSide.DEMAND:
            demand_indirect += total - shock
        else:
            supply_indirect += total - shock

    if indirect_labels == LEONTIEF_UPSTREAM:
        upstream, downstream = demand_indirect, supply_indirect
    else:
        upstream, downstream = supply_indirect, demand_indirect
    grand_total = math.fsum(i.total_impact for i in per_program.values())
    totals = ImpactTotals(direct, upstream, downstream, grand_total)
    shares = ImpactTotals(*(gdp_share(v, s) for v in (direct, upstream, downstream, grand_total)))
    budget = sum(p.budget for p in s.programs)

    caveats = []
    if any(p.model_side is ModelSide.SUPPLY for p in s.programs):
        caveats.append(SUPPLY_SIDE_CAVEAT)
    horizons = sorted({p.horizon_years for p in s.programs})
    if horizons:
        caveats.append(
            "static model: each shock is applied once in full; program horizons "
            f"({', '.join(map(str, horizons))} years) are annotation only"
        )
    return ImpactReport(
        sectors=t.codes,
        unit=t.currency_unit,
        per_program=per_program,
        totals=totals,
        gdp_shares=shares,
        keynesian_multiplier=grand_total / budget if budget else 0.0,
        shock_multiplier=grand_total / direct if direct else 0.0,
        indirect_labels=indirect_labels,
        caveats=tuple(caveats),
    )


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise InvalidScenarioError(f"{where}: missing field {key!r}")
    return obj[key]


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise InvalidScenarioError("scenario document must be a JSON object")
    programs = []
    for k, raw in enumerate(_require(doc, "programs", "scenario")):
        where = f"programs[{k}]"
        subsidy = raw.get("subsidy")
        rule = None
        if subsidy is not None:
            rule = SubsidyRule(
                monthly_subsidy=float(_require(subsidy, "monthly_subsidy", where)),
                market_price=float(_require(subsidy, "market_price", where)),
                program_years=int(subsidy.get("program_years", 1)),
                reported_total_demand=(
                    float(subsidy["reported_total_demand"])
                    if subsidy.get("reported_total_demand") is not None
                    else None
                ),
            )
        side = _require(raw, "model_side", where)
        if side not in {m.value for m in ModelSide}:
            raise InvalidScenarioError(
                f"{where}: model_side must be 'demand' or 'supply', got {side!r}"
            )
        programs.append(
            Program(
                name=str(_require(raw, "name", where)),
                budget=float(_require(raw, "budget", where)),
                target_sector=str(_require(raw, "target_sector", where)),
                model_side=side,
                subsidy=rule,
                horizon_years=int(raw.get("horizon_years", 1)),
            )
        )
    return Scenario(tuple(programs), float(_require(doc, "gdp_denominator", "scenario")))


def load_scenario(source: TextIO) -> Scenario:
    try:
        doc = json.load(source)
    except json.JSONDecodeError as exc:
        raise InvalidScenarioError(f"scenario is not valid JSON: {exc}") from None
    return scenario_from_dict(doc)


def scenario_to_dict(s: Scenario) -> dict:
    programs = []
    for p in s.programs:
        subsidy = None
        if p.subsidy is not None:
            subsidy = {
                "monthly_subsidy": p.subsidy.monthly_subsidy,
                "market_price": p.subsidy.market_price,
                "program_years": p.subsidy.program_years,
            }
            if p.subsidy.reported_total_demand is not None:
                subsidy["reported_total_demand"] = p.subsidy.reported_total_demand
        programs.append(
            {
                "name": p.name,
                "budget": p.budget,
                "target_sector": p.target_sector,
                "model_side": p.model_side.value,
                "horizon_years": p.horizon_years,
                "subsidy": subsidy,
            }
        )
    return {"gdp_denominator": s.gdp_denominator, "programs": programs}
