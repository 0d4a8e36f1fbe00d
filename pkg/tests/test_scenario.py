import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, TOY_L, balanced_tables, toy_table
from io_impact import demand, supply
from io_impact.demand import build_demand_model
from io_impact.errors import (
    InvalidScenarioError,
    ModelMismatchError,
    UnknownSectorError,
)
from io_impact.io_table import IoTable, load_table
from io_impact.scenario import (
    LEONTIEF_DOWNSTREAM,
    ModelSide,
    Program,
    Scenario,
    SubsidyRule,
    derive_subsidy_demand,
    evaluate_scenario,
    gdp_share,
    keynesian_multiplier,
    load_scenario,
    program_shock_vector,
    scenario_from_dict,
    scenario_to_dict,
)
from io_impact.supply import build_supply_model


def models(t):
    return build_demand_model(t), build_supply_model(t)


@pytest.fixture
def illustrative():
    with open(DATA / "illustrative_flows.csv") as fl, open(DATA / "illustrative_vectors.csv") as ve:
        return load_table(fl, ve)


@pytest.fixture
def bil():
    with open(DATA / "bil_example.json") as fh:
        return load_scenario(fh)


# -- subsidy derivation ------------------------------------------------------

def test_subsidy_demand_acp_figures():
    d = derive_subsidy_demand(SubsidyRule(30, 61), 14.2e9)
    # 14.2e9 / 360 households; each pays (61 - 30) * 12 = 372 a year
    assert d.households == pytest.approx(14.2e9 / 360, rel=1e-15)
    assert d.households == pytest.approx(39.4e6, abs=0.1e6)
    assert d.induced_household_spend == pytest.approx(14.2e9 / 360 * 372, rel=1e-15)
    assert d.total_demand == pytest.approx(28.873333e9, rel=1e-7)


def test_subsidy_equal_to_price_adds_nothing():
    d = derive_subsidy_demand(SubsidyRule(61, 61), 1e6)
    assert d.induced_household_spend == 0
    assert d.total_demand == 1e6


@pytest.mark.parametrize("subsidy,price", [(0, 61), (70, 61), (-1, 61)])
def test_subsidy_rule_invalid(subsidy, price):
    with pytest.raises(InvalidScenarioError):
        SubsidyRule(subsidy, price)


def test_subsidy_budget_must_be_positive():
    with pytest.raises(InvalidScenarioError):
        derive_subsidy_demand(SubsidyRule(), 0)


# -- shock vectors -----------------------------------------------------------

def test_bead_and_tbcp_shock_vectors(illustrative):
    k = illustrative.index("513")
    for budget in (42450.0, 3000.0):
        p = Program("P", budget, "513", ModelSide.SUPPLY)
        vec = program_shock_vector(p, illustrative)
        expected = np.zeros(illustrative.n)
        expected[k] = budget
        np.testing.assert_array_equal(vec, expected)


def test_subsidised_shock_uses_unit_scale(illustrative):
    p = Program("ACP", 14200.0, "513", ModelSide.DEMAND, SubsidyRule(30, 61, 1, 29100.0))
    vec = program_shock_vector(p, illustrative)
    assert vec.sum() == pytest.approx(28873.333333, rel=1e-9)
    assert program_shock_vector(p, illustrative, paper_rounding=True).sum() == 29100.0


def test_shock_unknown_sector(toy):
    with pytest.raises(UnknownSectorError):
        program_shock_vector(Program("P", 1.0, "513", "demand"), toy)


def test_program_invariants():
    with pytest.raises(InvalidScenarioError):
        Program("P", 0.0, "1", "demand")
    with pytest.raises(InvalidScenarioError):
        Program("P", 1.0, "1", "demand", horizon_years=0)
    with pytest.raises(ValueError):
        Program("P", 1.0, "1", "sideways")


def test_scenario_unique_names():
    p = Program("P", 1.0, "1", "demand")
    with pytest.raises(InvalidScenarioError, match="duplicate"):
        Scenario((p, p), 1.0)


# -- evaluation --------------------------------------------------------------

def test_toy_single_demand_program(toy):
    s = Scenario((Program("P", 100.0, "2", "demand"),), gdp_denominator=3000.0)
    report = evaluate_scenario(s, *models(toy))
    impact = report.per_program["P"]
    expected_total = 100 * TOY_L[:, 1].sum()  # (0.25 + 0.85) / 0.7575 * 100
    assert impact.total_impact == pytest.approx(expected_total, rel=1e-12)
    assert impact.total_impact == pytest.approx(145.2145, abs=1e-4)
    assert impact.keynesian_multiplier == pytest.approx(1.452145, abs=1e-6)
    np.testing.assert_allclose(impact.per_sector_delta, 100 * TOY_L[:, 1], rtol=1e-12)
    assert report.totals.direct == 100.0
    assert report.totals.upstream == pytest.approx(expected_total - 100, rel=1e-12)
    assert report.totals.downstream == 0.0
    assert report.gdp_shares.grand_total == pytest.approx(100 * expected_total / 3000, rel=1e-12)


def test_empty_scenario_is_all_zero(toy):
    report = evaluate_scenario(Scenario((), 1.0), *models(toy))
    assert report.per_program == {}
    assert report.totals.to_dict() == {"direct": 0, "upstream": 0, "downstream": 0, "grand_total": 0}
    assert report.keynesian_multiplier == 0.0


def test_model_mismatch(toy):
    other = toy_table(z=[[100.0, 500.0], [200.0, 100.0]], v=[700.0, 1400.0], f=[400.0, 1700.0])
    with pytest.raises(ModelMismatchError):
        evaluate_scenario(Scenario((), 1.0), build_demand_model(toy), build_supply_model(other))


def test_equal_tables_are_not_a_mismatch(toy):
    evaluate_scenario(Scenario((), 1.0), build_demand_model(toy), build_supply_model(toy_table()))


def test_label_switch(toy):
    s = Scenario(
        (Program("D", 100.0, "2", "demand"), Program("S", 50.0, "1", "supply")), 1e6
    )
    default = evaluate_scenario(s, *models(toy))
    swapped = evaluate_scenario(s, *models(toy), indirect_labels=LEONTIEF_DOWNSTREAM)
    assert default.totals.upstream == swapped.totals.downstream
    assert default.totals.downstream == swapped.totals.upstream
    assert default.totals.grand_total == swapped.totals.grand_total


def test_acp_reports_both_multipliers(illustrative, bil):
    report = evaluate_scenario(bil, *models(illustrative))
    acp = report.per_program["ACP"]
    assert acp.keynesian_multiplier == pytest.approx(acp.total_impact / 14200.0, rel=1e-12)
    assert acp.shock_multiplier == pytest.approx(acp.total_impact / acp.shock, rel=1e-12)
    assert acp.subsidy_demand.total_demand == pytest.approx(28873.333333, rel=1e-9)
    doc = acp.to_dict(report.sectors, bil)
    assert doc["subsidy_derivation"]["reported_total_demand"] == 29100.0
    assert "caveat" in report.per_program["BEAD"].to_dict(report.sectors, bil)


def test_report_invariants_on_bil(illustrative, bil):
    report = evaluate_scenario(bil, *models(illustrative))
    per_program_total = sum(p.total_impact for p in report.per_program.values())
    assert report.totals.grand_total == pytest.approx(per_program_total, rel=1e-9)
    t = report.totals
    assert t.direct + t.upstream + t.downstream == pytest.approx(t.grand_total, rel=1e-9)
    for name, p in report.per_program.items():
        assert p.keynesian_multiplier * p.budget == pytest.approx(p.total_impact, rel=1e-12)
    assert report.keynesian_multiplier == pytest.approx(t.grand_total / 59650.0, rel=1e-12)
    assert any("upper bounds" in c for c in report.caveats)


def test_side_routing(monkeypatch, illustrative, bil):
    calls = {"demand": 0, "supply": 0}
    real_d, real_s = demand.propagate_demand_shock, supply.propagate_supply_shock

    def count_d(m, v):
        calls["demand"] += 1
        return real_d(m, v)

    def count_s(m, v):
        calls["supply"] += 1
        return real_s(m, v)

    monkeypatch.setattr(demand, "propagate_demand_shock", count_d)
    monkeypatch.setattr(supply, "propagate_supply_shock", count_s)
    dm, sm = models(illustrative)
    evaluate_scenario(Scenario(bil.programs[1:2], 1.0), dm, sm)  # ACP only
    assert calls == {"demand": 1, "supply": 0}
    evaluate_scenario(Scenario((bil.programs[0], bil.programs[2]), 1.0), dm, sm)
    assert calls == {"demand": 1, "supply": 2}


programs_strategy = st.lists(
    st.tuples(
        st.floats(0.1, 1e4),
        st.sampled_from(["demand", "supply"]),
        st.integers(0, 19),
        st.booleans(),
    ),
    max_size=5,
)


def _programs(t: IoTable, raw):
    out = []
    for k, (budget, side, idx, subsidised) in enumerate(raw):
        rule = SubsidyRule(30, 61) if subsidised and side == "demand" else None
        out.append(Program(f"p{k}", budget, t.codes[idx % t.n], side, rule))
    return tuple(out)


@settings(max_examples=50, deadline=None)
@given(balanced_tables(), programs_strategy)
def test_linearity_over_programs(t, raw):
    dm, sm = models(t)
    s = Scenario(_programs(t, raw), 1e6)
    whole = evaluate_scenario(s, dm, sm)
    parts = [evaluate_scenario(Scenario((p,), 1e6), dm, sm) for p in s.programs]
    for field in ("direct", "upstream", "downstream", "grand_total"):
        expected = sum(getattr(r.totals, field) for r in parts)
        assert getattr(whole.totals, field) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    summed = sum((r.per_sector_total for r in parts), np.zeros(t.n))
    np.testing.assert_allclose(whole.per_sector_total, summed, rtol=1e-9, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(balanced_tables(), programs_strategy, st.floats(0.01, 100))
def test_scale_equivariance(t, raw, k):
    dm, sm = models(t)
    base = _programs(t, raw)
    scaled = tuple(
        Program(p.name, p.budget * k, p.target_sector, p.model_side, p.subsidy) for p in base
    )
    r1 = evaluate_scenario(Scenario(base, 1e6), dm, sm)
    r2 = evaluate_scenario(Scenario(scaled, 1e6), dm, sm)
    for field in ("direct", "upstream", "downstream", "grand_total"):
        a, b = getattr(r1.totals, field), getattr(r2.totals, field)
        assert b == pytest.approx(k * a, rel=1e-9, abs=1e-9 * k)
    for name, p in r1.per_program.items():
        q = r2.per_program[name]
        assert q.keynesian_multiplier == pytest.approx(p.keynesian_multiplier, rel=1e-9)
        assert q.shock_multiplier == pytest.approx(p.shock_multiplier, rel=1e-9)


# -- ratios and shares -------------------------------------------------------

def test_keynesian_multiplier_requires_outlay():
    with pytest.raises(InvalidScenarioError):
        keynesian_multiplier(1.0, 0.0)


def test_gdp_share():
    s = Scenario((), 23.354e12)
    assert gdp_share(74.5e9, s) == pytest.approx(0.319, abs=5e-4)
    assert gdp_share(0.0, s) == 0.0
    assert gdp_share(23.354e12, s) == 100.0


# -- scenario file -----------------------------------------------------------

def test_bil_example_contents(bil):
    names = [p.name for p in bil.programs]
    assert names == ["BEAD", "ACP", "TBCP"]
    bead, acp, tbcp = bil.programs
    assert (bead.budget, bead.model_side) == (42450.0, ModelSide.SUPPLY)
    assert (acp.budget, acp.model_side) == (14200.0, ModelSide.DEMAND)
    assert (tbcp.budget, tbcp.model_side) == (3000.0, ModelSide.SUPPLY)
    assert acp.subsidy == SubsidyRule(30.0, 61.0, 1, 29100.0)
    assert {p.target_sector for p in bil.programs} == {"513"}


def test_scenario_dict_round_trip(bil):
    assert scenario_from_dict(json.loads(json.dumps(scenario_to_dict(bil)))) == bil


@pytest.mark.parametrize(
    "doc",
    [
        "[]",
        '{"programs": []}',
        '{"gdp_denominator": 1, "programs": [{"name": "x", "budget": 1, "target_sector": "1"}]}',
        '{"gdp_denominator": 1, "programs": [{"name": "x", "budget": 1, "target_sector": "1",'
        ' "model_side": "both"}]}',
        "{not json",
    ],
)
def test_invalid_scenario_documents(doc):
    with pytest.raises(InvalidScenarioError):
        load_scenario(io.StringIO(doc))
