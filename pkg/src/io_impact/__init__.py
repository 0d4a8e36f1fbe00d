"""Leontief and Ghosh input-output impact modelling of investment programs."""

from .demand import DemandModel, build_demand_model, demand_multiplier, propagate_demand_shock
from .errors import *  # noqa: F401,F403
from .io_table import IoTable, Sector, aggregate_sectors, load_table, validate, write_table
from .scenario import (
    ImpactReport,
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
)
from .supply import SupplyModel, build_supply_model, propagate_supply_shock, supply_multiplier

__version__ = "0.1.0"
