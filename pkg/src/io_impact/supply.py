"""Ghosh supply-side model.

Allocation coefficients ``b_ij = z_ij / x_i`` and the Ghosh inverse
``G = (I - B)^{-1}`` map a change in value added (primary inputs) to a
change in total output, ``dx' = dv' @ G``.

Supply-side results are indicative: the model assumes purchasers absorb
any extra output at fixed allocation shares, so reports flag them as
upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .demand import check_productive
from .errors import DimensionError
from .io_table import IoTable
from .linalg import as_vector, lu_invert

SUPPLY_SIDE_CAVEAT = (
    "supply-side (Ghosh) results are indicative upper bounds; static "
    "input-output models lack conclusive empirical validity"
)


@dataclass(frozen=True, eq=False)
class SupplyModel:
    table: IoTable
    b: np.ndarray
    g: np.ndarray

    @property
    def inverse(self) -> np.ndarray:
        return self.g

    @property
    def coefficients(self) -> np.ndarray:
        return self.b


def build_supply_model(t: IoTable) -> SupplyModel:
    b = t.z / t.x[:, np.newaxis]
    check_productive(b, 1, t.codes, "allocation coefficients")
    g = lu_invert(np.eye(t.n) - b)
    b.setflags(write=False)
    return SupplyModel(t, b, g)


def propagate_supply_shock(m: SupplyModel, delta_v) -> np.ndarray:
    delta_v = as_vector(delta_v, "delta_v")
    if delta_v.shape != (m.table.n,):
        raise DimensionError(
            f"supply shock has length {delta_v.size}, table has {m.table.n} sectors"
        )
    return delta_v @ m.g


def supply_multiplier(m: SupplyModel, sector: str) -> float:
    """Row sum of G for ``sector``."""
    return float(m.g[m.table.index(sector), :].sum())
