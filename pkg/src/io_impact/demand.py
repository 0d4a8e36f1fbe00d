"""Leontief demand-side model.

Technical coefficients ``a_ij = z_ij / x_j`` and the Leontief inverse
``L = (I - A)^{-1}`` map a change in final demand to a change in total
output, ``dx = L @ df``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NonProductiveError
from .io_table import IoTable
from .linalg import as_vector, lu_invert, spectral_radius_bound

PRODUCTIVITY_ITERATIONS = 1000


@dataclass(frozen=True, eq=False)
class DemandModel:
    table: IoTable
    a: np.ndarray
    l: np.ndarray  # noqa: E741

    @property
    def inverse(self) -> np.ndarray:
        return self.l

    @property
    def coefficients(self) -> np.ndarray:
        return self.a


def check_productive(coef: np.ndarray, axis: int, codes, label: str) -> None:
    """Raise NonProductiveError unless every column (axis=0) or row (axis=1)
    sum is below one and the spectral radius is below one."""
    sums = coef.sum(axis=axis)
    bad = np.flatnonzero(sums >= 1.0)
    if bad.size:
        which = "column" if axis == 0 else "row"
        raise NonProductiveError(
            f"{label}: {which} sum {sums[bad[0]]:.6g} >= 1 for sector {codes[bad[0]]!r}"
        )
    rho = spectral_radius_bound(coef, PRODUCTIVITY_ITERATIONS)
    if rho >= 1.0:
        raise NonProductiveError(f"{label}: spectral radius {rho:.6g} >= 1")


def build_demand_model(t: IoTable) -> DemandModel:
    a = t.z / t.x[np.newaxis, :]
    check_productive(a, 0, t.codes, "technical coefficients")
    l = lu_invert(np.eye(t.n) - a)  # noqa: E741
    a.setflags(write=False)
    return DemandModel(t, a, l)


def propagate_demand_shock(m: DemandModel, delta_f) -> np.ndarray:
    delta_f = as_vector(delta_f, "delta_f")
    if delta_f.shape != (m.table.n,):
        raise DimensionError(
            f"demand shock has length {delta_f.size}, table has {m.table.n} sectors"
        )
    return m.l @ delta_f


def demand_multiplier(m: DemandModel, sector: str) -> float:
    """Output multiplier: column sum of L for ``sector``."""
    return float(m.l[:, m.table.index(sector)].sum())
