"""Write the bundled illustrative 12-sector table (USD millions).

The numbers are synthetic: gross outputs are of the order of US summary
sectors and the coefficient pattern is hand-set so that telecom sells
widely and buys mostly manufacturing and professional services. They are
not BEA data. Flows are rounded to whole millions and f, v are then
solved so that both balance identities hold exactly.
"""

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "io_impact" / "data"

SECTORS = [
    ("11", "Agriculture, forestry, fishing, and hunting", 560_000),
    ("21", "Mining", 700_000),
    ("22", "Utilities", 580_000),
    ("23", "Construction", 2_100_000),
    ("31G", "Manufacturing", 7_200_000),
    ("42", "Wholesale trade", 2_500_000),
    ("513", "Broadcasting and telecommunications", 1_250_000),
    ("52", "Finance and insurance", 3_700_000),
    ("531", "Real estate", 4_600_000),
    ("54", "Professional, scientific, and technical services", 3_300_000),
    ("56", "Administrative and waste management services", 1_300_000),
    ("71", "Arts, entertainment, and recreation", 380_000),
]

# Technical coefficients (input from row sector per unit output of column sector).
A = np.array([
    # 11    21    22    23    31G   42    513   52    531   54    56    71
    [0.18, 0.00, 0.00, 0.01, 0.04, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01],
    [0.01, 0.08, 0.12, 0.01, 0.04, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    [0.02, 0.02, 0.02, 0.01, 0.02, 0.01, 0.01, 0.00, 0.02, 0.00, 0.01, 0.02],
    [0.01, 0.02, 0.04, 0.00, 0.01, 0.00, 0.02, 0.00, 0.04, 0.00, 0.01, 0.01],
    [0.14, 0.08, 0.05, 0.22, 0.28, 0.03, 0.05, 0.01, 0.01, 0.03, 0.03, 0.04],
    [0.05, 0.02, 0.02, 0.05, 0.06, 0.03, 0.02, 0.00, 0.00, 0.01, 0.01, 0.02],
    [0.00, 0.00, 0.01, 0.01, 0.01, 0.02, 0.12, 0.03, 0.01, 0.03, 0.03, 0.05],
    [0.03, 0.03, 0.02, 0.02, 0.01, 0.02, 0.02, 0.16, 0.05, 0.02, 0.02, 0.02],
    [0.06, 0.04, 0.01, 0.01, 0.01, 0.04, 0.03, 0.03, 0.08, 0.04, 0.04, 0.06],
    [0.01, 0.04, 0.02, 0.05, 0.04, 0.04, 0.07, 0.05, 0.02, 0.10, 0.05, 0.04],
    [0.01, 0.02, 0.02, 0.02, 0.02, 0.04, 0.03, 0.03, 0.01, 0.04, 0.04, 0.03],
    [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.00, 0.00, 0.00, 0.00, 0.02],
])


def main() -> None:
    codes = [c for c, _, _ in SECTORS]
    x = np.array([out for _, _, out in SECTORS], dtype=float)
    z = np.rint(A * x[np.newaxis, :])
    f = x - z.sum(axis=1)
    v = x - z.sum(axis=0)
    assert (v > 0).all() and (f > 0).all()
    with open(OUT / "illustrative_flows.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sector", *codes])
        for code, row in zip(codes, z):
            w.writerow([code, *(f"{val:.0f}" for val in row)])
    with open(OUT / "illustrative_vectors.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sector", "final_demand", "value_added", "total_output", "name"])
        for (code, name, _), fi, vi, xi in zip(SECTORS, f, v, x):
            w.writerow([code, f"{fi:.0f}", f"{vi:.0f}", f"{xi:.0f}", name])


if __name__ == "__main__":
    main()
