import io
from importlib import resources
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from io_impact.io_table import IoTable, Sector, load_table

DATA = Path(str(resources.files("io_impact") / "data"))

TOY_Z = [[150.0, 500.0], [200.0, 100.0]]
TOY_F = [350.0, 1700.0]
TOY_V = [650.0, 1400.0]
TOY_X = [1000.0, 2000.0]

# Closed-form 2x2 inverses, det(I - A) = det(I - B) = 0.85*0.95 - 0.25*0.20 = 0.7575.
TOY_DET = 0.7575
TOY_L = np.array([[0.95, 0.25], [0.20, 0.85]]) / TOY_DET
TOY_G = np.array([[0.95, 0.50], [0.10, 0.85]]) / TOY_DET


def toy_table(**overrides) -> IoTable:
    fields = dict(sectors=(Sector("1"), Sector("2")), z=TOY_Z, f=TOY_F, v=TOY_V, x=TOY_X)
    fields.update(overrides)
    return IoTable(**fields)


@pytest.fixture
def toy():
    return toy_table()


def zero_flow_table(n: int = 3) -> IoTable:
    x = np.arange(1.0, n + 1) * 100
    return IoTable(tuple(Sector(f"s{i}") for i in range(n)), np.zeros((n, n)), x, x, x)


def random_balanced_table(rng: np.random.Generator, n: int, max_share: float = 0.9) -> IoTable:
    """Balanced table whose A column sums and B row sums are all <= max_share."""
    x = rng.uniform(10.0, 1e4, n)
    m = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < 0.7)
    col = m.sum(axis=0)
    row = m.sum(axis=1)
    with np.errstate(divide="ignore"):
        limit = min(
            np.min(np.where(col > 0, x / np.where(col > 0, col, 1), np.inf)),
            np.min(np.where(row > 0, x / np.where(row > 0, row, 1), np.inf)),
        )
    if not np.isfinite(limit):
        limit = 0.0
    z = m * max_share * limit * rng.uniform(0.05, 1.0)
    f = x - z.sum(axis=1)
    v = x - z.sum(axis=0)
    v = np.maximum(v, 0.0)  # only rounding-level negatives can occur
    return IoTable(tuple(Sector(f"s{i}") for i in range(n)), z, f, v, x)


@st.composite
def balanced_tables(draw, max_n: int = 20):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_balanced_table(np.random.default_rng(seed), n)


def table_from_strings(flows: str, vectors: str, **kw) -> IoTable:
    return load_table(io.StringIO(flows), io.StringIO(vectors), **kw)


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(ident, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    ident, text = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "skipped": "SKIP"}.get(report.outcome, "FAIL")
        _ACCEPTANCE[ident] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for ident in sorted(_ACCEPTANCE, key=lambda k: int(k.lstrip("AC"))):
        status, text = _ACCEPTANCE[ident]
        terminalreporter.write_line(f"{status} {ident}: {text}")
