"""Sankey flow data (program -> target sector -> impacted sector)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ImpactReport, Scenario

OTHER_ID = "sector:__other__"
OTHER_LABEL = "Other sectors"


@dataclass(frozen=True)
class SankeyNode:
    id: str
    label: str
    stage: str  # "program", "target_sector" or "impacted_sector"


@dataclass(frozen=True)
class SankeyLink:
    source: str
    target: str
    value: float


@dataclass(frozen=True)
class SankeyGraph:
    nodes: tuple[SankeyNode, ...]
    links: tuple[SankeyLink, ...]

    def stage_total(self, source_stage: str) -> float:
        stages = {n.id: n.stage for n in self.nodes}
        return sum(l.value for l in self.links if stages[l.source] == source_stage)

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": n.id, "label": n.label, "stage": n.stage} for n in self.nodes],
            "links": [
                {"source": l.source, "target": l.target, "value": l.value} for l in self.links
            ],
        }


def emit_sankey(report: ImpactReport, s: Scenario, top_k: int = 10) -> SankeyGraph:
    """Build the flow graph for a scenario report.

    Program links carry each program's shock; target-sector links carry the
    per-sector output changes of the programs feeding that target. Impacted
    sectors outside the ``top_k`` largest (by total change) are merged into
    an "Other sectors" node.
    """
    codes = list(report.sectors)
    totals = report.per_sector_total
    order = sorted(range(len(codes)), key=lambda i: (-totals[i], i))
    keep = sorted(order[: max(top_k, 0)])
    collapsed = [i for i in range(len(codes)) if i not in set(keep)]

    nodes: list[SankeyNode] = []
    links: list[SankeyLink] = []
    for p in s.programs:
        nodes.append(SankeyNode(f"program:{p.name}", p.name, "program"))
    targets: dict[str, np.ndarray] = {}
    for p in s.programs:
        impact = report.per_program[p.name]
        tid = f"target:{p.target_sector}"
        if p.target_sector not in targets:
            targets[p.target_sector] = np.zeros(len(codes))
            nodes.append(SankeyNode(tid, p.target_sector, "target_sector"))
        targets[p.target_sector] += impact.per_sector_delta
        links.append(SankeyLink(f"program:{p.name}", tid, impact.shock))

    if s.programs:
        for i in keep:
            nodes.append(SankeyNode(f"sector:{codes[i]}", codes[i], "impacted_sector"))
        if collapsed:
            nodes.append(SankeyNode(OTHER_ID, OTHER_LABEL, "impacted_sector"))
    for target, delta in targets.items():
        for i in keep:
            links.append(SankeyLink(f"target:{target}", f"sector:{codes[i]}", float(delta[i])))
        if collapsed:
            links.append(
                SankeyLink(f"target:{target}", OTHER_ID, float(sum(delta[i] for i in collapsed)))
            )
    return SankeyGraph(tuple(nodes), tuple(links))
