"""End-to-end planning: scene -> traversability -> graphs -> loop -> plans.

``ScenePlanner`` performs the shared pre-computation once (slope filter,
covering/spanning graphs, spanning tree, coverage loop) and then serves
any number of (algorithm, robots, capacity) planning requests on top of
it, which keeps parameter sweeps cheap.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from . import baselines, partition
from .graphs import (CoveringGraph, PlannerConfig, SpanningGraph,
                     build_covering_graph, build_spanning_graph)
from .scene import Scene, SceneError
from .stc import CoverageLoop, SpanningTree, minimum_spanning_tree, spiral_stc_loop
from .terrain import build_traversability

ALGORITHMS = ("mstc-nb", "mstc-bo", "naive", "balanced")


class PlanningError(RuntimeError):
    pass


def _component_subgraph(h: SpanningGraph, root) -> SpanningGraph:
    keep = {root}
    queue = deque([root])
    while queue:
        block = queue.popleft()
        for nbr in h.adjacency[block]:
            if nbr not in keep:
                keep.add(nbr)
                queue.append(nbr)
    if len(keep) == len(h.blocks):
        return h
    blocks = [b for b in h.blocks if b in keep]
    edges = {e: w for e, w in h.edges.items() if e[0] in keep}
    adjacency = {b: h.adjacency[b] for b in keep}
    sub = SpanningGraph(blocks=blocks, edges=edges, adjacency=adjacency, cover_map={})
    for block in blocks:
        for cell in sub.block_cells(block):
            sub.cover_map[cell] = block
    return sub


@dataclass
class PlanResult:
    algorithm: str
    robots: int
    capacity: float
    outcome: partition.PlanOutcome
    coverage: dict

    @property
    def max_weight(self) -> float:
        return self.outcome.max_weight

    @property
    def total_weight(self) -> float:
        return self.outcome.total_weight


class ScenePlanner:
    """Shared pipeline state for one scene and one weighting config."""

    def __init__(self, scene: Scene, config: PlannerConfig | None = None):
        self.scene = scene
        self.config = config or PlannerConfig()
        scene.validate()
        self.tmap = build_traversability(scene, self.config.slope_threshold)
        self.graph: CoveringGraph = build_covering_graph(self.tmap, self.config,
                                                         scene.depots)
        h_full = build_spanning_graph(self.tmap, self.config)
        start = scene.depots[0]
        if start not in h_full.cover_map:
            raise PlanningError(
                f"depot {start} is not inside an intact 2x2 block; "
                "the coverage loop must start at the first depot"
            )
        self.spanning: SpanningGraph = _component_subgraph(h_full, h_full.cover_map[start])
        self.tree: SpanningTree = minimum_spanning_tree(self.spanning,
                                                        self.spanning.cover_map[start])
        self.loop: CoverageLoop = spiral_stc_loop(self.graph, self.tree, start)
        covered = 4 * len(self.spanning.blocks)
        free = len(self.graph.cells)
        self.coverage = {
            "covered_cells": covered,
            "free_cells": free,
            "ratio": covered / free if free else 0.0,
        }

    def depots(self, k: int) -> list:
        if len(self.scene.depots) < k:
            raise PlanningError(
                f"scene provides {len(self.scene.depots)} depots, need {k}"
            )
        return self.scene.depots[:k]

    def plan(self, algorithm: str, robots: int,
             capacity: float = math.inf) -> PlanResult:
        if algorithm not in ALGORITHMS:
            raise PlanningError(f"unknown algorithm '{algorithm}'")
        depots = self.depots(robots)
        if algorithm == "mstc-nb":
            outcome = baselines.mstc_nb(self.graph, self.loop, depots, capacity)
        elif algorithm == "mstc-bo":
            outcome = baselines.mstc_bo(self.graph, self.loop, depots, capacity)
        elif algorithm == "naive":
            outcome = partition.naive_mstc(self.graph, self.loop, robots, capacity)
        else:
            outcome = partition.capacity_partition(self.graph, self.loop, robots,
                                                   capacity, self.config)
        return PlanResult(algorithm=algorithm, robots=robots, capacity=capacity,
                          outcome=outcome, coverage=self.coverage)

    def compare(self, algorithms: list[str], robots: int, capacity: float,
                scene_id: str = "scene", seed: int | None = None
                ) -> baselines.ComparisonReport:
        if len(algorithms) < 2:
            raise PlanningError("comparison needs at least two algorithms")
        weights = {}
        for algo in algorithms:
            weights[algo] = self.plan(algo, robots, capacity).max_weight
        return baselines.ComparisonReport(
            robots=robots, capacity=capacity, scene_id=scene_id, seed=seed,
            baseline=algorithms[0], max_weights=weights,
        )


def capacity_label(capacity: float) -> str:
    return "inf" if capacity == math.inf else str(int(capacity))


def plan_document(result: PlanResult, scene: Scene, scene_id: str = "scene",
                  seed: int | None = None,
                  config: PlannerConfig | None = None) -> dict:
    """JSON-serializable plan document (schema used by render and tests)."""
    config = config or PlannerConfig()
    plans = []
    for p in result.outcome.plans:
        plans.append({
            "robot": p.robot,
            "depot": list(p.depot),
            "path": [list(c) for c in p.segment],
            "runs": [[list(c) for c in run] for run in p.runs],
            "trips": p.trips,
            "weight": p.weight,
            "refills": [
                {
                    "index": t.serviced_index,
                    "cell": list(t.break_cell),
                    "cost": t.cost,
                    "outbound": [list(c) for c in t.outbound],
                    "inbound": [list(c) for c in t.inbound],
                }
                for t in p.refills
            ],
        })
    return {
        "algorithm": result.algorithm,
        "robots": result.robots,
        "capacity": capacity_label(result.capacity),
        "alpha": config.alpha,
        "beta": config.beta,
        "slope_threshold": config.slope_threshold,
        "seed": seed,
        "scene": {"id": scene_id, "width": scene.width, "height": scene.height},
        "coverage": result.coverage,
        "global": {
            "max_weight": result.max_weight,
            "total_weight": result.total_weight,
            "iterations": result.outcome.iterations,
        },
        "plans": plans,
    }


def write_json_atomic(path, doc: dict) -> Path:
    """Serialize deterministically and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(doc, indent=2, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
