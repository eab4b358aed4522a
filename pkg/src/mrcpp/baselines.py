"""Depot-keyed baseline partitions and the comparison metric.

MSTC-NB keys the loop at the depot cells themselves: each robot covers
forward from its own depot until the next robot's depot.  MSTC-BO lets
each robot additionally backtrack over a tail of the arc behind its
depot; the backtracked tail sizes start at zero (identical to NB) and
are improved by coordinate descent on the maximum robot cost, so BO is
never worse than NB.  The backtracking rule is our rendering of the
baseline's informal description: per-arc splits, accepted only when the
fleet-wide maximum cost decreases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import CoveringGraph
from .partition import (LoopCostModel, PartitionError, PartitionSet, PlanOutcome,
                        _refill_offsets, build_robot_plan, trips_required)
from .scene import Cell
from .stc import CoverageLoop


class BaselineError(ValueError):
    pass


def _depot_arcs(loop: CoverageLoop, depots: list[Cell]) -> list[tuple[int, int]]:
    """(loop position, robot id) per depot, sorted along the loop."""
    entries = []
    for robot, depot in enumerate(depots):
        if not loop.contains(depot):
            raise BaselineError(f"depot {depot} does not lie on the coverage loop")
        entries.append((loop.position(depot), robot))
    entries.sort()
    return entries


def mstc_nb(g: CoveringGraph, loop: CoverageLoop, depots: list[Cell],
            capacity: float = math.inf) -> PlanOutcome:
    """Non-backtracking baseline: key nodes are the depot positions."""
    entries = _depot_arcs(loop, depots)
    k, length = len(entries), len(loop)
    keys = [pos for pos, _ in entries]
    binding = [robot for _, robot in entries]
    pset = PartitionSet(keys=keys, loop_length=length)
    plans = []
    for j, (pos, robot) in enumerate(entries):
        nodes = pset.segment_nodes(loop, j)
        plans.append(build_robot_plan(robot, depots[robot], [nodes], capacity, g))
    plans.sort(key=lambda p: p.robot)
    pset.weights = [plans[binding[j]].weight for j in range(k)]
    return PlanOutcome(plans=plans, partition=pset, binding=binding, iterations=0)


class _BoCosts:
    """Fast full-cost evaluation for backtracking candidates."""

    def __init__(self, g: CoveringGraph, loop: CoverageLoop,
                 entries: list[tuple[int, int]], depots: list[Cell], capacity: float):
        order = [robot for _, robot in entries]
        self.positions = [pos for pos, _ in entries]
        self.model = LoopCostModel(loop, g, [depots[r] for r in order], capacity)
        self.length = len(loop)
        self.capacity = capacity
        k = len(entries)
        self.arc_len = [(self.positions[(j + 1) % k] - self.positions[j]) % self.length
                        for j in range(k)]
        if k == 1:
            self.arc_len = [self.length]

    def robot_cost(self, j: int, t_behind: int, t_own: int) -> float:
        pos = self.positions[j]
        length = self.length
        d = self.model.depot_dist[j]
        fwd = self.arc_len[j] - t_own
        total = t_behind + fwd
        cost = 0.0
        if t_behind > 0:
            cost += d[(pos - 1) % length]                      # approach to behind-cell
            cost += self.model.coverage_cost((pos - t_behind) % length, t_behind)
            cost += d[(pos - t_behind) % length]               # travel back to depot
        cost += self.model.coverage_cost(pos, fwd)
        cost += d[(pos + fwd - 1) % length]                    # final return
        for off in _refill_offsets(total, self.capacity):
            serviced = off + 1
            if serviced <= t_behind:
                cell_pos = (pos - serviced) % length
            else:
                cell_pos = (pos + (serviced - t_behind) - 1) % length
            cost += 2.0 * d[cell_pos]
        return float(cost)


def mstc_bo(g: CoveringGraph, loop: CoverageLoop, depots: list[Cell],
            capacity: float = math.inf, max_passes: int = 8) -> PlanOutcome:
    """Backtracking-optimized baseline.

    Each arc's tail may be handed to the following robot, which services
    it walking backward from behind its own depot before covering its
    forward arc.  Splits are chosen by coordinate descent, accepting a
    split only when the maximum robot cost strictly decreases.
    """
    entries = _depot_arcs(loop, depots)
    k, length = len(entries), len(loop)
    costs = _BoCosts(g, loop, entries, depots, capacity)
    splits = [0] * k

    def all_costs(split_vec: list[int]) -> list[float]:
        return [costs.robot_cost(j, split_vec[(j - 1) % k], split_vec[j])
                for j in range(k)]

    if k > 1:
        current = all_costs(splits)
        for _ in range(max_passes):
            changed = False
            for j in range(k):
                nxt = (j + 1) % k
                best_t, best_max = splits[j], max(current)
                for t in range(costs.arc_len[j]):
                    if t == splits[j]:
                        continue
                    trial = list(splits)
                    trial[j] = t
                    cost_j = costs.robot_cost(j, trial[(j - 1) % k], trial[j])
                    cost_n = costs.robot_cost(nxt, trial[(nxt - 1) % k], trial[nxt])
                    trial_max = max(cost_j, cost_n,
                                    *(current[i] for i in range(k) if i not in (j, nxt)))
                    if trial_max < best_max - 1e-12:
                        best_t, best_max = t, trial_max
                if best_t != splits[j]:
                    splits[j] = best_t
                    current = all_costs(splits)
                    changed = True
            if not changed:
                break

    plans = []
    for j, (pos, robot) in enumerate(entries):
        t_behind = splits[(j - 1) % k] if k > 1 else 0
        fwd_size = costs.arc_len[j] - (splits[j] if k > 1 else 0)
        fwd = [loop.nodes[(pos + i) % length] for i in range(fwd_size)]
        runs = []
        if t_behind > 0:
            runs.append([loop.nodes[(pos - 1 - i) % length] for i in range(t_behind)])
        runs.append(fwd)
        plans.append(build_robot_plan(robot, depots[robot], runs, capacity, g))
    plans.sort(key=lambda p: p.robot)
    keys = [pos for pos, _ in entries]
    binding = [robot for _, robot in entries]
    pset = PartitionSet(keys=keys, loop_length=length,
                        weights=[p.weight for p in plans])
    return PlanOutcome(plans=plans, partition=pset, binding=binding, iterations=0)


def reduction_ratio(base: float, candidate: float) -> float:
    """Relative decrease of the maximum weight versus a baseline."""
    if base <= 0:
        raise BaselineError("baseline weight must be positive")
    return (base - candidate) / base


@dataclass
class ComparisonReport:
    robots: int
    capacity: float
    scene_id: str
    seed: int | None
    baseline: str
    max_weights: dict[str, float]

    @property
    def reduction_ratios(self) -> dict[str, float]:
        base = self.max_weights[self.baseline]
        return {name: reduction_ratio(base, w) for name, w in self.max_weights.items()
                if name != self.baseline}

    def to_json_dict(self) -> dict:
        return {
            "robots": self.robots,
            "capacity": "inf" if self.capacity == math.inf else int(self.capacity),
            "scene_id": self.scene_id,
            "seed": self.seed,
            "baseline": self.baseline,
            "max_weights": dict(sorted(self.max_weights.items())),
            "reduction_ratios": dict(sorted(self.reduction_ratios.items())),
        }


def format_comparison_table(reports: list[ComparisonReport]) -> str:
    """Aligned text table: one row per report, one column per algorithm."""
    if not reports:
        return "(no comparison rows)"
    algos = sorted({a for r in reports for a in r.max_weights})
    header = ["k", "c"] + [f"W[{a}]" for a in algos] + \
             [f"ratio[{a}]" for a in algos if a != reports[0].baseline]
    rows = [header]
    for r in reports:
        cap = "inf" if r.capacity == math.inf else str(int(r.capacity))
        row = [str(r.robots), cap]
        row += [f"{r.max_weights.get(a, float('nan')):.3f}" for a in algos]
        ratios = r.reduction_ratios
        row += [f"{ratios[a]:+.3f}" for a in algos if a != r.baseline]
        rows.append(row)
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    return "\n".join(lines)
