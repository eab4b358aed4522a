"""Partitioning the coverage loop among k robots.

A partition is a set of k key positions on the loop; segment i runs from
key i up to (but excluding) key i+1, cyclically.  The cost of a segment
is the full robot cost: approach leg from the depot, the coverage hops,
a refill excursion to the depot after every ``capacity`` serviced cells,
and the final return leg.

The balanced optimizer starts from the naive equal-count partition and
repeatedly shifts key nodes between the currently heaviest and lightest
segments (binary search on the shift amount), accepting a placement only
when the maximum segment cost does not increase, so the maximum cost is
non-increasing across iterations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import CoveringGraph, PlannerConfig
from .scene import Cell
from .stc import CoverageLoop

REL_IMPROVEMENT_EPS = 1e-9


class PartitionError(ValueError):
    pass


@dataclass
class PartitionSet:
    """k key positions into the loop; segment i = [keys[i], keys[i+1])."""
    keys: list[int]
    loop_length: int
    weights: list[float] | None = None

    def __post_init__(self):
        if len(set(self.keys)) != len(self.keys):
            raise PartitionError("key positions must be distinct")
        if any(not 0 <= r < self.loop_length for r in self.keys):
            raise PartitionError("key positions outside the loop")

    def __len__(self) -> int:
        return len(self.keys)

    def sizes(self) -> list[int]:
        k, length = len(self.keys), self.loop_length
        if k == 1:
            return [length]
        return [(self.keys[(i + 1) % k] - self.keys[i]) % length for i in range(k)]

    def segment_nodes(self, loop: CoverageLoop, i: int) -> list[Cell]:
        start, size = self.keys[i], self.sizes()[i]
        return [loop.nodes[(start + j) % self.loop_length] for j in range(size)]


@dataclass
class RefillTrip:
    serviced_index: int        # 0-based position of the break cell in the serviced order
    break_cell: Cell
    outbound: list[Cell]       # break cell -> depot
    inbound: list[Cell]        # depot -> break cell
    cost: float


@dataclass
class RobotPlan:
    robot: int
    depot: Cell
    runs: list[list[Cell]]     # serviced cell runs, in execution order
    refills: list[RefillTrip]
    trips: int                 # loads consumed (r_i)
    weight: float              # full cost: legs + coverage + refills

    @property
    def segment(self) -> list[Cell]:
        return [c for run in self.runs for c in run]


@dataclass
class CapacityPlan:
    """Virtual sub-partition layout used under a finite capacity."""
    n: int
    sub_keys: list[int]
    sub_sizes: list[int]
    assignment: list[list[int]]  # per merged segment, the virtual indices merged


@dataclass
class PlanOutcome:
    plans: list[RobotPlan]
    partition: PartitionSet
    binding: list[int]           # segment index -> robot index
    iterations: int
    capacity_detail: CapacityPlan | None = None

    @property
    def max_weight(self) -> float:
        return max_weight(self.plans)

    @property
    def total_weight(self) -> float:
        return sum(p.weight for p in self.plans)


def max_weight(plans) -> float:
    plans = list(plans)
    if not plans:
        raise PartitionError("no plans")
    return max(p.weight for p in plans)


def _refill_offsets(size: int, capacity: float) -> list[int]:
    # break after every `capacity` serviced cells, unless the segment ends there
    if capacity == math.inf:
        return []
    c = int(capacity)
    return [j * c - 1 for j in range(1, (size + c - 1) // c) ]


def trips_required(size: int, capacity: float) -> int:
    if capacity == math.inf:
        return 1
    return (size + int(capacity) - 1) // int(capacity)


def build_robot_plan(robot: int, depot: Cell, runs: list[list[Cell]],
                     capacity: float, g: CoveringGraph) -> RobotPlan:
    """Assemble a robot plan and its exact cost by walking the serviced runs.

    Runs are serviced in order; consecutive runs are joined by shortest-path
    travel legs.  A refill excursion to the depot is inserted whenever the
    serviced count reaches a capacity multiple and cells remain.
    """
    runs = [list(r) for r in runs if r]
    if not runs:
        raise PartitionError("robot plan needs at least one serviced cell")
    total = sum(len(r) for r in runs)
    depot_dist, _ = g.sssp(depot)

    def from_depot(cell: Cell) -> float:
        return float(depot_dist[g.index[cell]])

    weight = from_depot(runs[0][0])
    refills: list[RefillTrip] = []
    serviced = 0
    prev_cell = None
    for run in runs:
        if prev_cell is not None:
            _, leg = _travel(g, prev_cell, run[0])
            weight += leg
        for i, cell in enumerate(run):
            if i > 0:
                weight += g.weight(run[i - 1], cell)
            serviced += 1
            if capacity != math.inf and serviced % int(capacity) == 0 and serviced < total:
                inbound = g.path(depot, cell)
                trip_cost = 2.0 * from_depot(cell)
                refills.append(RefillTrip(serviced_index=serviced - 1, break_cell=cell,
                                          outbound=list(reversed(inbound)),
                                          inbound=inbound, cost=trip_cost))
                weight += trip_cost
        prev_cell = run[-1]
    weight += from_depot(prev_cell)
    trips = trips_required(total, capacity)
    assert len(refills) == trips - 1
    return RobotPlan(robot=robot, depot=depot, runs=runs, refills=refills,
                     trips=trips, weight=weight)


def _travel(g: CoveringGraph, a: Cell, b: Cell) -> tuple[list[Cell], float]:
    dist, _ = g.sssp(a)
    return g.path(a, b), float(dist[g.index[b]])


def segment_cost(segment: list[Cell], depot: Cell, capacity: float,
                 g: CoveringGraph) -> float:
    """Full cost of covering one contiguous loop segment from a depot."""
    return build_robot_plan(0, depot, [segment], capacity, g).weight


class LoopCostModel:
    """O(1) segment costs over a fixed loop via prefix sums.

    With depots, a segment's cost includes approach/return legs and refill
    excursions against the greedily bound depot; without depots (the
    virtual-robot mode used under finite capacity) costs are coverage-only.
    """

    def __init__(self, loop: CoverageLoop, g: CoveringGraph | None = None,
                 depots: list[Cell] | None = None, capacity: float = math.inf):
        self.loop = loop
        self.length = len(loop)
        self.capacity = capacity
        hops = np.asarray(loop.edge_weights, dtype=np.float64)
        self.prefix = np.concatenate(([0.0], np.cumsum(np.concatenate((hops, hops)))))
        self.depots = list(depots) if depots else None
        if self.depots is not None:
            ids = np.array([g.index[c] for c in loop.nodes])
            self.depot_dist = [g.sssp(d)[0][ids] for d in self.depots]

    def coverage_cost(self, start: int, size: int) -> float:
        return float(self.prefix[start + size - 1] - self.prefix[start])

    def segment_cost_at(self, start: int, size: int, depot_idx: int) -> float:
        d = self.depot_dist[depot_idx]
        cost = d[start] + self.coverage_cost(start, size)
        cost += d[(start + size - 1) % self.length]
        for off in _refill_offsets(size, self.capacity):
            cost += 2.0 * d[(start + off) % self.length]
        return float(cost)

    def greedy_binding(self, starts: list[int]) -> list[int]:
        """Assign robots to segments greedily by cheapest approach leg."""
        k = len(starts)
        pairs = sorted(
            (float(self.depot_dist[r][s]), r, j)
            for r in range(k) for j, s in enumerate(starts)
        )
        binding = [-1] * k
        used_robots = set()
        for _, r, j in pairs:
            if r in used_robots or binding[j] >= 0:
                continue
            binding[j] = r
            used_robots.add(r)
        return binding

    def placement_costs(self, keys: list[int]) -> tuple[list[float], list[int] | None]:
        k, length = len(keys), self.length
        if k == 1:
            sizes = [length]
        else:
            sizes = [(keys[(i + 1) % k] - keys[i]) % length for i in range(k)]
        if self.depots is None:
            costs = [self.coverage_cost(keys[i], sizes[i]) for i in range(k)]
            return costs, None
        binding = self.greedy_binding(keys)
        costs = [self.segment_cost_at(keys[i], sizes[i], binding[i]) for i in range(k)]
        return costs, binding


def naive_partition(loop: CoverageLoop, k: int) -> PartitionSet:
    """Equal-count keys at floor(j * len / k) offsets from the loop start."""
    length = len(loop)
    if not 1 <= k <= length:
        raise PartitionError(f"cannot cut a {length}-node loop into {k} parts")
    keys = [j * length // k for j in range(k)]
    return PartitionSet(keys=keys, loop_length=length)


def _chain_directions(k: int, min_idx: int, max_idx: int):
    """Key chains for both loop directions, fewer-in-between first.

    Each entry is ``(moving_keys, sign)``: shifting every moving key by
    ``sign * t`` transfers t nodes out of the max segment through the
    in-between segments (node counts preserved) into the min segment.
    """
    fwd_between = (min_idx - max_idx - 1) % k
    bwd_between = (max_idx - min_idx - 1) % k
    forward = ([(max_idx + j) % k for j in range(1, fwd_between + 2)], -1)
    backward = ([(max_idx - j) % k for j in range(bwd_between + 1)], +1)
    if fwd_between <= bwd_between:
        return forward, backward
    return backward, forward


def _shift_bounds(sizes: list[int], min_idx: int, max_idx: int,
                  size_cap: int | None) -> tuple[int, int]:
    lo, hi = 1 - sizes[min_idx], sizes[max_idx] - 1
    if size_cap is not None:
        lo = max(lo, sizes[max_idx] - size_cap)
        hi = min(hi, size_cap - sizes[min_idx])
    return lo, hi


def balanced_cut(pset: PartitionSet, min_idx: int, max_idx: int,
                 model: LoopCostModel, size_cap: int | None = None) -> PartitionSet:
    """Shift key nodes between the lightest and heaviest segments.

    Binary search on the cumulative shift: nodes move out of the heaviest
    segment through the in-between chain into the lightest, in-between
    node counts unchanged.  Returns the probed placement with the
    smallest maximum segment cost, never worse than the input.
    """
    if min_idx == max_idx:
        raise PartitionError("min and max segments must differ")
    length = pset.loop_length
    base = list(pset.keys)
    sizes = pset.sizes()
    (moving, sign), _ = _chain_directions(len(base), min_idx, max_idx)
    lo, hi = _shift_bounds(sizes, min_idx, max_idx, size_cap)

    def probe(shift: int) -> tuple[list[int], list[float]]:
        shift = min(max(shift, lo), hi)
        keys = list(base)
        for idx in moving:
            keys[idx] = (base[idx] + sign * shift) % length
        costs, _ = model.placement_costs(keys)
        return keys, costs

    best_keys, best_costs = probe(0)
    best_max = max(best_costs)
    left, right = 0, sizes[min_idx] + sizes[max_idx]
    ref = (left + right) // 2   # probe shifts are midpoints relative to this
    while left < right:
        mid = (left + right) // 2
        keys, costs = probe(mid - ref)
        if max(costs) < best_max - 1e-15:
            best_keys, best_costs, best_max = keys, costs, max(costs)
        if costs[min_idx] < costs[max_idx]:
            left = mid + 1
        else:
            right = mid - 1
    return PartitionSet(keys=best_keys, loop_length=length, weights=best_costs)


class _EvalBudget:
    """Counts placement evaluations spent by the refinement phase."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, n: int = 1):
        self.used += n

    @property
    def ok(self) -> bool:
        return self.used < self.limit


def _greedy_pass(model: LoopCostModel, current: PartitionSet, max_iters: int,
                 size_cap: int | None,
                 budget: _EvalBudget | None = None) -> tuple[PartitionSet, int]:
    """The outer greedy loop: rebalance the heaviest/lightest pair until stuck."""
    iterations = 0
    while iterations < max_iters and len(current.keys) > 1:
        if budget is not None:
            if not budget.ok:
                break
            budget.charge(16)   # one binary-search cut ~ 16 placements
        weights = current.weights
        cur_max, cur_min = max(weights), min(weights)
        if cur_max - cur_min <= REL_IMPROVEMENT_EPS * max(cur_max, 1.0):
            break
        candidate = balanced_cut(current, weights.index(cur_min),
                                 weights.index(cur_max), model, size_cap)
        iterations += 1
        new_max = max(candidate.weights)
        if new_max <= cur_max:
            current = candidate
        if cur_max - new_max <= REL_IMPROVEMENT_EPS * max(cur_max, 1.0):
            break
    return current, iterations


def _scan_improvement(model: LoopCostModel, current: PartitionSet,
                      size_cap: int | None, budget: _EvalBudget
                      ) -> PartitionSet | None:
    """Exhaustive chain scan over segment pairs, largest cost gap first.

    Returns the best strictly improving placement found before the budget
    runs out, or None when the partition is pairwise optimal.
    """
    k = len(current.keys)
    length = current.loop_length
    base = list(current.keys)
    sizes = current.sizes()
    weights = current.weights
    cur_max = max(weights)
    order = sorted(((i, j) for i in range(k) for j in range(k) if i != j),
                   key=lambda p: (weights[p[0]] - weights[p[1]], p))
    best = None
    for mn, mx in order:
        for moving, sign in _chain_directions(k, mn, mx):
            lo, hi = _shift_bounds(sizes, mn, mx, size_cap)
            for t in range(lo, hi + 1):
                if t == 0:
                    continue
                if not budget.ok:
                    return best and PartitionSet(keys=best[1], loop_length=length,
                                                 weights=best[2])
                budget.charge()
                keys = list(base)
                for idx in moving:
                    keys[idx] = (base[idx] + sign * t) % length
                if len(set(keys)) != k:
                    continue
                costs, _ = model.placement_costs(keys)
                m = max(costs)
                if m < cur_max - 1e-12 and (best is None or m < best[0] - 1e-15):
                    best = (m, keys, costs)
        if best is not None:
            break
    if best is None:
        # whole-partition rotations (size-preserving) as a plateau escape
        for rot in range(1, length):
            if not budget.ok:
                break
            budget.charge()
            keys = [(p + rot) % length for p in base]
            costs, _ = model.placement_costs(keys)
            m = max(costs)
            if m < cur_max - 1e-12 and (best is None or m < best[0] - 1e-15):
                best = (m, keys, costs)
    if best is None:
        return None
    return PartitionSet(keys=best[1], loop_length=length, weights=best[2])


def _refine(model: LoopCostModel, current: PartitionSet, size_cap: int | None,
            budget: _EvalBudget) -> PartitionSet:
    while budget.ok and len(current.keys) > 1:
        improved = _scan_improvement(model, current, size_cap, budget)
        if improved is None:
            break
        current = improved
    return current


def optimize_partition(model: LoopCostModel, initial: PartitionSet,
                       max_iters: int, size_cap: int | None = None,
                       refine_budget: int | None = None
                       ) -> tuple[PartitionSet, int]:
    """Balance a partition: greedy binary-search cuts plus bounded refinement.

    After the primary greedy pass, the remaining evaluation budget is
    spent on exact pair scans and on restarting the greedy from rotations
    of the initial keys, keeping the best placement seen.  Small loops
    get an effectively exhaustive search; large ones a few targeted
    scans.  Deterministic throughout, and never worse than the primary
    greedy result.
    """
    k = len(initial.keys)
    length = initial.loop_length
    costs, _ = model.placement_costs(initial.keys)
    current = PartitionSet(keys=list(initial.keys), loop_length=length, weights=costs)
    if k == 1:
        return current, 0
    if refine_budget is None:
        refine_budget = max(2000, min(50_000, 400_000 // (k * max(1, length // 8))))
    budget = _EvalBudget(refine_budget)

    best, iterations = _greedy_pass(model, current, max_iters, size_cap)
    best = _refine(model, best, size_cap, budget)
    for rot in range(1, length):
        if not budget.ok:
            break
        keys = [(p + rot) % length for p in initial.keys]
        if len(set(keys)) != k:
            continue
        budget.charge(k)
        rc, _ = model.placement_costs(keys)
        cand = PartitionSet(keys=keys, loop_length=length, weights=rc)
        # polish-only restarts: the greedy pass would funnel most rotated
        # starts into the same basin, defeating the restart diversity
        cand = _refine(model, cand, size_cap, budget)
        if max(cand.weights) < max(best.weights) - 1e-15:
            best = cand
    return best, iterations


def _plans_from_partition(loop: CoverageLoop, pset: PartitionSet, binding: list[int],
                          depots: list[Cell], capacity: float,
                          g: CoveringGraph) -> list[RobotPlan]:
    plans = []
    for j in range(len(pset.keys)):
        robot = binding[j]
        nodes = pset.segment_nodes(loop, j)
        plans.append(build_robot_plan(robot, depots[robot], [nodes], capacity, g))
    plans.sort(key=lambda p: p.robot)
    return plans


def _fleet_depots(g: CoveringGraph, k: int) -> list[Cell]:
    if len(g.depot_nodes) < k:
        raise PartitionError(f"scene provides {len(g.depot_nodes)} depots, need {k}")
    return [g.cells[i] for i in g.depot_nodes[:k]]


def naive_mstc(g: CoveringGraph, loop: CoverageLoop, k: int,
               capacity: float = math.inf) -> PlanOutcome:
    """Equal-count partition with greedy depot binding; no rebalancing."""
    depots = _fleet_depots(g, k)
    model = LoopCostModel(loop, g, depots, capacity)
    pset = naive_partition(loop, k)
    costs, binding = model.placement_costs(pset.keys)
    pset.weights = costs
    plans = _plans_from_partition(loop, pset, binding, depots, capacity, g)
    return PlanOutcome(plans=plans, partition=pset, binding=binding, iterations=0)


def balanced_mstc(g: CoveringGraph, h, loop: CoverageLoop, k: int,
                  config: PlannerConfig | None = None,
                  max_iters: int | None = None,
                  capacity: float = math.inf,
                  size_cap: int | None = None) -> PlanOutcome:
    """Balanced min-max partition of the loop for k robots (one load each)."""
    depots = _fleet_depots(g, k)
    model = LoopCostModel(loop, g, depots, capacity)
    if max_iters is None:
        max_iters = 64 * k
    final, iterations = optimize_partition(model, naive_partition(loop, k),
                                           max_iters, size_cap)
    _, binding = model.placement_costs(final.keys)
    plans = _plans_from_partition(loop, final, binding, depots, capacity, g)
    return PlanOutcome(plans=plans, partition=final, binding=binding,
                       iterations=iterations)


def capacity_partition(g: CoveringGraph, loop: CoverageLoop, k: int,
                       capacity: float, config: PlannerConfig | None = None,
                       max_iters: int | None = None) -> PlanOutcome:
    """Balanced partition under a finite workload capacity.

    When one load per robot suffices this is the plain balanced partition
    (with segment sizes capped at the capacity).  Otherwise the loop is
    first balanced into n = sum(ceil(size_i / c)) virtual sub-partitions
    by coverage cost and runs of adjacent sub-partitions are merged, one
    merged segment per robot; refill excursions are inserted when plans
    are built.
    """
    if capacity != math.inf and capacity < 1:
        raise PartitionError("capacity must be >= 1")
    if capacity == math.inf:
        return balanced_mstc(g, None, loop, k, config, max_iters)
    c = int(capacity)
    length = len(loop)
    if c >= -(-length // k):
        return balanced_mstc(g, None, loop, k, config, max_iters,
                             capacity=capacity, size_cap=c)

    depots = _fleet_depots(g, k)
    naive_sizes = naive_partition(loop, k).sizes()
    n = sum(trips_required(s, c) for s in naive_sizes)
    virtual_model = LoopCostModel(loop, capacity=math.inf)
    if max_iters is None:
        max_iters = 64 * n
    virtual, iterations = optimize_partition(virtual_model, naive_partition(loop, n),
                                             max_iters, size_cap=c)

    counts = [n // k + (1 if i < n % k else 0) for i in range(k)]
    merged_keys, assignment = [], []
    offset = 0
    for count in counts:
        merged_keys.append(virtual.keys[offset])
        assignment.append(list(range(offset, offset + count)))
        offset += count
    merged = PartitionSet(keys=merged_keys, loop_length=length)
    # rebalance the merged segments under the full cost model so the
    # refill excursions (which dominate at small capacities) are part of
    # the objective, not just the coverage hops
    model = LoopCostModel(loop, g, depots, capacity)
    merged, more = optimize_partition(model, merged, max_iters=64 * k)
    iterations += more
    _, binding = model.placement_costs(merged.keys)
    plans = _plans_from_partition(loop, merged, binding, depots, capacity, g)
    detail = CapacityPlan(n=n, sub_keys=list(virtual.keys), sub_sizes=virtual.sizes(),
                          assignment=assignment)
    return PlanOutcome(plans=plans, partition=merged, binding=binding,
                       iterations=iterations, capacity_detail=detail)
