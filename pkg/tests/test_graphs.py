import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrcpp.graphs import (GraphError, PlannerConfig, build_covering_graph,
                          build_spanning_graph, edge_weight, shortest_path)
from mrcpp.scene import Scene
from mrcpp.terrain import build_traversability, steepness_filter

from conftest import flat_scene

SQRT2 = math.sqrt(2.0)
PAPER_CFG = PlannerConfig(alpha=1 / 3, beta=2 / 3)


def weighted_map(seed: int, width=8, height=8, block_p=0.1):
    rng = np.random.default_rng(seed)
    blocked = rng.random((height, width)) < block_p
    blocked[0, 0] = False
    elev = rng.normal(0.0, 0.15, (height, width)).cumsum(axis=1)
    scene = Scene(width=width, height=height, blocked=blocked, elevation=elev,
                  depots=[(0, 0)])
    return steepness_filter(scene, 25.0)


def test_edge_weight_pure_distance():
    cfg = PlannerConfig(alpha=1.0, beta=0.0)
    assert edge_weight(1.0, 0.0, (0.0, 25.0), cfg) == 1.0


def test_edge_weight_unit_edge_at_max_slope_is_one():
    assert edge_weight(1.0, 25.0, (0.0, 25.0), PAPER_CFG) == 1.0


def test_edge_weight_flat_unit_edge_is_one_third():
    assert edge_weight(1.0, 0.0, (0.0, 25.0), PAPER_CFG) == 1 / 3


def test_edge_weight_diagonal_midway_slope():
    got = edge_weight(SQRT2, 12.5, (0.0, 25.0), PAPER_CFG)
    assert got == pytest.approx(SQRT2 / 3 + 1 / 3)


def test_edge_weight_degenerate_bounds():
    assert edge_weight(1.0, 10.0, (10.0, 10.0), PAPER_CFG) == pytest.approx(1 / 3)


def test_edge_weight_rejects_out_of_bounds_slope():
    with pytest.raises(GraphError):
        edge_weight(1.0, 30.0, (0.0, 25.0), PAPER_CFG)


def test_covering_graph_flat_block_edges():
    tmap = build_traversability(flat_scene(2, 2, depots=[(0, 0)]), 25.0)
    g = build_covering_graph(tmap, PAPER_CFG, depots=[(0, 0)])
    orth = [w for (i, j), w in g.weights.items()
            if abs(g.cells[i][0] - g.cells[j][0]) + abs(g.cells[i][1] - g.cells[j][1]) == 1]
    diag = [w for (i, j), w in g.weights.items()
            if abs(g.cells[i][0] - g.cells[j][0]) == 1 and abs(g.cells[i][1] - g.cells[j][1]) == 1]
    assert len(orth) == 4 and len(diag) == 2
    assert all(w == pytest.approx(PAPER_CFG.alpha * 1.0) for w in orth)
    assert all(w == pytest.approx(PAPER_CFG.alpha * SQRT2) for w in diag)


def test_covering_graph_unweighted_mode_weights():
    cfg = PlannerConfig(alpha=1.0, beta=0.0)
    tmap = build_traversability(flat_scene(4, 4, depots=[(0, 0)]), 25.0)
    g = build_covering_graph(tmap, cfg, depots=[(0, 0)])
    assert set(round(w, 12) for w in g.weights.values()) == {1.0, round(SQRT2, 12)}


def test_covering_graph_weights_match_recomputation():
    tmap = weighted_map(3)
    g = build_covering_graph(tmap, PAPER_CFG)
    for (a, b), slope in tmap.edge_slopes.items():
        expected = edge_weight(1.0, slope, tmap.slope_bounds, PAPER_CFG)
        assert g.weight(a, b) == pytest.approx(expected)


def test_spanning_graph_full_4x4():
    tmap = build_traversability(flat_scene(4, 4, depots=[(0, 0)]), 25.0)
    h = build_spanning_graph(tmap, PAPER_CFG)
    assert len(h.blocks) == 4
    assert len(h.edges) == 4
    assert all(w == pytest.approx(PAPER_CFG.alpha * 2.0) for w in h.edges.values())


def test_spanning_graph_blocked_cell_kills_block():
    tmap = build_traversability(
        flat_scene(4, 4, depots=[(0, 0)], blocked_cells=[(2, 2)]), 25.0)
    h = build_spanning_graph(tmap, PAPER_CFG)
    assert (1, 1) not in h.adjacency
    assert len(h.blocks) == 3


def test_spanning_graph_matches_all_free_block_scan_on_flat_maps():
    for seed in range(8):
        rng = np.random.default_rng(seed)
        blocked = rng.random((10, 10)) < 0.2
        scene = Scene(width=10, height=10, blocked=blocked, depots=[])
        tmap = steepness_filter(scene, 25.0)
        h = build_spanning_graph(tmap, PAPER_CFG)
        expected = set()
        for by in range(5):
            for bx in range(5):
                cells = [(2 * bx + dx, 2 * by + dy) for dx in (0, 1) for dy in (0, 1)]
                if all(tmap.is_free(c) for c in cells):
                    expected.add((bx, by))
        assert set(h.blocks) == expected


def test_spanning_graph_excludes_internally_broken_blocks():
    # steep edge inside an otherwise free 2x2 block: no spanning node
    elev = np.zeros((2, 4))
    elev[:, 3:] = 10.0  # cliff between x=2 and x=3, inside block (1, 0)
    scene = Scene(width=4, height=2, depots=[(0, 0)], elevation=elev)
    tmap = steepness_filter(scene, 25.0)
    h = build_spanning_graph(tmap, PAPER_CFG)
    assert (0, 0) in h.adjacency and (1, 0) not in h.adjacency


def test_cover_map_is_total_and_unique():
    tmap = weighted_map(5)
    h = build_spanning_graph(tmap, PAPER_CFG)
    for block in h.blocks:
        for cell in h.block_cells(block):
            assert h.cover_map[cell] == block
    assert len(h.cover_map) == 4 * len(h.blocks)


def test_shortest_path_identity():
    tmap = build_traversability(flat_scene(4, 4, depots=[(0, 0)]), 25.0)
    g = build_covering_graph(tmap, PAPER_CFG)
    path, cost = shortest_path(g, (1, 1), (1, 1))
    assert path == [(1, 1)] and cost == 0.0


def test_shortest_path_corridor():
    cfg = PlannerConfig(alpha=1.0, beta=0.0)
    tmap = build_traversability(flat_scene(6, 1, depots=[(0, 0)]), 25.0)
    g = build_covering_graph(tmap, cfg)
    path, cost = shortest_path(g, (0, 0), (5, 0))
    assert cost == pytest.approx(5.0)
    assert path == [(x, 0) for x in range(6)]


def bellman_ford(g, source):
    dist = {i: math.inf for i in range(len(g.cells))}
    dist[g.index[source]] = 0.0
    for _ in range(len(g.cells) - 1):
        changed = False
        for (i, j), w in g.weights.items():
            if dist[i] + w < dist[j]:
                dist[j] = dist[i] + w
                changed = True
            if dist[j] + w < dist[i]:
                dist[i] = dist[j] + w
                changed = True
        if not changed:
            break
    return dist


def test_shortest_path_matches_bellman_ford():
    tmap = weighted_map(11)
    g = build_covering_graph(tmap, PAPER_CFG)
    source = g.cells[0]
    oracle = bellman_ford(g, source)
    rng = np.random.default_rng(0)
    for idx in rng.choice(len(g.cells), size=12, replace=False):
        target = g.cells[int(idx)]
        if math.isinf(oracle[g.index[target]]):
            continue
        _, cost = shortest_path(g, source, target)
        assert cost == pytest.approx(oracle[g.index[target]])


def test_scipy_distances_match_dijkstra():
    tmap = weighted_map(13)
    g = build_covering_graph(tmap, PAPER_CFG)
    source = g.cells[2]
    dist, _ = g.sssp(source)
    for target in g.cells[::7]:
        if math.isinf(dist[g.index[target]]):
            continue
        _, cost = shortest_path(g, source, target)
        assert cost == pytest.approx(float(dist[g.index[target]]))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 10.0))
def test_scaling_alpha_beta_preserves_paths(seed, lam):
    tmap = weighted_map(seed, width=6, height=6)
    if len(tmap.edge_slopes) < 8:
        return
    base = PlannerConfig(alpha=1 / 3, beta=2 / 3)
    scaled = PlannerConfig(alpha=lam / 3, beta=2 * lam / 3)
    g1 = build_covering_graph(tmap, base)
    g2 = build_covering_graph(tmap, scaled)
    for key, w in g1.weights.items():
        assert g2.weights[key] == pytest.approx(lam * w)
    cells = sorted(g1.index)
    a, b = cells[0], cells[-1]
    try:
        p1, c1 = shortest_path(g1, a, b)
        p2, c2 = shortest_path(g2, a, b)
    except GraphError:
        return
    assert p1 == p2
    assert c2 == pytest.approx(lam * c1)


def test_normalized_slope_in_unit_interval():
    for seed in range(6):
        tmap = weighted_map(seed)
        lo, hi = tmap.slope_bounds
        for slope in tmap.edge_slopes.values():
            normalized = 0.0 if hi <= lo else (slope - lo) / (hi - lo)
            assert 0.0 <= normalized <= 1.0


def test_triangle_inequality_sampled():
    tmap = weighted_map(17)
    g = build_covering_graph(tmap, PAPER_CFG)
    rng = np.random.default_rng(1)
    cells = g.cells
    for _ in range(20):
        a, b, c = (cells[int(i)] for i in rng.choice(len(cells), size=3))
        try:
            _, ab = shortest_path(g, a, b)
            _, bc = shortest_path(g, b, c)
            _, ac = shortest_path(g, a, c)
        except GraphError:
            continue
        assert ac <= ab + bc + 1e-9


def test_debug_dump_shape():
    tmap = build_traversability(flat_scene(2, 2, depots=[(0, 0)]), 25.0)
    g = build_covering_graph(tmap, PAPER_CFG)
    dump = g.debug_dump()
    assert len(dump["nodes"]) == 4
    assert len(dump["edges"]) == 6
    h = build_spanning_graph(tmap, PAPER_CFG)
    assert build_spanning_graph(tmap, PAPER_CFG).debug_dump() == h.debug_dump()
