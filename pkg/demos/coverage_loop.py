#!/usr/bin/env python3
# Generate the single-robot coverage loop on a weighted grid and compare
# the minimum spanning tree against a weight-blind tree.
from pathlib import Path

import numpy as np

from mrcpp import (PlannerConfig, Scene, build_covering_graph,
                   build_spanning_graph, loop_weight, minimum_spanning_tree,
                   plan_document, render_plan_svg, spiral_stc_loop)
from mrcpp.pipeline import ScenePlanner
from mrcpp.stc import SpanningTree
from mrcpp.terrain import _canon, build_traversability

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

rng = np.random.default_rng(7)
elevation = rng.normal(0.0, 0.12, (10, 10)).cumsum(axis=1)
scene = Scene(width=10, height=10, depots=[(0, 0)], elevation=elevation)
config = PlannerConfig()  # alpha=1/3, beta=2/3, threshold 25deg

tmap = build_traversability(scene, config.slope_threshold)
g = build_covering_graph(tmap, config, depots=scene.depots)
h = build_spanning_graph(tmap, config)
print(f"covering graph: {len(g)} cells, {len(g.weights)} edges")
print(f"spanning graph: {len(h)} blocks, {len(h.edges)} edges")

mst = minimum_spanning_tree(h, h.cover_map[(0, 0)])
loop = spiral_stc_loop(g, mst, (0, 0))
print(f"loop visits {len(loop)} cells (= 4 x {len(mst)} blocks), "
      f"weight {loop_weight(loop):.2f}")


def first_neighbor_tree(h, root):
    """Depth-first tree that ignores edge weights."""
    parent, children, edges = {root: None}, {b: [] for b in h.blocks}, set()
    total, stack = 0.0, [root]
    while stack:
        node = stack.pop()
        for nbr in h.adjacency[node]:
            if nbr not in parent:
                parent[nbr] = node
                children[node].append(nbr)
                edges.add(_canon(node, nbr))
                total += h.weight(node, nbr)
                stack.append(nbr)
    return SpanningTree(root=root, parent=parent, children=children,
                        edges=edges, total_weight=total)


blind = first_neighbor_tree(h, h.cover_map[(0, 0)])
blind_loop = spiral_stc_loop(g, blind, (0, 0))
print(f"MST tree weight {mst.total_weight:.2f} vs weight-blind {blind.total_weight:.2f}")
print(f"MST loop weight {loop_weight(loop):.2f} vs weight-blind "
      f"{loop_weight(blind_loop):.2f}")

# render the single-robot plan
planner = ScenePlanner(scene, config)
result = planner.plan("balanced", 1)
doc = plan_document(result, scene, scene_id="loop-demo")
svg = OUT / "coverage_loop.svg"
svg.write_text(render_plan_svg(scene, doc))
print(f"wrote {svg}")
