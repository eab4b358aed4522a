"""Shared fixtures and instance builders for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from mrcpp.pipeline import ScenePlanner
from mrcpp.scene import Scene
from mrcpp.scenegen import generate_scene


def flat_scene(width: int, height: int, depots, blocked_cells=()) -> Scene:
    """Flat (zero-slope) scene with the given blocked cells."""
    blocked = np.zeros((height, width), dtype=bool)
    for (x, y) in blocked_cells:
        blocked[y, x] = True
    return Scene(width=width, height=height, depots=list(depots), blocked=blocked)


def ramp_scene(width: int, height: int, depots, slope_per_cell: float = 0.2) -> Scene:
    """Elevation increasing along x: gentle uniform slope."""
    elev = np.tile(np.arange(width, dtype=float) * slope_per_cell, (height, 1))
    return Scene(width=width, height=height, depots=list(depots), elevation=elev)


def loop_instance(seed: int, k: int, width: int = 14, height: int = 14) -> ScenePlanner:
    """Weighted scene whose k depots sit on consecutive loop cells.

    Mirrors the lower-left clustered depot layout of the grid-map
    experiments: the depots occupy the first k cells of the coverage
    loop, which keeps the depot-keyed baselines maximally lopsided.
    """
    probe = generate_scene("random", seed=seed, width=width, height=height,
                           robots=1, depot_style="clustered")
    loop = ScenePlanner(probe).loop
    scene = Scene(width=probe.width, height=probe.height, cell_size=probe.cell_size,
                  elevation=probe.elevation, blocked=probe.blocked,
                  landclass=probe.landclass, depots=list(loop.nodes[:k]))
    return ScenePlanner(scene)


def tiny_loop_instances(count: int, max_nodes: int = 16, min_nodes: int = 8):
    """Planner instances with small loops, alternating k between 2 and 3."""
    out = []
    seed = 0
    while len(out) < count and seed < 100 * count:
        seed += 1
        k = 2 if len(out) % 2 == 0 else 3
        try:
            planner = loop_instance(seed, k, width=4, height=4)
        except Exception:
            continue
        if min_nodes <= len(planner.loop) <= max_nodes:
            out.append((planner, k))
    assert len(out) == count, f"only built {len(out)} tiny instances"
    return out


@pytest.fixture(scope="session")
def small_planner() -> ScenePlanner:
    """Fully free flat 4x4 scene: 4 blocks, a 16-node loop."""
    return ScenePlanner(flat_scene(4, 4, depots=[(0, 0)]))
