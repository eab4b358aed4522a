#!/usr/bin/env python3
# Large-scale run: a 256x256 synthetic field terrain, fleet sizes 4..16,
# workload capacity 400 cells per load.
import time

from mrcpp import ScenePlanner, generate_scene

t0 = time.perf_counter()
scene = generate_scene("field", seed=3)
planner = ScenePlanner(scene)
print(f"field terrain {scene.width}x{scene.height}: "
      f"{len(planner.spanning)} blocks, loop of {len(planner.loop)} cells, "
      f"coverage {planner.coverage['ratio']:.3f} "
      f"({time.perf_counter() - t0:.1f}s to build)")

print(f"{'k':>3} {'max cost':>12} {'total cost':>12} {'loads':>6} {'time':>6}")
for k in (4, 8, 12, 16):
    tk = time.perf_counter()
    result = planner.plan("balanced", k, 400.0)
    loads = sum(p.trips for p in result.outcome.plans)
    print(f"{k:>3} {result.max_weight:>12.1f} {result.total_weight:>12.1f} "
          f"{loads:>6} {time.perf_counter() - tk:>5.1f}s")

print(f"\ntotal {time.perf_counter() - t0:.1f}s")
