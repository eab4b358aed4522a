#!/usr/bin/env python3
# Partition one coverage loop among 8 robots with every strategy and
# compare the resulting worst-robot costs.
from pathlib import Path

from mrcpp import ScenePlanner, generate_scene, plan_document, render_plan_svg
from mrcpp.baselines import ComparisonReport, format_comparison_table

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# weighted 10x10 terrain with random blocked cells and 8 scattered depots
scene = generate_scene("random", seed=8)
planner = ScenePlanner(scene)
print(f"scene 10x10, depots {scene.depots}")
print(f"loop: {len(planner.loop)} cells, coverage ratio "
      f"{planner.coverage['ratio']:.2f}")

weights = {}
for algo in ("mstc-nb", "mstc-bo", "naive", "balanced"):
    result = planner.plan(algo, 8)
    weights[algo] = result.max_weight
    per_robot = ", ".join(f"{p.weight:.2f}" for p in result.outcome.plans)
    print(f"{algo:>9}: max {result.max_weight:7.3f}   per-robot [{per_robot}]")
    doc = plan_document(result, scene, scene_id="partition-demo")
    (OUT / f"partition_{algo}.svg").write_text(render_plan_svg(scene, doc))

report = ComparisonReport(robots=8, capacity=float("inf"), scene_id="random-10x10",
                          seed=8, baseline="mstc-nb", max_weights=weights)
print()
print(format_comparison_table([report]))
print(f"\nSVGs in {OUT}")
