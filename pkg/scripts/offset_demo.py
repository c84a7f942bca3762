#!/usr/bin/env python3
"""Walk the what-if offset scenario on the bundled TINY+ fixture: solve,
shift the second graph six units into the past, re-solve, print the diff.

    python3 scripts/offset_demo.py
"""

import sys
from pathlib import Path

from copath.dataio import load_json, solution_records
from copath.solver import default_backend, solve_maximize
from copath.whatif import WhatIfDelta, diff_to_dict, resolve

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "tiny_plus.json"


def show(instance, solution, title):
    print(f"--- {title}: objective {solution.objective} "
          f"(interaction {solution.interaction_total})")
    for row in solution_records(instance, solution):
        mark = f"{row['resource_name']} @ {row['clock']}" if row["executed"] else "N/A"
        print(f"  {row['graph']:>3} {row['node']:>3}  {mark}")


def main() -> int:
    instance = load_json(FIXTURE.read_text(encoding="utf-8"))
    backend = default_backend(timeout=120.0)
    baseline = solve_maximize(backend, instance, "native")
    show(instance, baseline, "baseline")

    delta = WhatIfDelta(start_overrides={"G2": -6})
    solution, diff = resolve(backend, instance, delta, baseline)
    show(instance, solution, "after shifting G2 to -6")
    print("--- diff")
    for graph_diff in diff_to_dict(diff)["graphs"]:
        if graph_diff["path_changed"] or graph_diff["clock_changes"]:
            print(f"  {graph_diff['graph']}: +{graph_diff['nodes_added']} "
                  f"-{graph_diff['nodes_dropped']} "
                  f"clocks {graph_diff['clock_changes']}")
    print(f"objective delta: {diff.objective_delta}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
