#!/usr/bin/env python3
"""Sweep seeded random instances and cross-check the SMT route against the
exhaustive oracle, printing one line per instance.

    python3 scripts/agreement_sweep.py [--count N] [--strategy native|iterative]
"""

import argparse
import random
import sys
import time

from copath.dataio import GeneratorSpec, generate_synthetic
from copath.model import ThresholdCombiner
from copath.oracle import BudgetExceeded, oracle_solve
from copath.solver import default_backend, solve_maximize


def random_spec(seed: int) -> GeneratorSpec:
    rng = random.Random(seed * 7919 + 17)
    return GeneratorSpec(
        seed=seed,
        graph_count=rng.randint(1, 3),
        nodes_per_graph=rng.randint(1, 6),
        branching=rng.randint(1, 2),
        options_per_node=rng.randint(1, 3),
        resource_count=rng.randint(2, 6),
        interaction_density=rng.uniform(0.0, 0.3),
        severity_mix=(0.3, 0.5, 0.2),
        effectiveness_range=(-4, 8),
        amount_range=(5, 30),
        window_spread=rng.randint(0, 2),
        start_spread=rng.randint(0, 3),
        combiner=ThresholdCombiner(rng.randint(1, 8), 10),
    )


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=20)
    parser.add_argument("--strategy", choices=("native", "iterative"),
                        default="native")
    parser.add_argument("--budget", type=int, default=150_000)
    args = parser.parse_args()

    backend = default_backend(timeout=120.0)
    seed = 0
    checked = 0
    disagreements = 0
    while checked < args.count:
        spec = random_spec(seed)
        seed += 1
        instance = generate_synthetic(spec)
        try:
            truth = oracle_solve(instance, budget=args.budget)
        except BudgetExceeded:
            continue
        started = time.time()
        solution = solve_maximize(backend, instance, args.strategy)
        verdict = "ok" if solution.objective == truth.optimum else "DISAGREE"
        if verdict != "ok":
            disagreements += 1
        print(f"seed {spec.seed:4d}  oracle {truth.optimum:6d}  "
              f"smt {solution.objective:6d}  explored {truth.explored:7d}  "
              f"{time.time() - started:5.2f}s  {verdict}")
        checked += 1
    print(f"{checked} instances, {disagreements} disagreements")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
