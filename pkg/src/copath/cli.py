"""Command-line front door.

Machine-readable payloads go to stdout, diagnostics to stderr. Exit codes:
0 success, 1 domain failure (validation violations, infeasible delta,
budget exceeded, counterexample), 2 usage error, 3 backend failure.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path

from .dataio import (
    ParseError,
    ValidationError,
    export_dot,
    generate_synthetic,
    generator_spec_from_dict,
    load_instance,
    save_csv,
    save_json,
    solution_from_dict,
    solution_records,
    solution_to_dict,
)
from .encoding import (
    STRATEGY_NATIVE,
    STRATEGY_SATISFACTION,
    encode_efficient,
    encode_equivalence,
    encode_formal,
    encode_full,
)
from .model import Infeasible, InvalidGraph, InvalidInstance
from .oracle import BudgetExceeded, oracle_solve
from .solver import (
    BackendConfig,
    BackendError,
    ModelMismatch,
    SolveTimeout,
    check_equivalence,
    default_backend,
    solve_maximize,
)
from .whatif import (
    InfeasibleDelta,
    UnknownEntity,
    delta_from_dict,
    diff_to_dict,
    resolve,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_BACKEND = 3


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _backend_from_args(args) -> BackendConfig:
    timeout = getattr(args, "timeout", None) or 60.0
    if getattr(args, "backend", None):
        return BackendConfig(tuple(shlex.split(args.backend)), timeout=timeout)
    return default_backend(timeout=timeout)


def _table(rows: list[dict]) -> str:
    headers = ["node", "graph", "resource", "clock", "score", "conflicts", "conflict score"]
    table_rows = []
    for row in rows:
        if row["executed"]:
            partners = ",".join(c["partner"] for c in row["conflicts"]) or "-"
            conflict_score = sum(c["contribution"] for c in row["conflicts"])
            table_rows.append([row["node"], row["graph"], row["resource_name"],
                               str(row["clock"]), str(row["score"]), partners,
                               str(conflict_score) if row["conflicts"] else "-"])
        else:
            table_rows.append([row["node"], row["graph"], "N/A", "-", "-", "-", "-"])
    widths = [max(len(headers[i]), *(len(r[i]) for r in table_rows)) if table_rows
              else len(headers[i]) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for r in table_rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    return "\n".join(lines)


def _cmd_validate(args) -> int:
    try:
        load_instance(args.input)
    except ValidationError as err:
        for violation in err.report.violations:
            print(str(violation), file=sys.stderr)
        return EXIT_DOMAIN
    except ParseError as err:
        print(str(err), file=sys.stderr)
        return EXIT_DOMAIN
    _print_json({"ok": True, "violations": []})
    return EXIT_OK


def _cmd_encode(args) -> int:
    instance = load_instance(args.input)
    if args.kind == "full":
        strategy = STRATEGY_NATIVE if args.strategy == "native" else STRATEGY_SATISFACTION
        artifact = encode_full(instance, strategy)
    elif args.kind == "efficient":
        artifact = encode_efficient(instance.graphs)
    elif args.kind == "formal":
        artifact = encode_formal(instance.graphs)
    else:
        artifact = encode_equivalence(instance.graphs)
    sys.stdout.write(artifact.text)
    return EXIT_OK


def _cmd_solve(args) -> int:
    instance = load_instance(args.input)
    config = _backend_from_args(args)
    solution = solve_maximize(config, instance, args.strategy)
    if args.format == "dot":
        sys.stdout.write(export_dot(instance, solution))
    elif args.format == "table":
        print(_table(solution_records(instance, solution)))
        print(f"\nobjective: {solution.objective}  "
              f"effectiveness: {solution.effectiveness_total}  "
              f"interaction: {solution.interaction_total}")
    else:
        doc = solution_to_dict(solution)
        doc["records"] = solution_records(instance, solution)
        _print_json(doc)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    instance = load_instance(args.input)
    result = oracle_solve(instance, budget=args.budget)
    _print_json({"optimum": result.optimum,
                 "witness": solution_to_dict(result.witness),
                 "explored": result.explored})
    return EXIT_OK


def _cmd_equiv(args) -> int:
    instance = load_instance(args.input)
    config = _backend_from_args(args)
    outcome = check_equivalence(config, instance.graphs,
                                drop_orphan_rule=args.drop_orphan_rule)
    print(outcome.status)
    if outcome.status == "counterexample":
        _print_json({"selection": outcome.selection})
        return EXIT_DOMAIN
    if outcome.status == "inconclusive":
        return EXIT_BACKEND
    return EXIT_OK


def _cmd_whatif(args) -> int:
    instance = load_instance(args.input)
    delta = delta_from_dict(json.loads(Path(args.delta).read_text(encoding="utf-8")))
    baseline = None
    if args.baseline:
        baseline = solution_from_dict(
            json.loads(Path(args.baseline).read_text(encoding="utf-8")))
    config = _backend_from_args(args)
    solution, diff = resolve(config, instance, delta, baseline, args.strategy)
    _print_json({"solution": solution_to_dict(solution),
                 "diff": diff_to_dict(diff)})
    return EXIT_OK


def _cmd_generate(args) -> int:
    spec_doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    spec = generator_spec_from_dict(spec_doc)
    instance = generate_synthetic(spec)
    out = Path(args.out)
    save_csv(instance, out)
    (out / "instance.json").write_text(save_json(instance), encoding="utf-8")
    _print_json({
        "out": str(out),
        "graphs": len(instance.graphs),
        "nodes": len(instance.nodes),
        "resources": len(instance.resources),
        "interactions": len(instance.interactions.entries),
    })
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(backend=_backend_from_args(args),
                     snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copath",
        description="optimal low-conflict path selection across timed pathway graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_backend(p):
        p.add_argument("--backend", help="backend command line "
                       "(default: $COPATH_BACKEND or the bundled reference solver)")
        p.add_argument("--timeout", type=float, default=None,
                       help="backend timeout in seconds")

    p = sub.add_parser("validate", help="check an instance (JSON file or CSV directory)")
    p.add_argument("input")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("encode", help="write an SMT-LIB 2 artifact to stdout")
    p.add_argument("input")
    p.add_argument("--kind", choices=("full", "efficient", "formal", "equivalence"),
                   default="full")
    p.add_argument("--strategy", choices=("native", "iterative"), default="native")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("solve", help="maximise the global score")
    p.add_argument("input")
    common_backend(p)
    p.add_argument("--strategy", choices=("native", "iterative"), default=None)
    p.add_argument("--format", choices=("json", "dot", "table"), default="json")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive ground-truth optimum")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("equiv", help="check the two path encodings are equivalent")
    p.add_argument("input")
    common_backend(p)
    p.add_argument("--drop-orphan-rule", action="store_true",
                   help="mutation switch used by the test suite")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("whatif", help="re-solve under a modification delta")
    p.add_argument("input")
    p.add_argument("--delta", required=True, help="delta JSON file")
    p.add_argument("--baseline", help="baseline solution JSON file")
    common_backend(p)
    p.add_argument("--strategy", choices=("native", "iterative"), default=None)
    p.set_defaults(func=_cmd_whatif)

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--spec", required=True, help="generator spec JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("serve", help="run the HTTP service")
    common_backend(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--snapshot-dir", default=None,
                   help="write session snapshots here on shutdown")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValidationError, InvalidInstance) as err:
        print(f"invalid instance: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParseError, InvalidGraph, json.JSONDecodeError) as err:
        print(f"bad input: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InfeasibleDelta, UnknownEntity, BudgetExceeded, Infeasible) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as err:
        print(f"missing file: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SolveTimeout, BackendError, ModelMismatch) as err:
        print(f"backend failure: {err}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
