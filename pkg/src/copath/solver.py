"""External SMT backend driver.

Any process that reads SMT-LIB 2 on stdin and answers on stdout can act as
the backend; the bundled ``copath.refsolver`` is the default. Maximisation
runs either natively (``(maximize obj)``) or, for backends without the
optimization extension, by binary-searching objective bound assertions
between a feasible value and the instance's arithmetic upper bound.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
from dataclasses import dataclass, field

from .encoding import (
    STRATEGY_NATIVE,
    STRATEGY_SATISFACTION,
    SmtArtifact,
    encode_equivalence,
    encode_full,
    smt_int,
)
from .model import Infeasible, Instance, Solution, audit_solution, require_valid
from .refsolver import parse_all
from .scoring import evaluate_objective, objective_bounds

BACKEND_ENV = "COPATH_BACKEND"

VERDICTS = ("sat", "unsat", "unknown", "timeout", "backend_error")


class BackendError(RuntimeError):
    """The backend crashed, spoke garbage, or answered unknown."""

    def __init__(self, message: str, transcript: str = ""):
        super().__init__(message)
        self.transcript = transcript


class SolveTimeout(RuntimeError):
    pass


class ModelMismatch(RuntimeError):
    """The model the backend returned does not reproduce its own objective."""


@dataclass(frozen=True)
class BackendConfig:
    command: tuple[str, ...]
    timeout: float = 60.0
    supports_maximize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "command", tuple(self.command))
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


def default_backend(timeout: float = 60.0, supports_maximize: bool = True) -> BackendConfig:
    """COPATH_BACKEND from the environment, or the bundled reference solver."""
    env = os.environ.get(BACKEND_ENV)
    if env:
        return BackendConfig(tuple(shlex.split(env)), timeout, supports_maximize)
    return BackendConfig((sys.executable, "-m", "copath.refsolver"),
                         timeout, supports_maximize)


@dataclass(frozen=True)
class SolveOutcome:
    verdict: str
    values: dict[str, bool | int] = field(default_factory=dict)
    raw_transcript: str = ""


def _parse_value(sexp) -> bool | int | None:
    if sexp == "true":
        return True
    if sexp == "false":
        return False
    if isinstance(sexp, str):
        try:
            return int(sexp)
        except ValueError:
            return None
    if (isinstance(sexp, tuple) and len(sexp) == 2 and sexp[0] == "-"
            and isinstance(sexp[1], str) and sexp[1].isdigit()):
        return -int(sexp[1])
    return None


def parse_transcript(text: str) -> tuple[str | None, dict[str, bool | int]]:
    """First check-sat verdict plus every (name value) binding after it."""
    verdict = None
    values: dict[str, bool | int] = {}
    try:
        sexps = parse_all(text)
    except Exception:
        sexps = []
        for line in text.splitlines():
            line = line.strip()
            if line in ("sat", "unsat", "unknown"):
                sexps.append(line)
                break
    for sexp in sexps:
        if isinstance(sexp, str):
            if verdict is None and sexp in ("sat", "unsat", "unknown"):
                verdict = sexp
            continue
        if sexp and sexp[0] == "error":
            continue
        # get-value answers: ((name value) ...)
        for item in sexp:
            if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], str):
                value = _parse_value(item[1])
                if value is not None:
                    values[item[0]] = value
    return verdict, values


def run_artifact(config: BackendConfig, artifact: SmtArtifact | str) -> SolveOutcome:
    """One child process: write the artifact, read verdict and model values."""
    text = artifact.text if isinstance(artifact, SmtArtifact) else artifact
    try:
        proc = subprocess.run(
            list(config.command), input=text.encode("utf-8"),
            stdout=subprocess.PIPE, stderr=subprocess.PIPE,
            timeout=config.timeout)
    except subprocess.TimeoutExpired as err:
        partial = (err.stdout or b"").decode("utf-8", "replace")
        return SolveOutcome("timeout", {}, partial)
    except FileNotFoundError as err:
        return SolveOutcome("backend_error", {}, str(err))

    stdout = proc.stdout.decode("utf-8", "replace")
    stderr = proc.stderr.decode("utf-8", "replace")
    transcript = stdout if not stderr else stdout + "\n" + stderr
    verdict, values = parse_transcript(stdout)
    if verdict is None:
        return SolveOutcome("backend_error", {}, transcript)
    return SolveOutcome(verdict, values, transcript)


def extract_solution(instance: Instance, outcome: SolveOutcome,
                     var_map) -> Solution:
    """Turn a sat model into a Solution; recompute and cross-check the score."""
    if outcome.verdict != "sat":
        raise ValueError(f"cannot extract from a {outcome.verdict} outcome")
    resource_ids = instance.sorted_resource_ids()
    executed: set[str] = set()
    for name, entity in var_map.items():
        if entity.role == "node" and outcome.values.get(name) is True:
            executed.add(entity.node)

    clock: dict[str, int] = {}
    choice: dict[str, str] = {}
    for name, entity in var_map.items():
        if entity.node not in executed:
            continue
        if entity.role == "clock":
            clock[entity.node] = int(outcome.values[name])
        elif entity.role == "label":
            index = int(outcome.values[name])
            if not 0 <= index < len(resource_ids):
                raise ModelMismatch(
                    f"label index {index} of {entity.node} out of range")
            choice[entity.node] = resource_ids[index]

    breakdown = evaluate_objective(instance, executed, clock, choice)
    solver_objective = outcome.values.get("obj")
    if solver_objective is not None and breakdown.objective != solver_objective:
        raise ModelMismatch(
            f"recomputed objective {breakdown.objective} != solver {solver_objective}")
    return Solution(
        executed=frozenset(executed), clock=clock, choice=choice,
        objective=breakdown.objective,
        effectiveness_total=breakdown.effectiveness_total,
        interaction_total=breakdown.interaction_total,
        conflicts=breakdown.conflicts,
    )


def _require_verdict(outcome: SolveOutcome, wanted: tuple[str, ...]) -> None:
    if outcome.verdict == "timeout":
        raise SolveTimeout("backend timed out")
    if outcome.verdict not in wanted:
        raise BackendError(f"backend answered {outcome.verdict}",
                           outcome.raw_transcript)


def _with_bound(artifact: SmtArtifact, bound: int) -> str:
    """Inject an objective lower-bound assertion before the check-sat."""
    marker = "\n(check-sat)"
    extra = f"\n(assert (>= obj {smt_int(bound)}))"
    return artifact.text.replace(marker, extra + marker, 1)


def _checked(instance: Instance, solution: Solution) -> Solution:
    issues = audit_solution(instance, solution)
    if issues:
        raise ModelMismatch("solution violates the output contract: "
                            + "; ".join(issues))
    return solution


def solve_maximize(config: BackendConfig, instance: Instance,
                   strategy: str | None = None) -> Solution:
    """Optimal solution via the backend; native or iterative maximisation."""
    require_valid(instance)
    if strategy is None:
        strategy = "native" if config.supports_maximize else "iterative"
    if strategy not in ("native", "iterative"):
        raise ValueError(f"unknown strategy {strategy}")

    if strategy == "native":
        if not config.supports_maximize:
            raise ValueError("backend does not support native maximisation")
        artifact = encode_full(instance, STRATEGY_NATIVE)
        outcome = run_artifact(config, artifact)
        if outcome.verdict == "unsat":
            raise Infeasible("base encoding unsat")
        _require_verdict(outcome, ("sat",))
        return _checked(instance, extract_solution(instance, outcome, artifact.var_map))

    artifact = encode_full(instance, STRATEGY_SATISFACTION)
    outcome = run_artifact(config, artifact)
    if outcome.verdict == "unsat":
        raise Infeasible("base encoding unsat")
    _require_verdict(outcome, ("sat",))
    best_outcome = outcome
    best = int(outcome.values["obj"])
    _, upper = objective_bounds(instance)

    lo, hi = best + 1, upper
    while lo <= hi:
        mid = (lo + hi + 1) // 2
        probe = run_artifact(config, _with_bound(artifact, mid))
        if probe.verdict == "sat":
            best_outcome = probe
            best = int(probe.values["obj"])
            lo = best + 1
        elif probe.verdict == "unsat":
            hi = mid - 1
        else:
            _require_verdict(probe, ())
    return _checked(instance,
                    extract_solution(instance, best_outcome, artifact.var_map))


@dataclass(frozen=True)
class EquivalenceOutcome:
    status: str  # equivalent | counterexample | inconclusive
    selection: dict[str, bool] | None = None


def check_equivalence(config: BackendConfig, graphs, *,
                      drop_orphan_rule: bool = False) -> EquivalenceOutcome:
    """unsat means the two path encodings agree on every selection."""
    artifact = encode_equivalence(tuple(graphs), drop_orphan_rule=drop_orphan_rule)
    outcome = run_artifact(config, artifact)
    if outcome.verdict == "unsat":
        return EquivalenceOutcome("equivalent")
    if outcome.verdict == "sat":
        selection = {
            entity.node: bool(outcome.values.get(name, False))
            for name, entity in artifact.var_map.items()
            if entity.role == "selector"
        }
        return EquivalenceOutcome("counterexample", selection)
    if outcome.verdict in ("unknown", "timeout"):
        return EquivalenceOutcome("inconclusive")
    raise BackendError(f"backend answered {outcome.verdict}",
                       outcome.raw_transcript)
