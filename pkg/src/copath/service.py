"""HTTP/JSON facade for the web UI and other clients.

Sessions are in-memory; each holds one instance, the latest solution as the
baseline, and the applied what-if history. Solves block up to the backend
timeout, with at most one in flight per session (409 on overlap). Errors
are ``{"code", "message", "details"}`` JSON bodies.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse

from .dataio import (
    ParseError,
    ValidationError,
    instance_from_dict,
    instance_to_dict,
    load_csv,
    solution_records,
    solution_to_dict,
)
from .model import Infeasible, Instance, Solution, audit_solution
from .solver import (
    BackendConfig,
    BackendError,
    ModelMismatch,
    SolveTimeout,
    default_backend,
    solve_maximize,
)
from .whatif import (
    InfeasibleDelta,
    UnknownEntity,
    WhatIfDelta,
    apply_delta,
    delta_from_dict,
    delta_to_dict,
    diff_solutions,
    diff_to_dict,
)


@dataclass
class Session:
    id: str
    instance: Instance
    baseline: Solution | None = None
    history: list[tuple[WhatIfDelta, Solution]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _error(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(status_code=status, content={
        "code": code, "message": message, "details": details})


def _render_instance(instance: Instance) -> dict:
    """Graph document sized for client-side rendering."""
    resources = instance.resource_map()
    specs = instance.node_map()
    return {
        "combiner": instance_to_dict(instance)["combiner"],
        "graphs": [
            {
                "id": g.id,
                "start_time": g.start_time,
                "nodes": [
                    {
                        "id": n,
                        "label": specs[n].label or n,
                        "options": [
                            {"id": rid,
                             "name": resources[rid].name or rid,
                             "effectiveness": resources[rid].effectiveness,
                             "amount": resources[rid].amount}
                            for rid in specs[n].options
                        ],
                    }
                    for n in g.nodes
                ],
                "edges": [
                    {"from": e.src, "to": e.dst, "t_min": e.t_min, "t_max": e.t_max}
                    for e in g.edges
                ],
            }
            for g in instance.graphs
        ],
    }


def _solution_payload(instance: Instance, solution: Solution) -> dict:
    doc = solution_to_dict(solution)
    doc["records"] = solution_records(instance, solution)
    return doc


def create_app(backend: BackendConfig | None = None,
               snapshot_dir: str | None = None, debug_checks: bool = True) -> FastAPI:
    base_backend = backend or default_backend()
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def snapshot_sessions() -> None:
        if not snapshot_dir:
            return
        out = Path(snapshot_dir)
        out.mkdir(parents=True, exist_ok=True)
        doc = {
            sid: {
                "instance": instance_to_dict(s.instance),
                "baseline": solution_to_dict(s.baseline) if s.baseline else None,
                "history": [
                    {"delta": delta_to_dict(d), "objective": sol.objective}
                    for d, sol in s.history
                ],
            }
            for sid, s in sessions.items()
        }
        (out / "sessions.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        snapshot_sessions()

    app = FastAPI(title="copath", docs_url=None, redoc_url=None, lifespan=lifespan)
    # the console may be opened from file:// or another port
    from fastapi.middleware.cors import CORSMiddleware
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def session_or_none(session_id: str) -> Session | None:
        with registry_lock:
            return sessions.get(session_id)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/api/sessions")
    async def create_session(request: Request):
        raw = await request.body()
        if not raw:
            return _error(400, "empty-body", "request body is required")
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as err:
            return _error(400, "malformed-json", str(err))
        try:
            if isinstance(doc, dict) and "csv" in doc:
                import tempfile
                with tempfile.TemporaryDirectory() as tmp:
                    for name, text in doc["csv"].items():
                        if "/" in name or "\\" in name:
                            return _error(400, "bad-csv-name", name)
                        Path(tmp, name).write_text(str(text), encoding="utf-8")
                    instance = load_csv(tmp)
            else:
                instance = instance_from_dict(doc)
        except ValidationError as err:
            return _error(422, "invalid-instance", "instance failed validation",
                          [str(v) for v in err.report.violations])
        except ParseError as err:
            return _error(400, "parse-error", str(err))
        session = Session(id=uuid.uuid4().hex, instance=instance)
        with registry_lock:
            sessions[session.id] = session
        return JSONResponse(status_code=201, content={"session_id": session.id})

    @app.get("/api/sessions/{session_id}")
    def get_state(session_id: str):
        session = session_or_none(session_id)
        if session is None:
            return _error(404, "unknown-session", session_id)
        return {
            "session_id": session.id,
            "instance": _render_instance(session.instance),
            "baseline": (_solution_payload(session.instance, session.baseline)
                         if session.baseline else None),
            "history": [
                {"delta": delta_to_dict(delta), "objective": solution.objective}
                for delta, solution in session.history
            ],
        }

    def _run_solve(session: Session, instance: Instance, options: dict):
        timeout = options.get("timeout")
        config = base_backend
        if timeout is not None:
            config = BackendConfig(base_backend.command, float(timeout),
                                   base_backend.supports_maximize)
        strategy = options.get("strategy")
        solution = solve_maximize(config, instance, strategy)
        if debug_checks:
            issues = audit_solution(instance, solution)
            if issues:
                raise ModelMismatch("; ".join(issues))
        return solution

    @app.post("/api/sessions/{session_id}/solve")
    def solve_session(session_id: str, options: dict = Body(default={})):
        session = session_or_none(session_id)
        if session is None:
            return _error(404, "unknown-session", session_id)
        if not session.lock.acquire(blocking=False):
            return _error(409, "solve-in-flight", "another solve is running")
        try:
            solution = _run_solve(session, session.instance, options or {})
            session.baseline = solution
            session.history.clear()  # a fresh baseline invalidates old diffs
            return _solution_payload(session.instance, solution)
        except SolveTimeout:
            return _error(504, "solver-timeout", "backend timed out")
        except Infeasible as err:
            return _error(422, "infeasible", str(err))
        except (BackendError, ModelMismatch) as err:
            return _error(502, "backend-error", str(err))
        finally:
            session.lock.release()

    @app.post("/api/sessions/{session_id}/whatif")
    def whatif_session(session_id: str, doc: dict = Body(default={})):
        session = session_or_none(session_id)
        if session is None:
            return _error(404, "unknown-session", session_id)
        if session.baseline is None:
            return _error(409, "no-baseline", "solve the session first")
        if not session.lock.acquire(blocking=False):
            return _error(409, "solve-in-flight", "another solve is running")
        try:
            try:
                delta = delta_from_dict(doc or {})
                derived = apply_delta(session.instance, delta)
            except (InfeasibleDelta, UnknownEntity, ValueError) as err:
                return _error(422, "infeasible-delta", str(err))
            options = (doc or {}).get("options", {})
            solution = _run_solve(session, derived, options)
            diff = diff_solutions(session.instance, session.baseline, solution)
            session.history.append((delta, solution))
            session.baseline = solution
            return {
                "solution": _solution_payload(derived, solution),
                "diff": diff_to_dict(diff),
            }
        except SolveTimeout:
            return _error(504, "solver-timeout", "backend timed out")
        except Infeasible as err:
            return _error(422, "infeasible", str(err))
        except (BackendError, ModelMismatch) as err:
            return _error(502, "backend-error", str(err))
        finally:
            session.lock.release()

    return app
