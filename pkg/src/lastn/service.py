"""HTTP service for live sessions and on-demand simulation.

JSON request/response only; every error body is ``{"error": {"code", "message"}}``
with a machine-readable code (400 invalid input, 404 unknown session, 409
sequence conflict).  Spin posts carry the client's sequence number and apply
only when it equals the session's spin count, so a retried or duplicated post
can never double-apply.  Per-session writes are serialized behind a lock and
persisted through the write-ahead store before the response is sent.

Simulation requests run stream by stream on a small worker pool; between
streams the handler checks whether the client is still connected and aborts
the remaining work if not.  The stream partition and merge are the ones the
library estimator uses, so a completed response is bit-identical to calling
it directly.
"""

from __future__ import annotations

import asyncio
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import __version__
from .analytics import (
    StrategyConfig,
    _check_window,
    _merge_trial_streams,
    _run_trial_stream,
    _stream_sizes,
)
from .errors import error_code
from .session import Session
from .store import SessionStore
from .wheel import AMERICAN, EUROPEAN, make_model

__all__ = ["DEFAULT_STORE_ENV", "MAX_SIM_TRIALS", "SCHEMA", "create_app"]

DEFAULT_STORE_ENV = "LASTN_STORE"
MAX_SIM_TRIALS = 20_000_000
WHEELS = {"european": EUROPEAN, "american": AMERICAN}

SCHEMA = {
    "version": 1,
    "service": {"name": "lastn", "version": __version__},
    "endpoints": {
        "POST /sessions": {
            "request": {"n": "int 1..64", "bankroll": "int >= 0 (minor units)",
                        "bet_unit": "int > 0, default 1", "wheel": "european|american"},
            "response": "session state",
        },
        "GET /sessions": {"response": {"sessions": "list of session ids"}},
        "GET /sessions/{id}": {"response": "session state"},
        "GET /sessions/{id}/log": {"response": "text spin log (versioned header)"},
        "POST /sessions/{id}/spins": {
            "request": {"outcome": "int pocket index", "sequence": "int, must equal state.sequence"},
            "response": "session state",
            "errors": {"400": "invalid-pocket", "404": "unknown-session", "409": "sequence-conflict"},
        },
        "GET /sessions/{id}/decision": {
            "response": {"omega": "float", "std_error": "float", "settled_spins": "int",
                         "spins_observed": "int", "verdict": "above-critical|below-critical|undecided",
                         "phase": "warmup|probing|confident|stopped"},
        },
        "POST /simulate": {
            "request": {"family": "uniform|gaussian|linear", "param": "float", "n": "int 1..64",
                        "trials": f"int 1..{MAX_SIM_TRIALS}", "seed": "int", "wheel": "european|american"},
            "response": {"omega": "float", "std_error": "float", "trials": "int",
                         "estimator": "independent-trials", "bunching": "float"},
        },
        "session state": {
            "id": "str", "config": "window/pockets/payout/bet_unit", "sequence": "int, next spin sequence",
            "spins": "int observed", "window": "list of trailing outcomes", "bankroll": "int",
            "initial_bankroll": "int", "phase": "str", "settled_spins": "int",
            "recommendation": {"bets": "sorted pocket list", "stake_per_bet": "int", "rationale": "str"},
        },
        "error body": {"error": {"code": "machine-readable string", "message": "human text"}},
    },
}


class SessionCreate(BaseModel):
    n: int
    bankroll: int
    bet_unit: int = 1
    wheel: Literal["european", "american"] = "european"


class SpinIn(BaseModel):
    outcome: int
    sequence: int


class SimulateIn(BaseModel):
    family: Literal["uniform", "gaussian", "linear"] = "uniform"
    param: float = 0.0
    n: int
    trials: int = 100_000
    seed: int = 0
    wheel: Literal["european", "american"] = "european"


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def _state_payload(sid: str, session: Session) -> dict:
    rec = session.recommendation
    cfg = session.config
    return {
        "id": sid,
        "config": {
            "n": cfg.window,
            "bet_unit": cfg.bet_unit,
            "wheel": next(name for name, w in WHEELS.items() if w == cfg.wheel),
        },
        "sequence": len(session.spins),
        "spins": len(session.spins),
        "window": list(session.window()),
        "bankroll": session.bankroll,
        "initial_bankroll": session.initial_bankroll,
        "phase": session.phase,
        "settled_spins": session.settled_spins,
        "recommendation": {
            "bets": list(rec.bets),
            "stake_per_bet": rec.stake_per_bet,
            "rationale": rec.rationale,
        },
    }


def create_app(store_path: str | None = None) -> FastAPI:
    """Build the service around a session store directory."""
    if store_path is None:
        store_path = os.environ.get(DEFAULT_STORE_ENV, "lastn-sessions")
    store = SessionStore(store_path)
    app = FastAPI(title="lastn", version=__version__, docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()
    sim_pool = ThreadPoolExecutor(max_workers=2)

    def _get(sid: str) -> tuple[Session | None, threading.Lock | None]:
        with registry_lock:
            if sid not in sessions:
                if not store.exists(sid):
                    return None, None
                sessions[sid] = store.load(sid)
                locks[sid] = threading.Lock()
            return sessions[sid], locks[sid]

    @app.exception_handler(RequestValidationError)
    async def _on_invalid(request: Request, exc: RequestValidationError):
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        return _error(400, "invalid-params", detail)

    @app.exception_handler(ValueError)
    async def _on_domain(request: Request, exc: ValueError):
        return _error(400, error_code(exc), str(exc))

    @app.get("/schema")
    def schema():
        return SCHEMA

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.list_ids()}

    @app.post("/sessions")
    def create_session(body: SessionCreate):
        config = StrategyConfig(window=body.n, wheel=WHEELS[body.wheel], bet_unit=body.bet_unit)
        sid, session = store.create(config, body.bankroll)
        with registry_lock:
            sessions[sid] = session
            locks[sid] = threading.Lock()
        return _state_payload(sid, session)

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        session, lock = _get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        with lock:
            return _state_payload(sid, session)

    @app.get("/sessions/{sid}/log")
    def get_log(sid: str):
        session, lock = _get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        with lock:
            return PlainTextResponse(store.log_path(sid).read_text())

    @app.post("/sessions/{sid}/spins")
    def post_spin(sid: str, body: SpinIn):
        session, lock = _get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        with lock:
            expected = len(session.spins)
            if body.sequence != expected:
                return _error(
                    409,
                    "sequence-conflict",
                    f"expected sequence {expected}, got {body.sequence}; state unchanged",
                )
            session.record_spin(body.outcome)
            store.record_spin(sid, session, body.outcome)
            return _state_payload(sid, session)

    @app.get("/sessions/{sid}/decision")
    def decision(sid: str):
        session, lock = _get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        with lock:
            report = session.decision_status()
        return {
            "omega": report.omega,
            "std_error": report.std_error,
            "settled_spins": report.settled_spins,
            "spins_observed": report.spins_observed,
            "verdict": report.verdict,
            "phase": report.phase,
        }

    @app.post("/simulate")
    async def simulate(body: SimulateIn, request: Request):
        if body.trials < 1:
            return _error(400, "invalid-params", f"trials must be >= 1, got {body.trials}")
        if body.trials > MAX_SIM_TRIALS:
            return _error(
                400, "trials-too-large",
                f"trials capped at {MAX_SIM_TRIALS} per request, got {body.trials}",
            )
        _check_window(body.n)
        model = make_model(body.family, body.param, WHEELS[body.wheel])
        loop = asyncio.get_running_loop()
        results = []
        for i, size in enumerate(_stream_sizes(body.trials)):
            if await request.is_disconnected():
                return Response(status_code=204)  # client gone; drop remaining work
            results.append(
                await loop.run_in_executor(
                    sim_pool, _run_trial_stream, model, body.n, size, body.seed, i
                )
            )
        est = _merge_trial_streams(results)
        return {
            "omega": est.omega,
            "std_error": est.std_error,
            "trials": est.trials,
            "estimator": est.estimator,
            "bunching": est.bunching,
            "family": body.family,
            "param": body.param,
            "n": body.n,
            "seed": body.seed,
        }

    return app
