"""Session persistence.

Two files per session under a store directory:

- ``<id>.log`` — append-only write-ahead log, one spin per line in the form
  ``index,timestamp,outcome`` under a ``# lastn-spin-log v1`` header.  The
  log is the source of truth; it is flushed to disk on every spin so a crash
  never loses table data.  Timestamps are informational; replay ignores them.
- ``<id>.json`` — versioned snapshot of the derived state, rewritten
  atomically after each spin.  Loading rebuilds the session by replaying the
  log and uses the snapshot only for the configuration and as a consistency
  check (the snapshot may lag the log by one spin after a crash, never lead it).
"""

from __future__ import annotations

import json
import os
import re
import uuid
from datetime import datetime, timezone
from pathlib import Path

from .analytics import StrategyConfig
from .session import Session, replay
from .wheel import WheelSpec

__all__ = [
    "LOG_HEADER",
    "SNAPSHOT_VERSION",
    "SessionStore",
    "StoreError",
    "read_log",
    "write_log",
]

LOG_HEADER = "# lastn-spin-log v1"
SNAPSHOT_VERSION = 1
_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class StoreError(ValueError):
    """Corrupt or malformed session files; messages carry file:line."""


def _parse_outcome(token: str) -> int:
    token = token.strip()
    if token == "00":
        return 37  # double-zero pocket of the American wheel
    if not token.isdigit():
        raise ValueError(f"outcome {token!r} is not a wheel number")
    return int(token)


def read_log(path: str | Path) -> list[int]:
    """Parse a spin log, validating the header and the index sequence."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != LOG_HEADER:
        raise StoreError(f"{path}:1: missing log header {LOG_HEADER!r}")
    outcomes: list[int] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise StoreError(f"{path}:{lineno}: expected 'index,timestamp,outcome', got {line!r}")
        try:
            index = int(parts[0])
            outcome = _parse_outcome(parts[2])
        except ValueError as exc:
            raise StoreError(f"{path}:{lineno}: {exc}") from None
        if index != len(outcomes):
            raise StoreError(
                f"{path}:{lineno}: spin index {index} out of order (expected {len(outcomes)})"
            )
        outcomes.append(outcome)
    return outcomes


def write_log(path: str | Path, outcomes: list[int]) -> None:
    """Write a complete log in one pass (for exports and test fixtures)."""
    stamp = _now()
    lines = [LOG_HEADER]
    lines += [f"{i},{stamp},{outcome}" for i, outcome in enumerate(outcomes)]
    Path(path).write_text("\n".join(lines) + "\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class SessionStore:
    """Directory of persisted sessions."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def log_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.log"

    def snapshot_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.log"))

    def exists(self, session_id: str) -> bool:
        return self.log_path(session_id).is_file()

    def create(
        self, config: StrategyConfig, bankroll: int, session_id: str | None = None
    ) -> tuple[str, Session]:
        if session_id is None:
            session_id = uuid.uuid4().hex[:12]
        if not _ID_RE.match(session_id):
            raise StoreError(f"session id {session_id!r} is not a safe file stem")
        if self.exists(session_id):
            raise StoreError(f"session {session_id!r} already exists")
        session = Session(config, bankroll)
        self.log_path(session_id).write_text(LOG_HEADER + "\n")
        self._write_snapshot(session_id, session)
        return session_id, session

    def record_spin(self, session_id: str, session: Session, outcome: int) -> None:
        """Persist one spin the engine has already applied (log first, then
        snapshot, so the log never trails the snapshot)."""
        index = len(session.spins) - 1
        with self.log_path(session_id).open("a") as fh:
            fh.write(f"{index},{_now()},{session.spins[-1]}\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._write_snapshot(session_id, session)

    def load(self, session_id: str) -> Session:
        """Rebuild a session by replaying its log."""
        snap_path = self.snapshot_path(session_id)
        log_path = self.log_path(session_id)
        if not snap_path.is_file() or not log_path.is_file():
            raise StoreError(f"unknown session {session_id!r} in store {self.root}")
        try:
            snap = json.loads(snap_path.read_text())
        except json.JSONDecodeError as exc:
            raise StoreError(f"{snap_path}:{exc.lineno}: invalid snapshot JSON: {exc.msg}") from None
        if snap.get("version") != SNAPSHOT_VERSION:
            raise StoreError(f"{snap_path}:1: unsupported snapshot version {snap.get('version')!r}")
        cfg = snap["config"]
        config = StrategyConfig(
            window=int(cfg["window"]),
            wheel=WheelSpec(pockets=int(cfg["pockets"]), payout=int(cfg["payout"])),
            bet_unit=int(cfg["bet_unit"]),
        )
        outcomes = read_log(log_path)
        session = replay(outcomes, config, int(snap["initial_bankroll"]))
        if len(outcomes) < int(snap["spins"]):
            raise StoreError(
                f"{log_path}:1: log has {len(outcomes)} spins but the snapshot "
                f"claims {snap['spins']}; log must never trail the snapshot"
            )
        if len(outcomes) == int(snap["spins"]) and session.bankroll != int(snap["bankroll"]):
            raise StoreError(
                f"{snap_path}:1: snapshot bankroll {snap['bankroll']} does not match "
                f"the replayed log ({session.bankroll})"
            )
        return session

    def _write_snapshot(self, session_id: str, session: Session) -> None:
        snap = session.to_snapshot()
        payload = {
            "version": SNAPSHOT_VERSION,
            "session_id": session_id,
            "config": snap["config"],
            "initial_bankroll": snap["initial_bankroll"],
            "bankroll": snap["bankroll"],
            "spins": len(session.spins),
            "phase": snap["phase"],
        }
        tmp = self.snapshot_path(session_id).with_suffix(".json.tmp")
        tmp.write_text(json.dumps(payload, indent=2) + "\n")
        os.replace(tmp, self.snapshot_path(session_id))
