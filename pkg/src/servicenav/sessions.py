"""Multi-turn conversation memory and follow-up resolution.

Sessions keep the last successful IR and result set so "What about
libraries?" and "Show me the closest one" can reuse prior constraints
without re-running geocoding; the earlier resolution is authoritative
within a session. The store serializes operations per session id, so
concurrent request handlers for distinct sessions never contend and two
handlers for the same session never interleave.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field, replace

from servicenav.geo import SpatialAnchor
from servicenav.ir import Fallback, QueryIR, ServiceRequest, no_cues_fallback
from servicenav.understanding import (
    FOLLOWUP_CATEGORY_SWITCH,
    FOLLOWUP_NONE,
    FOLLOWUP_SELECTOR,
    ExtractedCues,
    Normalized,
)

DEFAULT_TTL_SECONDS = 30 * 60


@dataclass(frozen=True)
class Turn:
    """One audit-log entry; exactly one is appended per API query."""

    timestamp: float
    raw_text: str
    outcome: str  # "answered" | "fallback"
    ir_digest: str | None
    result_count: int
    fallback_reason: str | None
    compiled_query: str | None
    latency_ms: float
    log_line: str  # serialized LogRecord, frozen at append time


@dataclass
class Session:
    id: str
    turns: list[Turn] = field(default_factory=list)
    last_ir: QueryIR | None = None
    last_anchor: SpatialAnchor | None = None
    last_results: object | None = None  # qlang.ResultSet
    last_active: float = 0.0


class UnknownSession(KeyError):
    pass


class SessionStore:
    """Thread-safe session registry with idle-TTL eviction."""

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl_seconds = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def get_or_create(self, session_id: str, now: float | None = None) -> Session:
        now = time.time() if now is None else now
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                session = Session(id=session_id, last_active=now)
                self._sessions[session_id] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSession(session_id) from None

    def count(self) -> int:
        with self._registry_lock:
            return len(self._sessions)

    def touch_and_evict(self, now: float | None = None) -> list[str]:
        """Remove sessions idle beyond the TTL; returns evicted ids."""
        now = time.time() if now is None else now
        with self._registry_lock:
            evicted = [
                sid
                for sid, s in self._sessions.items()
                if now - s.last_active > self.ttl_seconds
            ]
            for sid in evicted:
                del self._sessions[sid]
                self._locks.pop(sid, None)
        return evicted


def resolve_followup(
    session: Session,
    cues: ExtractedCues,
    fresh: Normalized | Fallback | None,
) -> Normalized | Fallback:
    """Apply follow-up context, or pass the fresh result through.

    category_switch keeps the prior spatial/temporal/limit and swaps in
    the newly named categories; selector narrows the prior IR to limit 1,
    which deterministically re-selects the previous top-ranked result.
    A marker with no prior context asks for a full question instead.
    Only these two follow-up forms exist; anything else is a fresh query.
    """
    marker = cues.followup_marker
    if marker == FOLLOWUP_NONE:
        if fresh is None:
            raise ValueError("fresh result required when no follow-up marker is set")
        return fresh

    if marker == FOLLOWUP_CATEGORY_SWITCH:
        if session.last_ir is None or not cues.service_cues:
            return no_cues_fallback()
        requests = tuple(
            ServiceRequest(c.category, c.features, c.cost) for c in cues.service_cues
        )
        return Normalized(session.last_ir.with_requests(requests), session.last_anchor)

    if marker == FOLLOWUP_SELECTOR:
        results = session.last_results
        if session.last_ir is None or results is None or not _has_entries(results):
            return no_cues_fallback()
        first_req = next(r.request for r in results.results if r.entries)
        ir = replace(session.last_ir, requests=(first_req,), limit=1)
        return Normalized(ir, session.last_anchor)

    raise ValueError(f"unknown follow-up marker: {marker}")


def _has_entries(results) -> bool:
    return any(r.entries for r in results.results)
