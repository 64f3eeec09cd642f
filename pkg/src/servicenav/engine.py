"""End-to-end pipeline orchestration.

One Engine owns the immutable graph/gazetteer/lexicon plus the session
store, and runs extract -> gate -> follow-up/normalize -> compile ->
execute -> format for each utterance. The HTTP layer and the benchmark
runner both drive this object; neither carries pipeline logic of its own.
"""

from __future__ import annotations

import hashlib
import re
import threading
import time
from dataclasses import dataclass, replace

from servicenav import qlang, response, understanding
from servicenav.config import ServiceConfig
from servicenav.geo import Gazetteer, GeoPoint
from servicenav.hours import ClockContext
from servicenav.ir import Fallback
from servicenav.kg import Graph, load_dataset
from servicenav.qlang import ResultSet
from servicenav.response import StopPlan
from servicenav.sessions import Session, SessionStore, Turn, resolve_followup
from servicenav.understanding import (
    FOLLOWUP_NONE,
    Extractor,
    ExtractedCues,
    Lexicon,
    RawQuery,
)

REDACTED_COORD = "<redacted>"


@dataclass(frozen=True)
class EngineAnswer:
    kind: str  # "answer" | "fallback"
    stop_plan: StopPlan | None
    fallback: Fallback | None
    compiled_query: str | None
    result_set: ResultSet | None
    latency_ms: float


def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


class Engine:
    def __init__(self, config: ServiceConfig | None = None):
        self.config = config or ServiceConfig()
        self.graph: Graph = load_dataset(self.config.dataset_path)
        self.gazetteer = Gazetteer.load(self.config.gazetteer_path)
        self.lexicon = Lexicon.load(self.config.lexicon_path)
        self.extractor = Extractor(self.lexicon, self.gazetteer.names())
        self.sessions = SessionStore(self.config.session_ttl_seconds)
        self.digests = {
            "dataset": _sha256_file(self.config.dataset_path),
            "gazetteer": _sha256_file(self.config.gazetteer_path),
            "lexicon": _sha256_file(self.config.lexicon_path),
        }
        self.counters = {"queries": 0, "answers": 0, "fallbacks": 0}
        self._counter_lock = threading.Lock()

    # -- pipeline ----------------------------------------------------------

    def handle_query(
        self,
        session_id: str,
        text: str,
        client_location: GeoPoint | None = None,
        clock: ClockContext | None = None,
        now: float | None = None,
    ) -> EngineAnswer:
        """Run one utterance through the full pipeline and append its Turn."""
        started = time.perf_counter()
        now = time.time() if now is None else now
        clock = clock or self.config.clock()
        raw = RawQuery(text, session_id, client_location, clock)

        self.sessions.touch_and_evict(now)
        session = self.sessions.get_or_create(session_id, now)
        with self.sessions.lock_for(session_id):
            answer, cues = self._run_turn(session, raw, clock)
            answer = replace(answer, latency_ms=(time.perf_counter() - started) * 1000.0)
            self._append_turn(session, raw, answer, cues, now)
            session.last_active = now
        with self._counter_lock:
            self.counters["queries"] += 1
            self.counters["answers" if answer.kind == "answer" else "fallbacks"] += 1
        return answer

    def _run_turn(
        self, session: Session, raw: RawQuery, clock: ClockContext
    ) -> tuple[EngineAnswer, ExtractedCues]:
        cues = self.extractor.extract_cues(raw.text)

        if cues.followup_marker == FOLLOWUP_NONE:
            fresh = understanding.normalize(
                cues,
                raw,
                self.gazetteer,
                default_limit=self.config.default_limit,
                default_radius_m=self.config.default_radius_m,
            )
            outcome = resolve_followup(session, cues, fresh)
        else:
            outcome = resolve_followup(session, cues, None)

        if isinstance(outcome, Fallback):
            return EngineAnswer("fallback", None, outcome, None, None, 0.0), cues

        ir, anchor = outcome.ir, outcome.anchor
        compiled = qlang.compile_query(ir)
        # Execute exactly what the transparency text says, not the IR we
        # happen to hold: parse it back first.
        executed_ir = qlang.parse_query(compiled.text)
        result_set = qlang.execute(executed_ir, self.graph, clock)

        diagnosis = None
        if not any(r.entries for r in result_set.results):
            diagnosis = response.diagnose_empty(executed_ir, self.graph, clock)
        origin = anchor.point if anchor else None
        plan = response.format_cards(
            result_set, executed_ir, self.graph, origin=origin, diagnosis=diagnosis
        )

        session.last_ir = ir
        session.last_anchor = anchor
        session.last_results = result_set
        return EngineAnswer("answer", plan, None, compiled.text, result_set, 0.0), cues

    def _append_turn(
        self,
        session: Session,
        raw: RawQuery,
        answer: EngineAnswer,
        cues: ExtractedCues,
        now: float,
    ):
        logged_query = answer.compiled_query
        anchor = session.last_anchor if answer.kind == "answer" else None
        if logged_query and anchor is not None and anchor.resolution == "client_location":
            logged_query = _redact_coordinates(logged_query)
        org_names = []
        if answer.stop_plan:
            for stop in answer.stop_plan.stops:
                org_names.extend(card.org_name for card in stop.cards)
        line = response.log_line(
            timestamp=now,
            session_id=session.id,
            raw_text=raw.text,
            cues_summary=_cues_summary(cues),
            compiled_query=logged_query,
            fallback_reason=answer.fallback.reason.value if answer.fallback else None,
            result_org_names=org_names,
            latency_ms=answer.latency_ms,
        )
        session.turns.append(
            Turn(
                timestamp=now,
                raw_text=raw.text,
                outcome="answered" if answer.kind == "answer" else "fallback",
                ir_digest=(
                    session.last_ir.digest()
                    if answer.kind == "answer" and session.last_ir
                    else None
                ),
                result_count=len(org_names),
                fallback_reason=answer.fallback.reason.value if answer.fallback else None,
                compiled_query=answer.compiled_query,
                latency_ms=answer.latency_ms,
                log_line=line,
            )
        )

    # -- introspection -----------------------------------------------------

    def export_log(self, session_id: str) -> str:
        return response.export_log(self.sessions.get(session_id))

    def stats(self) -> dict:
        with self._counter_lock:
            counters = dict(self.counters)
        return {
            "nodes": {
                "Organization": len(self.graph.organizations),
                "Location": len(self.graph.locations),
                "Service": len(self.graph.services),
                "Hours": len(self.graph.hours_windows),
            },
            "sessions": self.sessions.count(),
            "counters": counters,
        }

    def health(self) -> dict:
        from servicenav import kernels

        return {
            "status": "ok",
            "kernel_backend": kernels.BACKEND,
            "digests": dict(self.digests),
        }


_FLOAT_RE = r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"
_DIST_CALL_RE = re.compile(rf"dist\(l, ({_FLOAT_RE}), ({_FLOAT_RE})\)")


def _redact_coordinates(compiled_text: str) -> str:
    """Strip client coordinates from a compiled query before logging.

    Only the resolution kind of a client-located anchor may be logged,
    never the coordinates themselves.
    """
    return _DIST_CALL_RE.sub(f"dist(l, {REDACTED_COORD}, {REDACTED_COORD})", compiled_text)


def _cues_summary(cues: ExtractedCues | None) -> dict:
    if cues is None:
        return {}
    return {
        "services": [
            {
                "category": c.category.value,
                "features": sorted(c.features),
                "cost": c.cost.value if c.cost else None,
            }
            for c in cues.service_cues
        ],
        "spatial_kind": cues.spatial_cue[1] if cues.spatial_cue else None,
        "temporal": cues.temporal_cue,
        "followup": cues.followup_marker,
        "spans": [[s.start, s.end, s.kind] for s in cues.matched_spans],
    }
