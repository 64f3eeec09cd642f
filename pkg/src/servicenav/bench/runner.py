"""Run a corpus through the engine (in-process or over HTTP).

One fresh session per query so turns never contaminate each other; the
transcript links every response back to its query id and factor levels.
Transport failures are recorded per query and the run continues.
"""

from __future__ import annotations

import json
from dataclasses import asdict

import httpx

from servicenav.api import _to_response
from servicenav.engine import Engine
from servicenav.hours import ClockContext

from .corpus import BenchmarkQuery


def run_system(
    corpus: list[BenchmarkQuery],
    *,
    engine: Engine | None = None,
    endpoint: str | None = None,
    clock: ClockContext | None = None,
) -> list[dict]:
    """One transcript entry per corpus query, in corpus order."""
    if (engine is None) == (endpoint is None):
        raise ValueError("provide exactly one of engine or endpoint")
    entries = []
    client = httpx.Client(timeout=30.0) if endpoint else None
    try:
        for q in corpus:
            entry = dict(asdict(q))
            entry["query_id"] = entry.pop("id")
            session_id = f"bench-{q.id}"
            try:
                if engine is not None:
                    answer = engine.handle_query(session_id, q.text, clock=clock)
                    entry["response"] = _to_response(answer).model_dump()
                else:
                    resp = client.post(
                        endpoint.rstrip("/") + "/api/query",
                        json={"session_id": session_id, "text": q.text},
                    )
                    resp.raise_for_status()
                    entry["response"] = resp.json()
            except httpx.HTTPError as exc:
                entry["response"] = None
                entry["error"] = str(exc)
            entries.append(entry)
    finally:
        if client is not None:
            client.close()
    return entries


def write_transcript(entries: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for e in entries:
            f.write(json.dumps(e, sort_keys=True) + "\n")


def read_transcript(path) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]
