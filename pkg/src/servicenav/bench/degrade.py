"""Degraded-baseline transcript generator.

The original comparison target was a live commercial search product,
which is not reproducible offline. This stands in for it: the same
answers with operational detail (phone, hours, detail sections, the
compiled query) stripped, so the judging pipeline can run end to end and
the full system's advantage is confined to the operational-detail
criterion. An external baseline can replace this via the judge CLI.
"""

from __future__ import annotations

import copy


def degrade_transcript(entries: list[dict]) -> list[dict]:
    """Strip phone/hours/details from every card of every answer."""
    out = []
    for entry in entries:
        entry = copy.deepcopy(entry)
        resp = entry.get("response")
        if resp and resp.get("kind") == "answer":
            resp["compiled_query"] = None
            plan = resp.get("stop_plan") or {}
            for stop in plan.get("stops", []):
                for card in stop.get("cards", []):
                    card["phone"] = ""
                    card["hours_line"] = ""
                    card["details"] = {}
        out.append(entry)
    return out
