"""Service cards, stop plans, directions links, and the session log.

Every field on a card is copied from a graph node or computed from
coordinates; nothing is synthesized, so a card can never claim something
the data does not say. Formatting is deterministic: equal inputs yield
byte-identical cards and log lines.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from urllib.parse import quote

from servicenav import geo
from servicenav.hours import MINUTES_PER_DAY, AnyTime
from servicenav.ir import QueryIR
from servicenav.kg import Cost, Graph
from servicenav.qlang import ResultEntry, ResultSet, execute
from servicenav.sessions import Session

_COST_LABELS = {
    Cost.free: "Free",
    Cost.paid: "Paid",
    Cost.sliding_scale: "Sliding Scale",
    Cost.unknown: "Cost Unknown",
}


def minutes_to_12h(minute: int) -> str:
    """1140 -> "7:00 PM"; 0 and 1440 both render as 12:00 AM (midnight)."""
    minute = minute % MINUTES_PER_DAY
    hour24, m = divmod(minute, 60)
    suffix = "AM" if hour24 < 12 else "PM"
    hour = hour24 % 12 or 12
    return f"{hour}:{m:02d} {suffix}"


def window_line(day, open_min: int, close_min: int) -> str:
    return f"{day.full_name}, {minutes_to_12h(open_min)} - {minutes_to_12h(close_min)}"


@dataclass(frozen=True)
class ServiceCard:
    org_name: str
    distance_mi: str | None  # exactly one decimal, e.g. "0.1"
    phone: str
    address: str
    hours_line: str
    services: tuple[str, ...]  # "Label (Cost)"
    point: geo.GeoPoint
    directions: str
    details: "CardDetails"


@dataclass(frozen=True)
class CardDetails:
    description: str
    eligibility: str
    weekly_hours: tuple[str, ...]  # one line per window, week order
    all_services: tuple[str, ...]
    neighborhood: str


@dataclass(frozen=True)
class Stop:
    index: int
    label: str  # category display label
    cards: tuple[ServiceCard, ...]


@dataclass(frozen=True)
class StopPlan:
    stops: tuple[Stop, ...]
    message: str | None  # no-results explanation when stops is empty


def _service_label(svc) -> str:
    return f"{svc.label} ({_COST_LABELS[svc.cost]})"


def _card(
    entries: list[ResultEntry],
    result_set: ResultSet,
    graph: Graph,
    origin: geo.GeoPoint | None,
) -> ServiceCard:
    """One card for a group of same-organization result entries."""
    first = entries[0]
    org, loc = first.organization, first.location
    if first.matched_windows:
        w = first.matched_windows[0]
        hours_line = window_line(w.day, w.open_min, w.close_min)
    else:
        hours_line = f"{result_set.clock_day.full_name}, Closed"
    all_windows = sorted(graph.hours_of(org), key=lambda w: (w.day.value, w.open_min))
    weekly = tuple(window_line(w.day, w.open_min, w.close_min) for w in all_windows)
    all_services = tuple(_service_label(s) for s in graph.services_of(org))
    return ServiceCard(
        org_name=org.name,
        distance_mi=f"{first.distance_mi:.1f}" if first.distance_mi is not None else None,
        phone=org.phone,
        address=org.address.oneline(),
        hours_line=hours_line,
        services=tuple(_service_label(e.service) for e in entries),
        point=loc.point,
        directions=directions_url(origin, loc.point),
        details=CardDetails(
            description=org.description,
            eligibility=first.service.eligibility,
            weekly_hours=weekly,
            all_services=all_services,
            neighborhood=loc.neighborhood,
        ),
    )


def format_cards(
    result_set: ResultSet,
    ir: QueryIR,
    graph: Graph,
    *,
    origin: geo.GeoPoint | None = None,
    diagnosis: dict[int, str] | None = None,
) -> StopPlan:
    """Build the stop plan for an executed result set.

    Stops follow the IR's request order; requests with zero results are
    skipped and indices stay consecutive from 1. Result entries are one
    per (organization, service) pair, so consecutive entries for the same
    organization collapse into a single card listing every matched
    service. An entirely empty result set gets an explanation naming the
    constraints that eliminated candidates (see diagnose_empty).
    """
    stops = []
    index = 0
    for req_result in result_set.results:
        if not req_result.entries:
            continue
        index += 1
        groups: list[list[ResultEntry]] = []
        for entry in req_result.entries:
            if groups and groups[-1][0].organization.id == entry.organization.id:
                groups[-1].append(entry)
            else:
                groups.append([entry])
        stops.append(
            Stop(
                index=index,
                label=req_result.request.category.display_label,
                cards=tuple(_card(g, result_set, graph, origin) for g in groups),
            )
        )
    message = None
    if not stops:
        parts = []
        for i, req_result in enumerate(result_set.results):
            reason = (diagnosis or {}).get(i, "category")
            parts.append(
                f"no {req_result.request.category.display_label.lower()} results "
                f"({_DIAGNOSIS_TEXT[reason]})"
            )
        message = "No matching services found: " + "; ".join(parts) + "."
    return StopPlan(tuple(stops), message)


_DIAGNOSIS_TEXT = {
    "category": "nothing in the data matches that service request",
    "hours": "the operating-hours filter eliminated all candidates",
    "distance": "the distance filter eliminated all candidates",
    "hours+distance": "the hours and distance filters together eliminated all candidates",
}


def diagnose_empty(ir: QueryIR, graph: Graph, clock) -> dict[int, str]:
    """Which constraint eliminated each empty request's candidates.

    Re-runs execute with one constraint relaxed at a time: if dropping the
    temporal filter produces results the hours constraint was decisive,
    likewise for distance; if neither relaxation helps alone, both were;
    if even the bare category/feature/cost match is empty, the data simply
    has nothing for that request.
    """
    out: dict[int, str] = {}
    base = execute(ir, graph, clock)
    relaxed_t = execute(replace(ir, temporal=AnyTime()), graph, clock)
    relaxed_s = execute(replace(ir, spatial=None), graph, clock)
    relaxed_both = execute(replace(ir, temporal=AnyTime(), spatial=None), graph, clock)
    for i, req_result in enumerate(base.results):
        if req_result.entries:
            continue
        if not relaxed_both.results[i].entries:
            out[i] = "category"
        elif relaxed_t.results[i].entries:
            out[i] = "hours"
        elif relaxed_s.results[i].entries:
            out[i] = "distance"
        else:
            out[i] = "hours+distance"
    return out


def directions_url(origin: geo.GeoPoint | None, dest: geo.GeoPoint) -> str:
    """External-maps directions URL; coordinates fixed to 6 decimals."""
    dest_text = f"{dest.lat:.6f},{dest.lon:.6f}"
    url = f"https://www.google.com/maps/dir/?api=1&destination={quote(dest_text)}"
    if origin is not None:
        origin_text = f"{origin.lat:.6f},{origin.lon:.6f}"
        url += f"&origin={quote(origin_text)}"
    return url


_COORD_IN_URL = re.compile(r"(-?\d+\.\d{6}),(-?\d+\.\d{6})")


def parse_directions_url(url: str) -> list[geo.GeoPoint]:
    """Coordinates embedded in a directions URL (destination first)."""
    from urllib.parse import parse_qs, unquote, urlparse

    qs = parse_qs(urlparse(url).query)
    points = []
    for key in ("destination", "origin"):
        for value in qs.get(key, []):
            m = _COORD_IN_URL.match(unquote(value))
            if m:
                points.append(geo.GeoPoint(float(m.group(1)), float(m.group(2))))
    return points


def log_line(
    *,
    timestamp: float,
    session_id: str,
    raw_text: str,
    cues_summary: dict,
    compiled_query: str | None,
    fallback_reason: str | None,
    result_org_names: list[str],
    latency_ms: float,
) -> str:
    """One serialized audit record. Never contains client coordinates."""
    record = {
        "ts": round(timestamp, 3),
        "session_id": session_id,
        "text": raw_text,
        "cues": cues_summary,
        "compiled_query": compiled_query,
        "fallback_reason": fallback_reason,
        "results": result_org_names,
        "latency_ms": round(latency_ms, 3),
    }
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def export_log(session: Session) -> str:
    """The session's audit log: one JSON object per line, chronological.

    Lines are frozen at turn-append time, so repeated export of an
    unchanged session is byte-identical.
    """
    if not session.turns:
        return ""
    return "\n".join(t.log_line for t in session.turns) + "\n"


__all__ = [
    "CardDetails",
    "ServiceCard",
    "Stop",
    "StopPlan",
    "diagnose_empty",
    "directions_url",
    "export_log",
    "format_cards",
    "log_line",
    "minutes_to_12h",
    "parse_directions_url",
    "window_line",
]
