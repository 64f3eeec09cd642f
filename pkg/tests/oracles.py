"""Independent verification routes used by the test suite.

Everything here is deliberately written against different formulations
than the package: a Vincenty-form great-circle distance, a minute-of-week
bitmap for hours logic, and a from-scratch full-scan query evaluator.
None of it imports the code paths it checks.
"""

from __future__ import annotations

import math

MINUTES_PER_WEEK = 7 * 1440


def haversine_reference(lat1, lon1, lat2, lon2) -> float:
    """Great-circle meters via the Vincenty arctan2 form on a sphere."""
    R = 6_371_000.0
    p1, l1, p2, l2 = map(math.radians, (lat1, lon1, lat2, lon2))
    dl = l2 - l1
    num = math.sqrt(
        (math.cos(p2) * math.sin(dl)) ** 2
        + (math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dl)) ** 2
    )
    den = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(dl)
    return R * math.atan2(num, den)


def week_bitmap(windows) -> bytearray:
    """Open/closed flag for each of the 10 080 minutes of the week.

    Accepts anything with .day/.open_min/.close_min or (day_index,
    open_min, close_min) triples.
    """
    bits = bytearray(MINUTES_PER_WEEK)
    for w in windows:
        if isinstance(w, tuple):
            day_idx, open_min, close_min = w
        else:
            day_idx, open_min, close_min = w.day.value, w.open_min, w.close_min
        base = day_idx * 1440
        for m in range(open_min, close_min):
            bits[base + m] = 1
    return bits


def brute_force_satisfies(windows, constraint) -> bool:
    """Constraint evaluation by scanning the minute-of-week bitmap."""
    from servicenav.hours import AnyTime, OpenAt, OpenDuring

    if isinstance(constraint, AnyTime):
        return True
    bits = week_bitmap(windows)
    if isinstance(constraint, OpenAt):
        return bits[constraint.day.value * 1440 + constraint.minute] == 1
    assert isinstance(constraint, OpenDuring)
    for day in constraint.days:
        base = day.value * 1440
        for m in range(constraint.start_min, constraint.end_min):
            if bits[base + m]:
                return True
    return False


def raw_schedule_bitmap(raw_hours) -> bytearray:
    """Openness straight from pre-split (day_index, open_min, close_min)
    records, where open >= close means the span crosses midnight."""
    bits = bytearray(MINUTES_PER_WEEK)
    for day_idx, open_min, close_min in raw_hours:
        if open_min < close_min:
            spans = [(day_idx, open_min, close_min)]
        else:
            spans = [(day_idx, open_min, 1440), ((day_idx + 1) % 7, 0, close_min)]
        for d, o, c in spans:
            for m in range(o, c):
                bits[d * 1440 + m] = 1
    return bits


def naive_execute(ir, graph, clock):
    """From-scratch evaluator: full scan, predicate filter, sort, truncate.

    Returns [(org_id, service_id, distance_m | None), ...] per request.
    Uses the package's distance primitive (checked separately against
    haversine_reference) but none of its query-evaluation code.
    """
    from servicenav import kernels
    from servicenav.kg import EdgeKind, LocationNode, OrganizationNode, ServiceNode

    out = []
    for req in ir.requests:
        rows = []
        for edge in graph.edges:
            if edge.kind != EdgeKind.OFFERS:
                continue
            org = graph.nodes[edge.from_id]
            svc = graph.nodes[edge.to_id]
            assert isinstance(org, OrganizationNode) and isinstance(svc, ServiceNode)
            if svc.category != req.category:
                continue
            if not set(req.features) <= set(svc.features):
                continue
            if req.cost is not None and svc.cost != req.cost:
                continue
            locs = [
                graph.nodes[e.to_id]
                for e in graph.edges
                if e.kind == EdgeKind.LOCATED_AT and e.from_id == org.id
            ]
            if not locs:
                continue
            loc = locs[0]
            assert isinstance(loc, LocationNode)
            windows = [
                graph.nodes[e.to_id]
                for e in graph.edges
                if e.kind == EdgeKind.OPEN_DURING and e.from_id == org.id
            ]
            if not brute_force_satisfies(windows, ir.temporal):
                continue
            if ir.spatial is not None:
                d = kernels.haversine_m(
                    ir.spatial.point.lat, ir.spatial.point.lon, loc.point.lat, loc.point.lon
                )
                if d > ir.spatial.radius_m:
                    continue
                rows.append((d, org.name, org.id, svc.id))
            else:
                rows.append((None, org.name, org.id, svc.id))
        if ir.spatial is not None:
            rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
        else:
            rows.sort(key=lambda r: (r[1], r[2], r[3]))
        out.append([(org_id, svc_id, d) for d, _name, org_id, svc_id in rows[: ir.limit]])
    return out
