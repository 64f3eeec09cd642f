"""Embedded property graph of verified community-service data.

Typed nodes (Organization, Location, Service, HoursWindow) connected by
LOCATED_AT / OFFERS / OPEN_DURING edges, loaded once from a JSON dataset
and immutable afterwards. Loading is strict: any invalid record rejects
the whole file, because silently dropping a provider is worse for the
people relying on this data than a failed deploy.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from servicenav.geo import GeoPoint
from servicenav.hours import MINUTES_PER_DAY, Day

NodeId = int

ZIP_RE = re.compile(r"^[0-9]{5}$")
FEATURE_TAG_RE = re.compile(r"^[a-z][a-z0-9_]*$")


class Category(Enum):
    """The five-domain service ontology."""

    food = "food"
    mental_health = "mental_health"
    shelter = "shelter"
    library = "library"
    social_security = "social_security"

    @property
    def display_label(self) -> str:
        return _CATEGORY_LABELS[self]


_CATEGORY_LABELS = {
    Category.food: "Food",
    Category.mental_health: "Mental Health",
    Category.shelter: "Shelter",
    Category.library: "Library",
    Category.social_security: "Social Security",
}


class Cost(Enum):
    free = "free"
    paid = "paid"
    sliding_scale = "sliding_scale"
    unknown = "unknown"


# Free-text cost strings seen in source data map onto the 4-value enum;
# anything not listed becomes unknown.
COST_LOOKUP = {
    "free": Cost.free,
    "no cost": Cost.free,
    "free of charge": Cost.free,
    "none": Cost.free,
    "$0": Cost.free,
    "paid": Cost.paid,
    "fee": Cost.paid,
    "fee for service": Cost.paid,
    "sliding_scale": Cost.sliding_scale,
    "sliding scale": Cost.sliding_scale,
    "income-based": Cost.sliding_scale,
    "unknown": Cost.unknown,
}


def normalize_cost(text: str) -> Cost:
    return COST_LOOKUP.get(text.strip().lower(), Cost.unknown)


class EdgeKind(Enum):
    LOCATED_AT = "LOCATED_AT"
    OFFERS = "OFFERS"
    OPEN_DURING = "OPEN_DURING"


@dataclass(frozen=True)
class Address:
    street: str
    city: str
    state: str
    zip: str

    def oneline(self) -> str:
        return f"{self.street}, {self.city}, {self.state}, {self.zip}"


@dataclass(frozen=True)
class OrganizationNode:
    id: NodeId
    name: str
    address: Address
    phone: str
    description: str


@dataclass(frozen=True)
class LocationNode:
    id: NodeId
    point: GeoPoint
    zip: str
    neighborhood: str
    street: str


@dataclass(frozen=True)
class ServiceNode:
    id: NodeId
    category: Category
    label: str
    cost: Cost
    features: frozenset[str]
    eligibility: str


@dataclass(frozen=True)
class HoursWindowNode:
    id: NodeId
    day: Day
    open_min: int
    close_min: int


@dataclass(frozen=True)
class Edge:
    from_id: NodeId
    to_id: NodeId
    kind: EdgeKind


class DatasetError(ValueError):
    """Base class for dataset load failures."""


class MalformedRecord(DatasetError):
    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"organization record {index}: {reason}")


class InvalidEdgeEndpoints(DatasetError):
    pass


class DuplicateNodeId(DatasetError):
    pass


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    node_ids: tuple[NodeId, ...] = ()


@dataclass(frozen=True)
class Candidate:
    """One match_candidates result row."""

    organization: OrganizationNode
    service: ServiceNode
    location: LocationNode
    hours: tuple[HoursWindowNode, ...]


_EDGE_ENDPOINTS = {
    EdgeKind.LOCATED_AT: (OrganizationNode, LocationNode),
    EdgeKind.OFFERS: (OrganizationNode, ServiceNode),
    EdgeKind.OPEN_DURING: (OrganizationNode, HoursWindowNode),
}


class Graph:
    """Read-only typed property graph.

    Construct directly from node/edge lists (tests build invalid graphs to
    exercise validate) or through load_dataset, which guarantees every
    invariant holds. Nothing mutates a Graph after construction, so it is
    safe to share across concurrent readers.
    """

    def __init__(self, nodes: list, edges: list[Edge]):
        self.nodes: dict[NodeId, object] = {}
        self._duplicates: list[NodeId] = []
        for n in nodes:
            if n.id in self.nodes:
                self._duplicates.append(n.id)
            self.nodes[n.id] = n
        self.edges = tuple(edges)
        self.organizations = tuple(n for n in nodes if isinstance(n, OrganizationNode))
        self.locations = tuple(n for n in nodes if isinstance(n, LocationNode))
        self.services = tuple(n for n in nodes if isinstance(n, ServiceNode))
        self.hours_windows = tuple(n for n in nodes if isinstance(n, HoursWindowNode))
        self._out: dict[tuple[NodeId, EdgeKind], list[NodeId]] = {}
        for e in self.edges:
            self._out.setdefault((e.from_id, e.kind), []).append(e.to_id)

    def out(self, node_id: NodeId, kind: EdgeKind) -> list:
        return [self.nodes[t] for t in self._out.get((node_id, kind), []) if t in self.nodes]

    def location_of(self, org: OrganizationNode) -> LocationNode:
        return self.out(org.id, EdgeKind.LOCATED_AT)[0]

    def services_of(self, org: OrganizationNode) -> list[ServiceNode]:
        return self.out(org.id, EdgeKind.OFFERS)

    def hours_of(self, org: OrganizationNode) -> list[HoursWindowNode]:
        return self.out(org.id, EdgeKind.OPEN_DURING)


_ORG_FIELDS = {"name", "address", "phone", "description", "location", "services", "hours"}
_ADDRESS_FIELDS = {"street", "city", "state", "zip"}
_LOCATION_FIELDS = {"lat", "lon", "neighborhood", "street"}
_SERVICE_FIELDS = {"category", "label", "cost", "features", "eligibility"}
_HOURS_FIELDS = {"day", "open", "close"}

_HHMM_RE = re.compile(r"^([0-9]{1,2}):([0-9]{2})$")


def _check_fields(obj: dict, allowed: set[str], where: str, index: int):
    if not isinstance(obj, dict):
        raise MalformedRecord(index, f"{where} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise MalformedRecord(index, f"{where}: unknown fields {sorted(unknown)}")
    missing = allowed - set(obj)
    if missing:
        raise MalformedRecord(index, f"{where}: missing fields {sorted(missing)}")


def _parse_hhmm(text: str, index: int, where: str) -> int:
    """24-hour clock text to minutes; "24:00" is allowed as a close time."""
    if not isinstance(text, str):
        raise MalformedRecord(index, f"{where}: time must be a string")
    m = _HHMM_RE.match(text)
    if not m:
        raise MalformedRecord(index, f"{where}: bad time {text!r}, expected HH:MM")
    h, mi = int(m.group(1)), int(m.group(2))
    if h > 24 or mi > 59 or (h == 24 and mi != 0):
        raise MalformedRecord(index, f"{where}: bad time {text!r}")
    return h * 60 + mi


def _text(obj: dict, key: str, index: int, where: str) -> str:
    v = obj[key]
    if not isinstance(v, str):
        raise MalformedRecord(index, f"{where}: {key} must be a string")
    return v


def load_dataset(path: str | Path) -> Graph:
    """Parse, validate, and freeze a dataset file into a Graph.

    Node ids are assigned densely in file order. Hours spans crossing
    midnight are split into two same-day-invariant windows here, so every
    downstream consumer sees open < close.
    """
    with open(path, encoding="utf-8") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(-1, f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or set(raw) != {"organizations"}:
        raise MalformedRecord(-1, 'top level must be {"organizations": [...]}')
    records = raw["organizations"]
    if not isinstance(records, list):
        raise MalformedRecord(-1, "organizations must be an array")

    nodes: list = []
    edges: list[Edge] = []
    next_id = 0

    def take_id() -> int:
        nonlocal next_id
        nid = next_id
        next_id += 1
        return nid

    for i, rec in enumerate(records):
        _check_fields(rec, _ORG_FIELDS, "organization", i)
        _check_fields(rec["address"], _ADDRESS_FIELDS, "address", i)
        _check_fields(rec["location"], _LOCATION_FIELDS, "location", i)

        name = _text(rec, "name", i, "organization")
        if not name.strip():
            raise MalformedRecord(i, "name must be nonempty")
        addr = Address(
            street=_text(rec["address"], "street", i, "address"),
            city=_text(rec["address"], "city", i, "address"),
            state=_text(rec["address"], "state", i, "address"),
            zip=_text(rec["address"], "zip", i, "address"),
        )
        if not ZIP_RE.match(addr.zip):
            raise MalformedRecord(i, f"bad zip {addr.zip!r}")
        org = OrganizationNode(
            id=take_id(),
            name=name,
            address=addr,
            phone=_text(rec, "phone", i, "organization"),
            description=_text(rec, "description", i, "organization"),
        )
        nodes.append(org)

        loc_raw = rec["location"]
        try:
            point = GeoPoint(float(loc_raw["lat"]), float(loc_raw["lon"]))
        except (TypeError, ValueError) as exc:
            raise MalformedRecord(i, f"location: {exc}") from exc
        loc = LocationNode(
            id=take_id(),
            point=point,
            zip=addr.zip,
            neighborhood=_text(loc_raw, "neighborhood", i, "location"),
            street=_text(loc_raw, "street", i, "location"),
        )
        nodes.append(loc)
        edges.append(Edge(org.id, loc.id, EdgeKind.LOCATED_AT))

        services = rec["services"]
        if not isinstance(services, list) or not services:
            raise MalformedRecord(i, "services must be a nonempty array")
        for s in services:
            _check_fields(s, _SERVICE_FIELDS, "service", i)
            cat_text = _text(s, "category", i, "service")
            try:
                category = Category(cat_text)
            except ValueError:
                raise MalformedRecord(i, f"unknown category {cat_text!r}") from None
            feats = s["features"]
            if not isinstance(feats, list):
                raise MalformedRecord(i, "features must be an array")
            for tag in feats:
                if not isinstance(tag, str) or not FEATURE_TAG_RE.match(tag):
                    raise MalformedRecord(i, f"bad feature tag {tag!r} (lowercase snake_case)")
            svc = ServiceNode(
                id=take_id(),
                category=category,
                label=_text(s, "label", i, "service"),
                cost=normalize_cost(_text(s, "cost", i, "service")),
                features=frozenset(feats),
                eligibility=_text(s, "eligibility", i, "service"),
            )
            nodes.append(svc)
            edges.append(Edge(org.id, svc.id, EdgeKind.OFFERS))

        hours = rec["hours"]
        if not isinstance(hours, list):
            raise MalformedRecord(i, "hours must be an array")
        org_windows: list[HoursWindowNode] = []
        for h in hours:
            _check_fields(h, _HOURS_FIELDS, "hours", i)
            day_text = _text(h, "day", i, "hours")
            if day_text not in Day.__members__:
                raise MalformedRecord(i, f"unknown day {day_text!r}, expected Mon..Sun")
            day = Day[day_text]
            open_min = _parse_hhmm(h["open"], i, "hours")
            close_min = _parse_hhmm(h["close"], i, "hours")
            if open_min >= MINUTES_PER_DAY:
                raise MalformedRecord(i, f"open time {h['open']!r} must be before 24:00")
            if open_min == close_min:
                raise MalformedRecord(i, f"empty hours window {h['open']}-{h['close']}")
            if open_min < close_min:
                org_windows.append(HoursWindowNode(take_id(), day, open_min, close_min))
            else:
                # Midnight-crossing span: split at 24:00 into two windows.
                org_windows.append(HoursWindowNode(take_id(), day, open_min, MINUTES_PER_DAY))
                if close_min > 0:
                    org_windows.append(HoursWindowNode(take_id(), day.next(), 0, close_min))
        _check_overlaps(org_windows, i)
        for w in org_windows:
            nodes.append(w)
            edges.append(Edge(org.id, w.id, EdgeKind.OPEN_DURING))

    graph = Graph(nodes, edges)
    report = validate(graph)
    if report:
        first = report[0]
        raise MalformedRecord(-1, f"graph invariant violated: {first.code}: {first.message}")
    return graph


def _check_overlaps(windows: list[HoursWindowNode], index: int):
    by_day: dict[Day, list[HoursWindowNode]] = {}
    for w in windows:
        by_day.setdefault(w.day, []).append(w)
    for day, ws in by_day.items():
        ws = sorted(ws, key=lambda w: w.open_min)
        for a, b in zip(ws, ws[1:]):
            if b.open_min < a.close_min:
                raise MalformedRecord(
                    index,
                    f"overlapping {day.name} windows "
                    f"{a.open_min}-{a.close_min} and {b.open_min}-{b.close_min}",
                )


def match_candidates(
    graph: Graph,
    category: Category,
    required_features: frozenset[str] | set[str] = frozenset(),
    required_cost: Cost | None = None,
) -> list[Candidate]:
    """Every (org, service, location, hours) tuple satisfying the predicate.

    Complete by construction: scans all OFFERS edges. Order is file order
    of the underlying nodes; callers needing a ranking sort afterwards.
    """
    required_features = frozenset(required_features)
    out: list[Candidate] = []
    for org in graph.organizations:
        locs = graph.out(org.id, EdgeKind.LOCATED_AT)
        if not locs:
            continue
        windows = tuple(graph.hours_of(org))
        for svc in graph.services_of(org):
            if svc.category != category:
                continue
            if not required_features <= svc.features:
                continue
            if required_cost is not None and svc.cost != required_cost:
                continue
            out.append(Candidate(org, svc, locs[0], windows))
    return out


def validate(graph: Graph) -> list[Violation]:
    """Every invariant violation in the graph; empty iff the graph is valid."""
    report: list[Violation] = []
    for dup in graph._duplicates:
        report.append(Violation("duplicate_node_id", f"node id {dup} assigned twice", (dup,)))

    for e in graph.edges:
        src = graph.nodes.get(e.from_id)
        dst = graph.nodes.get(e.to_id)
        if src is None or dst is None:
            report.append(
                Violation("dangling_edge", f"{e.kind.value} references missing node", (e.from_id, e.to_id))
            )
            continue
        want_src, want_dst = _EDGE_ENDPOINTS[e.kind]
        if not isinstance(src, want_src) or not isinstance(dst, want_dst):
            report.append(
                Violation(
                    "invalid_edge_endpoints",
                    f"{e.kind.value} must connect {want_src.__name__} to {want_dst.__name__}",
                    (e.from_id, e.to_id),
                )
            )

    for org in graph.organizations:
        if not org.name.strip():
            report.append(Violation("empty_name", f"organization {org.id} has empty name", (org.id,)))
        if not graph.out(org.id, EdgeKind.LOCATED_AT):
            report.append(
                Violation("missing_location", f"organization {org.id} has no LOCATED_AT edge", (org.id,))
            )
        if not graph.out(org.id, EdgeKind.OFFERS):
            report.append(
                Violation("missing_services", f"organization {org.id} has no OFFERS edge", (org.id,))
            )
        by_day: dict[Day, list[HoursWindowNode]] = {}
        for w in graph.hours_of(org):
            by_day.setdefault(w.day, []).append(w)
        for day, ws in by_day.items():
            ws = sorted(ws, key=lambda w: w.open_min)
            for i, a in enumerate(ws):
                for b in ws[i + 1 :]:
                    if max(a.open_min, b.open_min) < min(a.close_min, b.close_min):
                        report.append(
                            Violation(
                                "overlapping_windows",
                                f"organization {org.id} has overlapping {day.name} windows",
                                (a.id, b.id),
                            )
                        )

    for loc in graph.locations:
        if not ZIP_RE.match(loc.zip):
            report.append(Violation("bad_zip", f"location {loc.id} zip {loc.zip!r}", (loc.id,)))

    for svc in graph.services:
        for tag in svc.features:
            if not FEATURE_TAG_RE.match(tag):
                report.append(
                    Violation("bad_feature_tag", f"service {svc.id} tag {tag!r}", (svc.id,))
                )

    for w in graph.hours_windows:
        if not (0 <= w.open_min < w.close_min <= MINUTES_PER_DAY):
            report.append(
                Violation(
                    "bad_window",
                    f"window {w.id} range [{w.open_min}, {w.close_min}) invalid",
                    (w.id,),
                )
            )
    return report
