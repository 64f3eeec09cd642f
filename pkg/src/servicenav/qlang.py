"""Schema-constrained graph query text: compile, parse back, execute.

Every answered query carries a textual form of its IR in a small fixed
Cypher-like grammar. The text is the transparency artifact: it is logged,
shown on request, and round-trips (parse(compile(ir)) == ir), which is how
we prove no hidden query rewriting happens. Execution parses back to IR
and runs the built-in evaluator over the immutable graph; the text exists
so the same query could later be ported to an external graph database.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from servicenav import geo
from servicenav.hours import AnyTime, Day, OpenAt, OpenDuring, matching_windows, satisfies
from servicenav.hours import ClockContext, MINUTES_PER_DAY
from servicenav.ir import QueryIR, ServiceRequest, SpatialConstraint
from servicenav.kg import (
    Candidate,
    Category,
    Cost,
    Graph,
    HoursWindowNode,
    LocationNode,
    OrganizationNode,
    ServiceNode,
    match_candidates,
)

# Everything the compiled text may mention. The schema-closure test checks
# compile output against this manifest at the string level.
SCHEMA = {
    "labels": frozenset({"Organization", "Service", "Location", "Hours"}),
    "edges": frozenset({"OFFERS", "LOCATED_AT", "OPEN_DURING"}),
    "properties": frozenset({"category", "features", "cost", "day", "open", "close"}),
    "functions": frozenset({"dist", "overlaps"}),
    "variables": frozenset({"o", "s", "l", "t"}),
}

PATTERN_TEXT = (
    "(o:Organization)-[:OFFERS]->(s:Service), "
    "(o)-[:LOCATED_AT]->(l:Location), "
    "(o)-[:OPEN_DURING]->(t:Hours)"
)

_WEEK_ORDER = list(Day)


class QuerySyntaxError(ValueError):
    """Text does not conform to the grammar."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class SchemaViolation(ValueError):
    """Grammatical text mentioning an unknown label, property, or function."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


@dataclass(frozen=True)
class CompiledQuery:
    text: str
    source_ir_digest: str


@dataclass(frozen=True)
class ResultEntry:
    organization: OrganizationNode
    service: ServiceNode
    location: LocationNode
    matched_windows: tuple[HoursWindowNode, ...]
    distance_mi: float | None


@dataclass(frozen=True)
class RequestResult:
    request: ServiceRequest
    entries: tuple[ResultEntry, ...]


@dataclass(frozen=True)
class ResultSet:
    results: tuple[RequestResult, ...]
    clock_day: Day


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _day_token(d: Day) -> str:
    return f'"{d.name}"'


def _temporal_preds(t) -> list[str]:
    if isinstance(t, AnyTime):
        return []
    if isinstance(t, OpenAt):
        return [
            f't.day = {_day_token(t.day)}',
            f"t.open <= {t.minute} AND t.close > {t.minute}",
        ]
    days = sorted(t.days, key=lambda d: d.value)
    if len(days) == 1:
        day_pred = f"t.day = {_day_token(days[0])}"
    else:
        day_pred = "t.day IN [" + ", ".join(_day_token(d) for d in days) + "]"
    return [day_pred, f"overlaps(t, {t.start_min}, {t.end_min})"]


def compile_query(ir: QueryIR) -> CompiledQuery:
    """Emit the canonical text for an IR.

    One subquery per service request; WHERE conjunctions in the fixed
    order category, features (sorted), cost, day, time, distance. Equal
    IRs produce byte-identical text.
    """
    subqueries = []
    for req in ir.requests:
        preds = [f's.category = "{req.category.value}"']
        preds += [f'"{tag}" IN s.features' for tag in sorted(req.features)]
        if req.cost is not None:
            preds.append(f's.cost = "{req.cost.value}"')
        preds += _temporal_preds(ir.temporal)
        if ir.spatial is not None:
            preds.append(
                f"dist(l, {_fmt_float(ir.spatial.point.lat)}, "
                f"{_fmt_float(ir.spatial.point.lon)}) <= {_fmt_float(ir.spatial.radius_m)}"
            )
        clause = f"MATCH {PATTERN_TEXT} WHERE " + " AND ".join(preds) + " RETURN o, s, l, t"
        if ir.spatial is not None:
            clause += " ORDER BY dist ASC"
        clause += f" LIMIT {ir.limit}"
        subqueries.append(clause)
    return CompiledQuery("; ".join(subqueries), ir.digest())


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    |(?P<number>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
    |(?P<string>"[^"\n]*")
    |(?P<name>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op><=|->|[(),;:\[\]=<>.\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | string | name | op | eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group(0)
        if kind != "ws":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


@dataclass
class _SubqueryParts:
    requests_category: Category | None = None
    features: set[str] | None = None
    cost: Cost | None = None
    day_set: frozenset[Day] | None = None
    open_le: int | None = None
    close_gt: int | None = None
    overlap: tuple[int, int] | None = None
    dist: tuple[float, float, float] | None = None
    ordered: bool = False
    limit: int | None = None


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str) -> "QuerySyntaxError":
        tok = self.peek()
        return QuerySyntaxError(message, tok.line, tok.column)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise self.fail(f"expected {text!r}, found {tok.text!r}")
        return self.next()

    def expect_kind(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(f"expected {kind}, found {tok.text!r}")
        return self.next()

    # -- grammar -----------------------------------------------------------

    def parse_query(self) -> QueryIR:
        parts = [self.parse_subquery()]
        while self.peek().text == ";":
            self.next()
            parts.append(self.parse_subquery())
        if self.peek().kind != "eof":
            raise self.fail(f"trailing input {self.peek().text!r}")
        return self.assemble(parts)

    def parse_subquery(self) -> _SubqueryParts:
        self.expect("MATCH")
        self.parse_pattern()
        self.expect("WHERE")
        parts = _SubqueryParts()
        self.parse_pred(parts)
        while self.peek().text == "AND":
            self.next()
            self.parse_pred(parts)
        self.expect("RETURN")
        for expected in ("o", ",", "s", ",", "l", ",", "t"):
            self.expect(expected)
        if self.peek().text == "ORDER":
            self.next()
            self.expect("BY")
            self.expect("dist")
            self.expect("ASC")
            parts.ordered = True
        if self.peek().text == "LIMIT":
            self.next()
            parts.limit = self.int_token("LIMIT")
            if parts.limit < 1:
                raise self.fail("LIMIT must be >= 1")
        return parts

    def parse_pattern(self):
        self.node("o", "Organization")
        self.edge("OFFERS")
        self.node("s", "Service")
        self.expect(",")
        self.node("o", None)
        self.edge("LOCATED_AT")
        self.node("l", "Location")
        self.expect(",")
        self.node("o", None)
        self.edge("OPEN_DURING")
        self.node("t", "Hours")

    def node(self, var: str, label: str | None):
        self.expect("(")
        tok = self.expect_kind("name")
        if tok.text != var:
            if tok.text in SCHEMA["variables"]:
                raise QuerySyntaxError(
                    f"expected variable {var!r}, found {tok.text!r}", tok.line, tok.column
                )
            raise SchemaViolation(f"unknown variable {tok.text!r}", tok.line, tok.column)
        if label is not None:
            self.expect(":")
            ltok = self.expect_kind("name")
            if ltok.text not in SCHEMA["labels"]:
                raise SchemaViolation(f"unknown label {ltok.text!r}", ltok.line, ltok.column)
            if ltok.text != label:
                raise QuerySyntaxError(
                    f"expected label {label!r}, found {ltok.text!r}", ltok.line, ltok.column
                )
        self.expect(")")

    def edge(self, kind: str):
        self.expect("-")
        self.expect("[")
        self.expect(":")
        tok = self.expect_kind("name")
        if tok.text not in SCHEMA["edges"]:
            raise SchemaViolation(f"unknown edge kind {tok.text!r}", tok.line, tok.column)
        if tok.text != kind:
            raise QuerySyntaxError(
                f"expected edge {kind!r}, found {tok.text!r}", tok.line, tok.column
            )
        self.expect("]")
        self.expect("->")

    def parse_pred(self, parts: _SubqueryParts):
        tok = self.peek()
        if tok.kind == "string":
            # str IN s.features
            tag = self.string_token()
            self.expect("IN")
            self.property_ref("s", "features")
            if parts.features is None:
                parts.features = set()
            parts.features.add(tag)
            return
        if tok.text == "dist":
            self.parse_dist(parts)
            return
        if tok.text == "overlaps":
            self.parse_overlaps(parts)
            return
        if tok.kind == "name":
            var = tok.text
            if var not in SCHEMA["variables"]:
                raise SchemaViolation(f"unknown variable {var!r}", tok.line, tok.column)
            self.next()
            self.expect(".")
            prop_tok = self.expect_kind("name")
            prop = prop_tok.text
            if prop not in SCHEMA["properties"]:
                raise SchemaViolation(f"unknown property {prop!r}", prop_tok.line, prop_tok.column)
            key = (var, prop)
            if key == ("s", "category"):
                self.expect("=")
                value = self.string_token()
                try:
                    cat = Category(value)
                except ValueError:
                    raise SchemaViolation(
                        f"unknown category {value!r}", prop_tok.line, prop_tok.column
                    ) from None
                if parts.requests_category is not None:
                    raise self.fail("duplicate category predicate")
                parts.requests_category = cat
                return
            if key == ("s", "cost"):
                self.expect("=")
                value = self.string_token()
                try:
                    cost = Cost(value)
                except ValueError:
                    raise SchemaViolation(
                        f"unknown cost {value!r}", prop_tok.line, prop_tok.column
                    ) from None
                if parts.cost is not None:
                    raise self.fail("duplicate cost predicate")
                parts.cost = cost
                return
            if key == ("t", "day"):
                self.parse_day(parts)
                return
            if key == ("t", "open"):
                self.expect("<=")
                minute = self.int_token("t.open")
                if parts.open_le is not None:
                    raise self.fail("duplicate t.open predicate")
                parts.open_le = minute
                return
            if key == ("t", "close"):
                self.expect(">")
                minute = self.int_token("t.close")
                if parts.close_gt is not None:
                    raise self.fail("duplicate t.close predicate")
                parts.close_gt = minute
                return
            raise SchemaViolation(
                f"property {prop!r} not valid on variable {var!r}",
                prop_tok.line,
                prop_tok.column,
            )
        raise self.fail(f"expected predicate, found {tok.text!r}")

    def parse_day(self, parts: _SubqueryParts):
        if parts.day_set is not None:
            raise self.fail("duplicate day predicate")
        tok = self.peek()
        if tok.text == "=":
            self.next()
            parts.day_set = frozenset({self.day_token()})
            return
        if tok.text == "IN":
            self.next()
            self.expect("[")
            days = {self.day_token()}
            while self.peek().text == ",":
                self.next()
                days.add(self.day_token())
            self.expect("]")
            parts.day_set = frozenset(days)
            return
        raise self.fail(f"expected = or IN after t.day, found {tok.text!r}")

    def parse_dist(self, parts: _SubqueryParts):
        if parts.dist is not None:
            raise self.fail("duplicate distance predicate")
        self.expect("dist")
        self.expect("(")
        self.expect("l")
        self.expect(",")
        lat = self.float_token("latitude")
        self.expect(",")
        lon = self.float_token("longitude")
        self.expect(")")
        self.expect("<=")
        radius_m = self.float_token("radius")
        parts.dist = (lat, lon, radius_m)

    def parse_overlaps(self, parts: _SubqueryParts):
        if parts.overlap is not None:
            raise self.fail("duplicate overlaps predicate")
        self.expect("overlaps")
        self.expect("(")
        self.expect("t")
        self.expect(",")
        start = self.int_token("overlap start")
        self.expect(",")
        end = self.int_token("overlap end")
        self.expect(")")
        parts.overlap = (start, end)

    def property_ref(self, var: str, prop: str):
        tok = self.expect_kind("name")
        if tok.text not in SCHEMA["variables"]:
            raise SchemaViolation(f"unknown variable {tok.text!r}", tok.line, tok.column)
        if tok.text != var:
            raise QuerySyntaxError(
                f"expected variable {var!r}, found {tok.text!r}", tok.line, tok.column
            )
        self.expect(".")
        ptok = self.expect_kind("name")
        if ptok.text not in SCHEMA["properties"]:
            raise SchemaViolation(f"unknown property {ptok.text!r}", ptok.line, ptok.column)
        if ptok.text != prop:
            raise QuerySyntaxError(
                f"expected property {prop!r}, found {ptok.text!r}", ptok.line, ptok.column
            )

    def string_token(self) -> str:
        tok = self.expect_kind("string")
        return tok.text[1:-1]

    def day_token(self) -> Day:
        tok = self.expect_kind("string")
        name = tok.text[1:-1]
        if name not in Day.__members__:
            raise SchemaViolation(f"unknown day {name!r}", tok.line, tok.column)
        return Day[name]

    def int_token(self, what: str) -> int:
        tok = self.expect_kind("number")
        if not re.fullmatch(r"-?\d+", tok.text):
            raise QuerySyntaxError(f"{what} must be an integer", tok.line, tok.column)
        return int(tok.text)

    def float_token(self, what: str) -> float:
        tok = self.expect_kind("number")
        return float(tok.text)

    def assemble(self, parts: list[_SubqueryParts]) -> QueryIR:
        requests = []
        shared: dict = {}
        for idx, p in enumerate(parts):
            if p.requests_category is None:
                raise QuerySyntaxError(f"subquery {idx + 1} has no category predicate", 1, 1)
            requests.append(
                ServiceRequest(p.requests_category, frozenset(p.features or set()), p.cost)
            )
            temporal = self.assemble_temporal(p, idx)
            spatial = None
            if p.dist is not None:
                lat, lon, radius_m = p.dist
                spatial = SpatialConstraint(geo.GeoPoint(lat, lon), radius_m)
            if p.ordered and spatial is None:
                raise QuerySyntaxError(
                    f"subquery {idx + 1}: ORDER BY dist requires a distance predicate", 1, 1
                )
            if p.limit is None:
                raise QuerySyntaxError(f"subquery {idx + 1} has no LIMIT", 1, 1)
            view = (temporal, spatial, p.limit, p.ordered)
            if idx == 0:
                shared["view"] = view
            elif shared["view"] != view:
                raise QuerySyntaxError(
                    "subqueries disagree on temporal/spatial/limit clauses", 1, 1
                )
        temporal, spatial, limit, _ordered = shared["view"]
        return QueryIR(tuple(requests), spatial, temporal, limit)

    def assemble_temporal(self, p: _SubqueryParts, idx: int):
        has_open_at = p.open_le is not None or p.close_gt is not None
        if has_open_at and p.overlap is not None:
            raise QuerySyntaxError(
                f"subquery {idx + 1}: open/close and overlaps predicates conflict", 1, 1
            )
        if has_open_at:
            if p.open_le is None or p.close_gt is None or p.open_le != p.close_gt:
                raise QuerySyntaxError(
                    f"subquery {idx + 1}: open-at needs t.open <= m AND t.close > m", 1, 1
                )
            if p.day_set is None or len(p.day_set) != 1:
                raise QuerySyntaxError(
                    f"subquery {idx + 1}: open-at needs a single-day predicate", 1, 1
                )
            if not (0 <= p.open_le < MINUTES_PER_DAY):
                raise QuerySyntaxError(f"subquery {idx + 1}: minute out of range", 1, 1)
            return OpenAt(next(iter(p.day_set)), p.open_le)
        if p.overlap is not None:
            if p.day_set is None:
                raise QuerySyntaxError(
                    f"subquery {idx + 1}: overlaps needs a day predicate", 1, 1
                )
            start, end = p.overlap
            if not (0 <= start < end <= MINUTES_PER_DAY):
                raise QuerySyntaxError(f"subquery {idx + 1}: bad overlap window", 1, 1)
            return OpenDuring(p.day_set, start, end)
        if p.day_set is not None:
            return OpenDuring(p.day_set, 0, MINUTES_PER_DAY)
        return AnyTime()


def parse_query(text: str) -> QueryIR:
    """Parse grammar-conformant text back to a structurally equal IR.

    Order-insensitive within WHERE conjunctions. Raises QuerySyntaxError
    with line/column on bad syntax, SchemaViolation on unknown labels,
    properties, or enum values.
    """
    return _Parser(text).parse_query()


# ---------------------------------------------------------------------------
# Execution


def execute(ir: QueryIR, graph: Graph, clock: ClockContext) -> ResultSet:
    """Run an IR against the graph.

    Per request: candidate match, temporal filter, spatial radius filter
    and distance ranking when an anchor is present, then truncation to the
    limit. Requests are independent; without an anchor the order falls
    back to (name, id) so results stay deterministic.
    """
    results = []
    for req in ir.requests:
        cands = match_candidates(graph, req.category, req.features, req.cost)
        cands = [c for c in cands if satisfies(c.hours, ir.temporal)]
        entries: list[ResultEntry] = []
        if ir.spatial is not None:
            ranked = geo.within_radius_m(
                geo.rank_with_meters(ir.spatial.point, cands), ir.spatial.radius_m
            )
            for cand, dist_m in ranked[: ir.limit]:
                entries.append(_entry(cand, ir, clock, geo.miles(dist_m)))
        else:
            cands.sort(key=lambda c: (c.organization.name, c.organization.id, c.service.id))
            for cand in cands[: ir.limit]:
                entries.append(_entry(cand, ir, clock, None))
        results.append(RequestResult(req, tuple(entries)))
    return ResultSet(tuple(results), clock.now_day)


def _entry(cand: Candidate, ir: QueryIR, clock: ClockContext, dist_mi: float | None) -> ResultEntry:
    if isinstance(ir.temporal, AnyTime):
        matched = sorted(
            (w for w in cand.hours if w.day == clock.now_day),
            key=lambda w: w.open_min,
        )
    else:
        matched = matching_windows(cand.hours, ir.temporal)
    return ResultEntry(cand.organization, cand.service, cand.location, tuple(matched), dist_mi)
