"""Query text: compile/parse round-trips, schema closure, execution."""

from __future__ import annotations

import random
import re

import pytest

from servicenav.geo import GeoPoint
from servicenav.hours import AnyTime, Day, OpenAt, OpenDuring
from servicenav.ir import QueryIR, ServiceRequest, SpatialConstraint
from servicenav.kg import Category, Cost
from servicenav.qlang import (
    PATTERN_TEXT,
    QuerySyntaxError,
    SCHEMA,
    SchemaViolation,
    compile_query,
    execute,
    parse_query,
)

from .gen import random_graph, random_ir
from .oracles import naive_execute

LIBRARY_IR = QueryIR(
    requests=(ServiceRequest(Category.library, frozenset({"wifi"}), Cost.free),),
    spatial=SpatialConstraint(GeoPoint(39.9933, -75.13852)),
    temporal=OpenDuring(frozenset({Day.Tue}), 0, 1440),
    limit=3,
)


class TestCompile:
    def test_library_ir_text_fragments(self):
        text = compile_query(LIBRARY_IR).text
        assert "MATCH (o:Organization)-[:OFFERS]->(s:Service)" in text
        assert 's.category = "library"' in text
        assert '"wifi" IN s.features' in text
        assert 's.cost = "free"' in text
        assert 't.day = "Tue"' in text
        assert "ORDER BY dist ASC" in text
        assert "LIMIT 3" in text

    def test_no_constraints_no_predicates(self):
        ir = QueryIR((ServiceRequest(Category.food),), None, AnyTime(), 3)
        text = compile_query(ir).text
        assert "t.day" not in text
        assert "overlaps" not in text
        assert "dist(" not in text
        assert "ORDER BY" not in text

    def test_deterministic_bytes(self):
        assert compile_query(LIBRARY_IR).text == compile_query(LIBRARY_IR).text

    def test_canonical_predicate_order(self):
        ir = QueryIR(
            (ServiceRequest(Category.library, frozenset({"wifi", "printing"}), Cost.free),),
            SpatialConstraint(GeoPoint(39.95, -75.16)),
            OpenAt(Day.Mon, 600),
            2,
        )
        text = compile_query(ir).text
        positions = [
            text.index('s.category = "library"'),
            text.index('"printing" IN s.features'),
            text.index('"wifi" IN s.features'),
            text.index('s.cost = "free"'),
            text.index('t.day = "Mon"'),
            text.index("t.open <= 600"),
            text.index("dist(l,"),
        ]
        assert positions == sorted(positions)

    def test_digest_matches_source_ir(self):
        compiled = compile_query(LIBRARY_IR)
        assert compiled.source_ir_digest == LIBRARY_IR.digest()

    def test_schema_closure(self):
        rng = random.Random(55)
        ident = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
        keywords = {"MATCH", "WHERE", "RETURN", "AND", "IN", "ORDER", "BY", "ASC", "LIMIT"}
        allowed = (
            SCHEMA["labels"] | SCHEMA["edges"] | SCHEMA["properties"]
            | SCHEMA["functions"] | SCHEMA["variables"] | keywords
        )
        day_names = {d.name for d in Day}
        for _ in range(100):
            compiled = compile_query(random_ir(rng, wide_geo=True))
            stripped = re.sub(r'"[^"]*"', '""', compiled.text)
            for token in ident.findall(stripped):
                if token in ("e", "E"):  # exponent marker in float literals
                    continue
                assert token in allowed or token in day_names, token


class TestParse:
    def test_round_trip_fig3(self):
        assert parse_query(compile_query(LIBRARY_IR).text) == LIBRARY_IR

    def test_unknown_label_is_schema_violation(self):
        with pytest.raises(SchemaViolation) as exc:
            parse_query(
                compile_query(LIBRARY_IR).text.replace("(o:Organization)", "(o:Org)")
            )
        assert "Org" in str(exc.value)

    def test_unknown_property(self):
        text = compile_query(LIBRARY_IR).text.replace("s.cost", "s.price")
        with pytest.raises(SchemaViolation):
            parse_query(text)

    def test_syntax_error_has_position(self):
        with pytest.raises(QuerySyntaxError) as exc:
            parse_query("MATCH MATCH")
        assert exc.value.line == 1
        assert exc.value.column > 1

    def test_garbage_character(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("MATCH @")

    def test_where_order_insensitive(self):
        base = compile_query(LIBRARY_IR).text
        m = re.search(r"WHERE (.*) RETURN", base)
        preds = m.group(1).split(" AND ")
        rng = random.Random(9)
        for _ in range(20):
            shuffled = preds[:]
            rng.shuffle(shuffled)
            text = base[: m.start(1)] + " AND ".join(shuffled) + base[m.end(1) :]
            assert parse_query(text) == LIBRARY_IR

    def test_missing_category_rejected(self):
        text = (
            f"MATCH {PATTERN_TEXT} WHERE \"wifi\" IN s.features RETURN o, s, l, t LIMIT 3"
        )
        with pytest.raises(QuerySyntaxError) as exc:
            parse_query(text)
        assert "category" in str(exc.value)

    def test_round_trip_property_1000(self):
        rng = random.Random(4242)
        for i in range(1000):
            ir = random_ir(rng, wide_geo=True)
            compiled = compile_query(ir)
            back = parse_query(compiled.text)
            assert back == ir, f"round-trip failure at case {i}: {compiled.text}"


class TestExecute:
    def test_library_ir_on_fixture(self, graph, tue_noon):
        result = execute(LIBRARY_IR, graph, tue_noon)
        assert len(result.results) == 1
        entries = result.results[0].entries
        assert len(entries) == 1
        entry = entries[0]
        assert entry.organization.name == "Lillian Marrero Library"
        assert entry.organization.phone == "(215) 685-9794"
        assert entry.matched_windows[0].open_min == 660
        assert entry.matched_windows[0].close_min == 1140
        assert f"{entry.distance_mi:.1f}" == "0.1"

    def test_shelter_weekend_evening_empty_when_nine_to_five(self, tue_noon):
        from .conftest import minimal_org, write_dataset
        import tempfile, pathlib

        record = minimal_org(name="Day Shelter")
        record["services"] = [
            {"category": "shelter", "label": "Beds", "cost": "Free", "features": [],
             "eligibility": ""}
        ]
        record["hours"] = [
            {"day": d, "open": "09:00", "close": "17:00"}
            for d in ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
        ]
        from servicenav.kg import load_dataset

        with tempfile.TemporaryDirectory() as td:
            g = load_dataset(write_dataset(pathlib.Path(td), [record]))
        ir = QueryIR(
            (ServiceRequest(Category.shelter),),
            None,
            OpenDuring(frozenset({Day.Sat, Day.Sun}), 1200, 1440),
            3,
        )
        result = execute(ir, g, tue_noon)
        assert result.results[0].entries == ()

    def test_three_requests_independent(self, graph, tue_noon):
        ir = QueryIR(
            (
                ServiceRequest(Category.food),
                ServiceRequest(Category.library, frozenset({"printing"})),
                ServiceRequest(Category.shelter),
            ),
            None,
            AnyTime(),
            3,
        )
        result = execute(ir, graph, tue_noon)
        assert len(result.results) == 3
        assert all(r.entries for r in result.results)
        cats = [r.request.category for r in result.results]
        assert cats == [Category.food, Category.library, Category.shelter]

    def test_limit_truncates(self, graph, tue_noon):
        ir = QueryIR((ServiceRequest(Category.food),), None, AnyTime(), 1)
        result = execute(ir, graph, tue_noon)
        assert len(result.results[0].entries) == 1

    def test_oracle_equivalence_seeded(self, tue_noon):
        rng = random.Random(31337)
        for _ in range(60):
            g = random_graph(rng, max_orgs=25)
            ir = random_ir(rng)
            got = execute(ir, g, tue_noon)
            expected = naive_execute(ir, g, tue_noon)
            for req_result, exp_rows in zip(got.results, expected):
                rows = [
                    (e.organization.id, e.service.id)
                    for e in req_result.entries
                ]
                assert rows == [(org_id, svc_id) for org_id, svc_id, _d in exp_rows]

    def test_repeat_execution_identical(self, graph, tue_noon):
        a = execute(LIBRARY_IR, graph, tue_noon)
        b = execute(LIBRARY_IR, graph, tue_noon)
        assert a == b
