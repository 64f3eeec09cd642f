"""Distance, gazetteer resolution, and ranking."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from servicenav import geo
from servicenav.geo import (
    GazetteerEntry,
    Gazetteer,
    GazetteerError,
    GeoPoint,
    SpatialAnchor,
    Unresolved,
    haversine_m,
    normalize_place,
    rank_by_distance,
    resolve_anchor,
)

from .oracles import haversine_reference

# Independent great-circle value for the City Hall pair, frozen from the
# Vincenty-form oracle before the implementation existed.
CITY_HALL = GeoPoint(39.9526, -75.1652)
NEARBY = GeoPoint(39.9800, -75.1500)
CITY_HALL_TO_NEARBY_M = 3310.6851926


class TestHaversine:
    def test_identity(self):
        assert haversine_m(CITY_HALL, CITY_HALL) == 0.0

    def test_city_hall_pair_within_tenth_percent(self):
        got = haversine_m(CITY_HALL, NEARBY)
        assert got == pytest.approx(CITY_HALL_TO_NEARBY_M, rel=1e-3)

    def test_symmetry_100_random_pairs(self):
        rng = random.Random(42)
        for _ in range(100):
            a = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            b = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            assert haversine_m(a, b) == haversine_m(b, a)

    def test_matches_reference_formula(self):
        rng = random.Random(7)
        for _ in range(200):
            a = GeoPoint(rng.uniform(-89, 89), rng.uniform(-180, 180))
            b = GeoPoint(rng.uniform(-89, 89), rng.uniform(-180, 180))
            ref = haversine_reference(a.lat, a.lon, b.lat, b.lon)
            assert haversine_m(a, b) == pytest.approx(ref, rel=1e-9, abs=1e-6)

    def test_triangle_inequality(self):
        rng = random.Random(99)
        for _ in range(100):
            pts = [GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180)) for _ in range(3)]
            ab = haversine_m(pts[0], pts[1])
            bc = haversine_m(pts[1], pts[2])
            ac = haversine_m(pts[0], pts[2])
            assert ac <= ab + bc + 1e-6 * max(ab + bc, 1.0)

    @given(
        st.floats(min_value=-90, max_value=90, allow_nan=False),
        st.floats(min_value=-180, max_value=180, allow_nan=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_zero_iff_identical(self, lat, lon):
        p = GeoPoint(lat, lon)
        assert haversine_m(p, p) == 0.0

    def test_distinct_points_nonzero(self):
        # Points separated by more than the 1e-9 degree tolerance must not
        # collapse to zero distance.
        a = GeoPoint(39.0, -75.0)
        for db in (1e-8, 1e-6, 1e-3):
            assert haversine_m(a, GeoPoint(39.0 + db, -75.0)) > 0.0
            assert haversine_m(a, GeoPoint(39.0, -75.0 + db)) > 0.0


class TestGeoPoint:
    @pytest.mark.parametrize("lat, lon", [(91, 0), (-91, 0), (0, 181), (0, -181)])
    def test_rejects_out_of_range(self, lat, lon):
        with pytest.raises(ValueError):
            GeoPoint(lat, lon)


class TestNormalizePlace:
    @pytest.mark.parametrize(
        "raw, expected",
        [
            ("  West   Lehigh  Avenue ", "west lehigh avenue"),
            ("W Lehigh Ave", "w lehigh avenue"),
            ("the City Center", "city center"),
            ("City-Hall!", "city hall"),
        ],
    )
    def test_normalization(self, raw, expected):
        assert normalize_place(raw) == expected


class TestGazetteer:
    def test_duplicate_keys_rejected(self):
        e = GazetteerEntry("city hall", "landmark", CITY_HALL, frozenset())
        with pytest.raises(GazetteerError):
            Gazetteer([e, e])

    def test_alias_lookup(self, gazetteer):
        entry = gazetteer.lookup("downtown")
        assert entry is not None and entry.key == "center city"

    def test_fixture_coverage(self, gazetteer):
        assert gazetteer.lookup("city hall").kind == "landmark"
        assert gazetteer.lookup("west lehigh avenue").kind == "street"
        for z in ("19104", "19124", "19133"):
            assert gazetteer.lookup(z).kind == "zip"
        neighborhoods = [e for e in gazetteer.entries if e.kind == "neighborhood"]
        assert len(neighborhoods) >= 3


class TestResolveAnchor:
    def test_landmark(self, gazetteer):
        anchor = resolve_anchor("near City Hall".replace("near ", ""), "name", None, gazetteer)
        assert isinstance(anchor, SpatialAnchor)
        assert anchor.resolution == "landmark"
        assert anchor.point == CITY_HALL

    def test_near_me_without_location(self, gazetteer):
        result = resolve_anchor("near me", "proximity", None, gazetteer)
        assert isinstance(result, Unresolved)
        assert result.reason == "no_client_location"

    def test_near_me_with_location(self, gazetteer):
        anchor = resolve_anchor("near me", "proximity", CITY_HALL, gazetteer)
        assert isinstance(anchor, SpatialAnchor)
        assert anchor.resolution == "client_location"

    def test_street_distance_rounds_to_tenth_mile(self, gazetteer, graph):
        anchor = resolve_anchor("West Lehigh Avenue", "street", None, gazetteer)
        assert anchor.resolution == "street"
        library_loc = next(
            loc for loc in graph.locations if loc.street == "West Lehigh Avenue"
        )
        miles = geo.miles(haversine_m(anchor.point, library_loc.point))
        assert f"{miles:.1f}" == "0.1"

    def test_unknown_place(self, gazetteer):
        result = resolve_anchor("nowhereville 99999", "name", None, gazetteer)
        assert isinstance(result, Unresolved)
        assert result.reason == "unknown_place"

    def test_case_and_whitespace_insensitive(self, gazetteer):
        a = resolve_anchor("CITY  HALL", "name", None, gazetteer)
        b = resolve_anchor("city hall", "name", None, gazetteer)
        assert a == b


class _Org:
    def __init__(self, id, name):
        self.id = id
        self.name = name


class _Cand:
    def __init__(self, id, name, point):
        self.organization = _Org(id, name)
        self.location = type("L", (), {"point": point})()


class TestRanking:
    def test_empty(self):
        anchor = SpatialAnchor(CITY_HALL, "city hall", "landmark")
        assert rank_by_distance(anchor, []) == []

    def test_sorted_by_unrounded_distance(self):
        anchor = SpatialAnchor(CITY_HALL, "city hall", "landmark")
        far = _Cand(1, "Far", GeoPoint(39.9810, -75.1652))      # ~2.0 mi
        mid = _Cand(2, "Mid", GeoPoint(39.9598, -75.1652))      # ~0.5 mi
        near = _Cand(3, "Near", GeoPoint(39.9540, -75.1652))    # ~0.1 mi
        ranked = rank_by_distance(anchor, [far, mid, near])
        assert [c.organization.name for c, _ in ranked] == ["Near", "Mid", "Far"]
        miles_list = [m for _, m in ranked]
        assert miles_list == sorted(miles_list)
        assert [f"{m:.1f}" for m in miles_list] == ["0.1", "0.5", "2.0"]

    def test_tie_broken_alphabetically_then_id(self):
        anchor = SpatialAnchor(CITY_HALL, "city hall", "landmark")
        p = GeoPoint(39.9600, -75.1600)
        b = _Cand(5, "Beta House", p)
        a = _Cand(9, "Alpha House", p)
        a2 = _Cand(3, "Alpha House", p)
        ranked = rank_by_distance(anchor, [b, a, a2])
        assert [(c.organization.name, c.organization.id) for c, _ in ranked] == [
            ("Alpha House", 3),
            ("Alpha House", 9),
            ("Beta House", 5),
        ]

    def test_permutation_of_input(self):
        rng = random.Random(5)
        anchor = SpatialAnchor(CITY_HALL, "city hall", "landmark")
        cands = [
            _Cand(i, f"Org{i}", GeoPoint(rng.uniform(39.9, 40.0), rng.uniform(-75.2, -75.1)))
            for i in range(20)
        ]
        ranked = rank_by_distance(anchor, cands)
        assert sorted(c.organization.id for c, _ in ranked) == list(range(20))


class TestKernelParity:
    def test_backends_agree(self):
        from servicenav import _pykernels, kernels

        rng = random.Random(11)
        pts = [(rng.uniform(-90, 90), rng.uniform(-180, 180)) for _ in range(50)]
        for (la1, lo1), (la2, lo2) in zip(pts, pts[1:]):
            fast = kernels.haversine_m(la1, lo1, la2, lo2)
            pure = _pykernels.haversine_m(la1, lo1, la2, lo2)
            assert fast == pytest.approx(pure, rel=1e-12, abs=1e-9)

    def test_many_matches_scalar(self):
        from servicenav import kernels

        rng = random.Random(12)
        lats = [rng.uniform(-90, 90) for _ in range(30)]
        lons = [rng.uniform(-180, 180) for _ in range(30)]
        many = kernels.haversine_many(0.0, 0.0, lats, lons)
        for i in range(30):
            assert many[i] == kernels.haversine_m(0.0, 0.0, lats[i], lons[i])

    def test_length_mismatch(self):
        from servicenav import kernels

        with pytest.raises(ValueError):
            kernels.haversine_many(0.0, 0.0, [1.0], [])
