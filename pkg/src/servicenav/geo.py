"""Offline geocoding and distance ranking.

A gazetteer file maps place names (ZIP centroids, neighborhoods, streets,
landmarks) to coordinates so spatial cues resolve deterministically without
a network geocoder. Distances are great-circle meters; display miles round
to one decimal but all ordering uses the unrounded value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from servicenav import kernels

METERS_PER_MILE = 1609.344
DEFAULT_RADIUS_MI = 5.0
DEFAULT_RADIUS_M = DEFAULT_RADIUS_MI * METERS_PER_MILE

GAZETTEER_KINDS = ("zip", "neighborhood", "street", "landmark")

# Street-suffix abbreviations expanded during normalization so "W Lehigh Ave"
# and "West Lehigh Avenue" hit the same key.
_SUFFIXES = {
    "ave": "avenue",
    "st": "street",
    "rd": "road",
    "blvd": "boulevard",
}


class GazetteerError(ValueError):
    """Malformed gazetteer file."""


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude out of range: {self.lat}")
        if not (-180.0 <= self.lon <= 180.0):
            raise ValueError(f"longitude out of range: {self.lon}")


@dataclass(frozen=True)
class GazetteerEntry:
    key: str
    kind: str
    point: GeoPoint
    aliases: frozenset[str]


@dataclass(frozen=True)
class SpatialAnchor:
    """A resolved coordinate queries are filtered and ranked against."""

    point: GeoPoint
    label: str
    resolution: str  # zip | neighborhood | street | landmark | client_location


@dataclass(frozen=True)
class Unresolved:
    """Machine-readable geocoding failure."""

    reason: str  # no_client_location | unknown_place
    cue: str = ""


def normalize_place(text: str) -> str:
    """Lowercase, collapse whitespace, strip punctuation, expand suffixes."""
    words = re.sub(r"[^\w\s]", " ", text.lower()).split()
    words = [_SUFFIXES.get(w, w) for w in words]
    if words and words[0] == "the":
        words = words[1:]
    return " ".join(words)


class Gazetteer:
    """Immutable name -> coordinate lookup table."""

    def __init__(self, entries: list[GazetteerEntry]):
        self.entries = tuple(entries)
        self._by_key: dict[str, GazetteerEntry] = {}
        self._by_alias: dict[str, GazetteerEntry] = {}
        for e in self.entries:
            if e.key in self._by_key or e.key in self._by_alias:
                raise GazetteerError(f"duplicate gazetteer key: {e.key!r}")
            self._by_key[e.key] = e
        for e in self.entries:
            for a in e.aliases:
                if a in self._by_key or a in self._by_alias:
                    raise GazetteerError(f"duplicate gazetteer alias: {a!r}")
                self._by_alias[a] = e

    @classmethod
    def load(cls, path: str | Path) -> "Gazetteer":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        if not isinstance(raw, list):
            raise GazetteerError("gazetteer file must be a JSON array")
        entries = []
        for i, rec in enumerate(raw):
            try:
                kind = rec["kind"]
                if kind not in GAZETTEER_KINDS:
                    raise GazetteerError(f"entry {i}: unknown kind {kind!r}")
                entries.append(
                    GazetteerEntry(
                        key=normalize_place(rec["key"]),
                        kind=kind,
                        point=GeoPoint(float(rec["lat"]), float(rec["lon"])),
                        aliases=frozenset(normalize_place(a) for a in rec.get("aliases", [])),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise GazetteerError(f"entry {i}: {exc}") from exc
        return cls(entries)

    def lookup(self, name: str) -> GazetteerEntry | None:
        """Exact-key lookup first, then aliases; input is normalized."""
        key = normalize_place(name)
        return self._by_key.get(key) or self._by_alias.get(key)

    def names(self) -> frozenset[str]:
        """Every normalized key and alias (used by the cue extractor)."""
        return frozenset(self._by_key) | frozenset(self._by_alias)


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle meters between two points (mean Earth radius sphere)."""
    return kernels.haversine_m(a.lat, a.lon, b.lat, b.lon)


def miles(meters: float) -> float:
    return meters / METERS_PER_MILE


_PROXIMITY_CUES = frozenset(
    ["near me", "nearby", "close to me", "around me", "walking distance", "within walking distance", "around here", "close by"]
)


def resolve_anchor(
    cue: str,
    kind_hint: str,
    client_location: GeoPoint | None,
    gaz: Gazetteer,
) -> SpatialAnchor | Unresolved:
    """Resolve one spatial cue to an anchor.

    ZIP cues hit zip-centroid entries, proximity cues hit the client's own
    coordinates, everything else goes through normalized exact-then-alias
    gazetteer lookup.
    """
    norm = normalize_place(cue)
    if kind_hint == "proximity" or norm in _PROXIMITY_CUES:
        if client_location is None:
            return Unresolved("no_client_location", cue=norm)
        return SpatialAnchor(client_location, "your location", "client_location")

    entry = gaz.lookup(norm)
    if entry is None:
        return Unresolved("unknown_place", cue=norm)
    return SpatialAnchor(entry.point, entry.key, entry.kind)


def client_anchor(point: GeoPoint) -> SpatialAnchor:
    return SpatialAnchor(point, "your location", "client_location")


def rank_with_meters(point: GeoPoint, candidates: list) -> list[tuple]:
    """(candidate, meters) pairs sorted nearest first.

    Each candidate must expose .location.point, .organization.name and
    .organization.id; ties on exact distance break by name then id so the
    order is total.
    """
    if not candidates:
        return []
    lats = [c.location.point.lat for c in candidates]
    lons = [c.location.point.lon for c in candidates]
    dists = kernels.haversine_many(point.lat, point.lon, lats, lons)
    annotated = list(zip(candidates, dists))
    annotated.sort(key=lambda pair: _order_key(pair[0], pair[1]))
    return annotated


def _order_key(candidate, distance):
    svc = getattr(candidate, "service", None)
    return (
        distance,
        candidate.organization.name,
        candidate.organization.id,
        svc.id if svc is not None else 0,
    )


def rank_by_distance(anchor: SpatialAnchor, candidates: list) -> list[tuple]:
    """Annotate candidates with miles from the anchor and sort.

    Sorting always happens on the unrounded distance; only rendering may
    round. Returns (candidate, miles) pairs, nearest first.
    """
    return [(c, miles(m)) for c, m in rank_with_meters(anchor.point, candidates)]


def within_radius_m(ranked_m: list[tuple], radius_m: float) -> list[tuple]:
    """Drop (candidate, meters) pairs beyond the search radius."""
    return [pair for pair in ranked_m if pair[1] <= radius_m]
