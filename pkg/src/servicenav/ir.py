"""The structured representation of one user intent.

A QueryIR is what survives the trip through the compiled query text, so it
carries exactly the grammar-representable content: service requests, an
optional spatial filter (point + radius), a temporal constraint, and a
result limit. Resolved-anchor metadata (display label, how the place was
resolved) travels alongside in the pipeline, not inside the IR.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum

from servicenav.geo import DEFAULT_RADIUS_M, GeoPoint
from servicenav.hours import AnyTime, OpenAt, OpenDuring, TemporalConstraint
from servicenav.kg import Category, Cost

DEFAULT_LIMIT = 3


@dataclass(frozen=True)
class ServiceRequest:
    category: Category
    features: frozenset[str] = frozenset()
    cost: Cost | None = None


@dataclass(frozen=True)
class SpatialConstraint:
    """Filter-and-rank target: everything within radius_m meters of point.

    Meters, not miles, because that is the unit the compiled query text
    carries; storing the same number the text round-trips keeps equality
    exact. Display code converts to miles.
    """

    point: GeoPoint
    radius_m: float = DEFAULT_RADIUS_M

    def __post_init__(self):
        if self.radius_m <= 0:
            raise ValueError(f"radius must be positive: {self.radius_m}")


@dataclass(frozen=True)
class QueryIR:
    requests: tuple[ServiceRequest, ...]
    spatial: SpatialConstraint | None = None
    temporal: TemporalConstraint = field(default_factory=AnyTime)
    limit: int = DEFAULT_LIMIT

    def __post_init__(self):
        if not self.requests:
            raise ValueError("requests must be nonempty")
        if self.limit < 1:
            raise ValueError(f"limit must be >= 1: {self.limit}")

    def with_requests(self, requests: tuple[ServiceRequest, ...]) -> "QueryIR":
        return replace(self, requests=requests)

    def canonical(self) -> dict:
        """Canonical JSON-able form: stable field order, sorted collections."""
        return {
            "requests": [
                {
                    "category": r.category.value,
                    "features": sorted(r.features),
                    "cost": r.cost.value if r.cost else None,
                }
                for r in self.requests
            ],
            "spatial": (
                {
                    "lat": self.spatial.point.lat,
                    "lon": self.spatial.point.lon,
                    "radius_m": self.spatial.radius_m,
                }
                if self.spatial
                else None
            ),
            "temporal": _temporal_canonical(self.temporal),
            "limit": self.limit,
        }

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _temporal_canonical(t: TemporalConstraint) -> dict:
    if isinstance(t, AnyTime):
        return {"kind": "any_time"}
    if isinstance(t, OpenAt):
        return {"kind": "open_at", "day": t.day.name, "minute": t.minute}
    if isinstance(t, OpenDuring):
        return {
            "kind": "open_during",
            "days": sorted(d.name for d in t.days),
            "start": t.start_min,
            "end": t.end_min,
        }
    raise TypeError(f"not a temporal constraint: {t!r}")


class FallbackReason(Enum):
    out_of_scope = "out_of_scope"
    unresolved_location = "unresolved_location"
    no_cues = "no_cues"
    unrecognized_temporal = "unrecognized_temporal"


SUPPORTED_DOMAINS_TEXT = (
    "Food Banks, Mental Health Services, Shelters, Public Libraries, "
    "and Social Security offices"
)


@dataclass(frozen=True)
class Fallback:
    """In-band structured refusal that keeps the conversation going."""

    reason: FallbackReason
    user_message: str

    def __post_init__(self):
        if not self.user_message:
            raise ValueError("user_message must be nonempty")


def out_of_scope_fallback() -> Fallback:
    return Fallback(
        FallbackReason.out_of_scope,
        "I can only help with questions about "
        f"{SUPPORTED_DOMAINS_TEXT} in Philadelphia. "
        "Try asking about one of those.",
    )


def unresolved_location_fallback(place: str) -> Fallback:
    return Fallback(
        FallbackReason.unresolved_location,
        f"I couldn't find the place \"{place}\". Try a Philadelphia ZIP code, "
        "neighborhood, street, or landmark.",
    )


def unrecognized_temporal_fallback(cue: str) -> Fallback:
    return Fallback(
        FallbackReason.unrecognized_temporal,
        f"I didn't understand the time \"{cue}\". Try \"open now\", a day of "
        "the week, \"weekends\", or \"after 8pm\".",
    )


def no_cues_fallback() -> Fallback:
    return Fallback(
        FallbackReason.no_cues,
        "I don't have an earlier search to build on. Please ask a full "
        "question, for example \"Where can I get food near City Hall?\".",
    )
