"""Deterministic cue extraction and query normalization.

A lexicon/pattern extractor stands in for model-based keyword extraction:
same interface, no hallucination, fully testable. The lexicon lives in a
JSON data file so community partners can extend vocabulary without code
changes. Everything in here is a pure function of (text, lexicon,
gazetteer names, clock, client location).
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from servicenav import geo
from servicenav.geo import Gazetteer, GeoPoint, SpatialAnchor, Unresolved
from servicenav.hours import AnyTime, ClockContext, UnrecognizedTemporalCue, resolve_now
from servicenav.ir import (
    DEFAULT_LIMIT,
    Fallback,
    QueryIR,
    ServiceRequest,
    SpatialConstraint,
    no_cues_fallback,
    out_of_scope_fallback,
    unrecognized_temporal_fallback,
    unresolved_location_fallback,
)
from servicenav.kg import Category, Cost

logger = logging.getLogger(__name__)

MAX_QUERY_CHARS = 2000

FOLLOWUP_NONE = "none"
FOLLOWUP_CATEGORY_SWITCH = "category_switch"
FOLLOWUP_SELECTOR = "selector"


class LexiconError(ValueError):
    """Malformed lexicon file."""


@dataclass(frozen=True)
class Lexicon:
    categories: dict[str, tuple[str, ...]]
    features: dict[str, tuple[str, ...]]
    costs: dict[str, tuple[str, ...]]
    followups: dict[str, tuple[str, ...]]

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        try:
            categories = {k: tuple(v) for k, v in raw["categories"].items()}
            features = {k: tuple(v) for k, v in raw["features"].items()}
            costs = {k: tuple(v) for k, v in raw.get("costs", {}).items()}
            followups = {k: tuple(v) for k, v in raw["followups"].items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise LexiconError(f"bad lexicon file {path}: {exc}") from exc
        for name in categories:
            if name not in Category.__members__:
                raise LexiconError(f"unknown category {name!r} in lexicon")
        missing = set(Category.__members__) - set(categories)
        if missing:
            raise LexiconError(f"lexicon missing categories: {sorted(missing)}")
        return cls(categories, features, costs, followups)


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    kind: str  # category | feature | cost | spatial | temporal | followup


@dataclass(frozen=True)
class ServiceCue:
    category: Category
    features: frozenset[str]
    cost: Cost | None


@dataclass(frozen=True)
class ExtractedCues:
    service_cues: tuple[ServiceCue, ...]
    spatial_cue: tuple[str, str] | None  # (normalized text, kind hint)
    temporal_cue: str | None
    followup_marker: str
    matched_spans: tuple[Span, ...]


@dataclass(frozen=True)
class RawQuery:
    text: str
    session_id: str
    client_location: GeoPoint | None
    clock: ClockContext

    def __post_init__(self):
        if len(self.text) > MAX_QUERY_CHARS:
            raise ValueError(f"query text exceeds {MAX_QUERY_CHARS} characters")
        if not self.session_id:
            raise ValueError("session_id must be nonempty")


@dataclass(frozen=True)
class Normalized:
    """A normalize() success: the IR plus resolved-anchor metadata.

    The anchor's label and resolution kind are not part of the IR (they do
    not survive query-text round-trips) but the pipeline needs them for
    explanations and privacy-aware logging.
    """

    ir: QueryIR
    anchor: SpatialAnchor | None
    notes: tuple[str, ...] = ()


def _alternation(phrases: Iterable[str]) -> str:
    """Longest-first alternation with flexible inner whitespace."""
    parts = sorted(set(phrases), key=len, reverse=True)
    escaped = [re.escape(p).replace(r"\ ", r"\s+") for p in parts]
    return "|".join(escaped)


_TIME_PART = r"\d{1,2}(?::\d{2})?\s*(?:am|pm)"
_DAYS_PART = (
    r"(?:mondays?|tuesdays?|wednesdays?|thursdays?|fridays?|saturdays?|sundays?"
    r"|weekends?|the\s+weekend)"
)
_TEMPORAL_RE = re.compile(
    rf"""\b(?:
      (?:open\s+)?(?:right\s+now|earlier\s+today|now|today|tonight)
      |(?:after|before)\s+{_TIME_PART}(?:\s+on\s+{_DAYS_PART})?
      |(?:on\s+|this\s+)?{_DAYS_PART}(?:\s+(?:after|before)\s+{_TIME_PART})?
    )\b""",
    re.IGNORECASE | re.VERBOSE,
)

_ZIP_RE = re.compile(r"\b\d{5}\b")
_PROXIMITY_RE = re.compile(
    r"\b(?:near\s+me|nearby|close\s+to\s+me|close\s+by|around\s+me"
    r"|(?:within\s+)?walking\s+distance|around\s+here)\b",
    re.IGNORECASE,
)
_NEAR_STOP = (
    r"open|on|at|after|before|today|tonight|now|right|this|earlier|that|with|"
    r"for|where|when|and|or|please|to"
)
_NEAR_RE = re.compile(
    rf"\b(?:near|close\s+to|next\s+to)\s+(?:the\s+)?"
    rf"((?:[\w'.-]+(?:\s+|(?=\W)|$)){{1,4}}?)"
    rf"(?=$|[,.?!;:]|\s*(?:{_NEAR_STOP})\b)",
    re.IGNORECASE,
)
_STREET_RE = re.compile(
    r"\bon\s+((?:[a-z][\w'.-]*\s+){1,4}(?:avenue|ave|street|st|road|rd|boulevard|blvd))\b",
    re.IGNORECASE,
)


class Extractor:
    """Compiled lexicon/pattern matcher for one lexicon + gazetteer pair."""

    def __init__(self, lexicon: Lexicon, gazetteer_names: Iterable[str] = ()):
        self.lexicon = lexicon
        self._category_re, self._category_of = _family_regex(lexicon.categories)
        self._feature_re, self._feature_of = _family_regex(lexicon.features)
        self._cost_re, self._cost_of = _family_regex(lexicon.costs)
        names = [n for n in gazetteer_names if n]
        self._names_set = frozenset(geo.normalize_place(n) for n in names)
        self._names_re = (
            re.compile(rf"\b(?:{_alternation(names)})\b", re.IGNORECASE) if names else None
        )
        switch = lexicon.followups.get("category_switch", ())
        selector = lexicon.followups.get("selector", ())
        self._switch_re = (
            re.compile(rf"\b(?:{_alternation(switch)})\b", re.IGNORECASE) if switch else None
        )
        self._selector_re = (
            re.compile(rf"\b(?:{_alternation(selector)})\b", re.IGNORECASE) if selector else None
        )

    def extract_cues(self, text: str) -> ExtractedCues:
        """Deterministic cue extraction; absence of cues is representable."""
        spans: list[Span] = []

        cat_hits = []  # (start, end, category)
        for m in self._category_re.finditer(text) if self._category_re else ():
            cat_hits.append((m.start(), m.end(), Category[self._category_of(m)]))
            spans.append(Span(m.start(), m.end(), "category"))

        feat_hits = []
        for m in self._feature_re.finditer(text) if self._feature_re else ():
            feat_hits.append((m.start(), m.end(), self._feature_of(m)))
            spans.append(Span(m.start(), m.end(), "feature"))

        cost_hits = []
        for m in self._cost_re.finditer(text) if self._cost_re else ():
            cost_hits.append((m.start(), m.end(), Cost(self._cost_of(m))))
            spans.append(Span(m.start(), m.end(), "cost"))

        # One service cue per distinct category, anchored at first occurrence.
        cues: list[tuple[int, Category]] = []
        seen: set[Category] = set()
        for start, _end, cat in cat_hits:
            if cat not in seen:
                seen.add(cat)
                cues.append((start, cat))

        features_by_cue: dict[int, set[str]] = {i: set() for i in range(len(cues))}
        cost_by_cue: dict[int, Cost | None] = {i: None for i in range(len(cues))}
        if cues:
            for start, _end, tag in feat_hits:
                features_by_cue[_nearest_cue(cues, start)].add(tag)
            for start, _end, cost in cost_hits:
                cost_by_cue[_nearest_cue(cues, start)] = cost

        service_cues = tuple(
            ServiceCue(cat, frozenset(features_by_cue[i]), cost_by_cue[i])
            for i, (_start, cat) in enumerate(cues)
        )

        spatial_cue, spatial_span = self._find_spatial(text)
        if spatial_span:
            spans.append(spatial_span)

        temporal_cue = None
        tm = _TEMPORAL_RE.search(text)
        if tm:
            temporal_cue = tm.group(0)
            spans.append(Span(tm.start(), tm.end(), "temporal"))

        marker = FOLLOWUP_NONE
        if self._selector_re and (fm := self._selector_re.search(text)):
            marker = FOLLOWUP_SELECTOR
            spans.append(Span(fm.start(), fm.end(), "followup"))
        elif self._switch_re and (fm := self._switch_re.search(text)):
            marker = FOLLOWUP_CATEGORY_SWITCH
            spans.append(Span(fm.start(), fm.end(), "followup"))

        spans.sort(key=lambda s: (s.start, s.end, s.kind))
        return ExtractedCues(service_cues, spatial_cue, temporal_cue, marker, tuple(spans))

    def _find_spatial(self, text: str) -> tuple[tuple[str, str] | None, Span | None]:
        # (start, priority, -length, cue, hint, span); earliest match wins,
        # specific patterns beat the bare-name scan at the same offset.
        candidates = []
        for m in _PROXIMITY_RE.finditer(text):
            candidates.append((m.start(), 0, -len(m.group(0)), m.group(0), "proximity", m.span()))
        for m in _NEAR_RE.finditer(text):
            cue = self._trim_to_known_place(m.group(1).strip())
            if cue:
                candidates.append((m.start(), 1, -len(cue), cue, "name", m.span()))
        for m in _STREET_RE.finditer(text):
            candidates.append((m.start(), 2, -len(m.group(1)), m.group(1), "street", m.span()))
        for m in _ZIP_RE.finditer(text):
            candidates.append((m.start(), 3, -5, m.group(0), "zip", m.span()))
        if self._names_re:
            for m in self._names_re.finditer(text):
                candidates.append((m.start(), 4, -len(m.group(0)), m.group(0), "name", m.span()))
        if not candidates:
            return None, None
        candidates.sort()
        _start, _prio, _neg, cue, hint, (s, e) = candidates[0]
        return (geo.normalize_place(cue), hint), Span(s, e, "spatial")

    def _trim_to_known_place(self, capture: str) -> str:
        """Longest gazetteer-known prefix of a near-phrase capture.

        Frees the capture regex from knowing every possible trailing word;
        an entirely unknown capture stays intact so resolution can fail
        loudly with the place name the user actually gave.
        """
        words = geo.normalize_place(capture).split()
        for end in range(len(words), 0, -1):
            prefix = " ".join(words[:end])
            if prefix in self._names_set:
                return prefix
        return capture


def _family_regex(family: dict[str, tuple[str, ...]]):
    """One named-group regex per lexicon family; returns (regex, resolver)."""
    groups = []
    for name, synonyms in family.items():
        if synonyms:
            groups.append(f"(?P<{name}>{_alternation(synonyms)})")
    if not groups:
        return None, None
    rx = re.compile(r"\b(?:" + "|".join(groups) + r")\b", re.IGNORECASE)

    def resolver(m: re.Match) -> str:
        return m.lastgroup

    return rx, resolver


def _nearest_cue(cues: list[tuple[int, Category]], pos: int) -> int:
    """Index of the category cue nearest to pos; preceding wins ties."""
    return min(
        range(len(cues)),
        key=lambda i: (abs(cues[i][0] - pos), 0 if cues[i][0] <= pos else 1),
    )


def classify_relevance(cues: ExtractedCues) -> bool:
    """In scope iff at least one service cue was extracted."""
    return len(cues.service_cues) >= 1


def normalize(
    cues: ExtractedCues,
    raw: RawQuery,
    gaz: Gazetteer,
    *,
    default_limit: int = DEFAULT_LIMIT,
    default_radius_m: float = geo.DEFAULT_RADIUS_M,
) -> Normalized | Fallback:
    """Turn extracted cues into a QueryIR, or a structured fallback.

    Failures are values, never exceptions: the conversation continuing is
    the success mode.
    """
    if not classify_relevance(cues):
        return out_of_scope_fallback()

    notes: list[str] = []
    anchor: SpatialAnchor | None = None
    if cues.spatial_cue is not None:
        cue_text, hint = cues.spatial_cue
        resolved = geo.resolve_anchor(cue_text, hint, raw.client_location, gaz)
        if isinstance(resolved, Unresolved):
            if resolved.reason == "no_client_location":
                note = "proximity cue without client location; searching unranked"
                logger.info(note)
                notes.append(note)
            else:
                return unresolved_location_fallback(cue_text)
        else:
            anchor = resolved
    elif raw.client_location is not None:
        anchor = geo.client_anchor(raw.client_location)

    if cues.temporal_cue is not None:
        try:
            temporal = resolve_now(cues.temporal_cue, raw.clock)
        except UnrecognizedTemporalCue:
            return unrecognized_temporal_fallback(cues.temporal_cue)
    else:
        temporal = AnyTime()

    ir = QueryIR(
        requests=tuple(
            ServiceRequest(c.category, c.features, c.cost) for c in cues.service_cues
        ),
        spatial=SpatialConstraint(anchor.point, default_radius_m) if anchor else None,
        temporal=temporal,
        limit=default_limit,
    )
    return Normalized(ir, anchor, tuple(notes))


__all__ = [
    "Extractor",
    "ExtractedCues",
    "Fallback",
    "Lexicon",
    "Normalized",
    "RawQuery",
    "ServiceCue",
    "Span",
    "classify_relevance",
    "no_cues_fallback",
    "normalize",
]
