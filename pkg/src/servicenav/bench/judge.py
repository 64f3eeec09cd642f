"""Blind pairwise judging.

The judge sees two anonymized response payloads per query, never knowing
which side produced which. The rubric judge scores seven prioritized
criteria lexicographically (first decisive criterion wins); it is fully
deterministic and order-symmetric, standing in for a model-based judge,
which remains pluggable through the same interface.
"""

from __future__ import annotations

import random

import httpx

CRITERIA = (
    "location_specificity",
    "service_relevance",
    "operational_detail",
    "structural_clarity",
    "actionability",
    "signal_to_noise",
    "accuracy_plausibility",
)

# Philadelphia-plausibility bounding box for criterion 7.
_PHL_BBOX = (39.80, 40.20, -75.35, -74.90)


class MismatchedCorpora(ValueError):
    """The two transcripts do not cover the same query ids."""


def build_payload(response: dict | None) -> dict:
    """Judge-visible view of one response: content only, no provenance.

    Excludes the compiled query and any transcript metadata so nothing in
    the payload can identify which system produced it.
    """
    if response is None:
        return {"kind": "error", "message": "", "cards": []}
    if response.get("kind") != "answer":
        fb = response.get("fallback") or {}
        return {"kind": "fallback", "message": fb.get("user_message", ""), "cards": []}
    cards = []
    plan = response.get("stop_plan") or {}
    for stop in plan.get("stops", []):
        for card in stop.get("cards", []):
            cards.append(
                {
                    "stop_label": stop.get("label", ""),
                    "org_name": card.get("org_name", ""),
                    "address": card.get("address", ""),
                    "phone": card.get("phone", ""),
                    "hours": card.get("hours_line", ""),
                    "services": card.get("services", []),
                    "distance_mi": card.get("distance_mi"),
                    "lat": card.get("lat"),
                    "lon": card.get("lon"),
                    "has_directions": bool(card.get("directions_url")),
                    "cards_in_stop": len(stop.get("cards", [])),
                }
            )
    return {"kind": "answer", "message": plan.get("message") or "", "cards": cards}


def _score(payload: dict) -> list[int]:
    """Seven criterion scores for one payload, priority order."""
    cards = payload["cards"]
    first = cards[0] if cards else None

    location = 0
    if first:
        if first["address"]:
            location = 2
        elif first["distance_mi"] is not None:
            location = 1

    relevance = 2 if cards else 0

    operational = 0
    if first:
        operational = int(bool(first["address"])) + int(bool(first["phone"])) + int(
            bool(first["hours"])
        )

    clarity = 1 if cards and all(c["stop_label"] for c in cards) else 0

    actionable = 1 if first and (first["phone"] or first["has_directions"]) else 0

    focused = 1 if cards and all(1 <= c["cards_in_stop"] <= 3 for c in cards) else 0

    plausible = 0
    if cards:
        lat_lo, lat_hi, lon_lo, lon_hi = _PHL_BBOX
        plausible = int(
            all(
                c["lat"] is not None
                and lat_lo <= c["lat"] <= lat_hi
                and lon_lo <= c["lon"] <= lon_hi
                for c in cards
            )
        )

    return [location, relevance, operational, clarity, actionable, focused, plausible]


class RubricJudge:
    """Deterministic lexicographic scorer over the prioritized criteria."""

    name = "rubric"

    def decide(self, payload_a: dict, payload_b: dict) -> tuple[str, list[list[int]]]:
        scores_a = _score(payload_a)
        scores_b = _score(payload_b)
        trace = [[i + 1, a, b] for i, (a, b) in enumerate(zip(scores_a, scores_b))]
        for _i, a, b in trace:
            if a != b:
                return ("A" if a > b else "B"), trace
        return "tie", trace


class ExternalJudge:
    """Sends anonymized payload pairs to a configured judging endpoint."""

    name = "external"

    def __init__(self, url: str, client: httpx.Client | None = None):
        self.url = url
        self._client = client or httpx.Client(timeout=60.0)

    def decide(self, payload_a: dict, payload_b: dict) -> tuple[str, list[list[int]]]:
        resp = self._client.post(
            self.url,
            json={"response_a": payload_a, "response_b": payload_b, "criteria": list(CRITERIA)},
        )
        resp.raise_for_status()
        body = resp.json()
        winner = body.get("winner")
        if winner not in ("A", "B", "tie"):
            raise ValueError(f"external judge returned bad winner: {winner!r}")
        return winner, body.get("criterion_trace", [])


def judge_pairwise(
    side1_entries: list[dict],
    side2_entries: list[dict],
    judge,
    seed: int,
) -> list[dict]:
    """One verdict per query id; A/B assignment randomized by seed.

    The verdict records which side was shown as A (the unblinding
    metadata) plus enough per-side outcome data for scoring, but none of
    that is ever part of the judge-visible payload.
    """
    by_id_1 = {e["query_id"]: e for e in side1_entries}
    by_id_2 = {e["query_id"]: e for e in side2_entries}
    if set(by_id_1) != set(by_id_2):
        only_1 = sorted(set(by_id_1) - set(by_id_2))[:3]
        only_2 = sorted(set(by_id_2) - set(by_id_1))[:3]
        raise MismatchedCorpora(f"query ids differ (e.g. {only_1} vs {only_2})")

    verdicts = []
    for qid in sorted(by_id_1):
        e1, e2 = by_id_1[qid], by_id_2[qid]
        swap = random.Random(f"{seed}:{qid}").random() < 0.5
        shown_a, shown_b = (e2, e1) if swap else (e1, e2)
        winner, trace = judge.decide(
            build_payload(shown_a.get("response")), build_payload(shown_b.get("response"))
        )
        blinding = {"A": "side2" if swap else "side1", "B": "side1" if swap else "side2"}
        unblinded = "tie" if winner == "tie" else blinding[winner]
        verdicts.append(
            {
                "query_id": qid,
                "relevant": e1.get("relevant"),
                "category": e1.get("category"),
                "temporal_style": e1.get("temporal_style"),
                "location_spec": e1.get("location_spec"),
                "lang_style": e1.get("lang_style"),
                "winner": winner,
                "criterion_trace": trace,
                "blinding": blinding,
                "unblinded_winner": unblinded,
                "side1_kind": _kind(e1),
                "side2_kind": _kind(e2),
                "side1_fallback_reason": _fallback_reason(e1),
                "side2_fallback_reason": _fallback_reason(e2),
                "side1_cards": _card_count(e1),
                "side2_cards": _card_count(e2),
            }
        )
    return verdicts


def _kind(entry: dict) -> str:
    resp = entry.get("response")
    return resp.get("kind", "error") if resp else "error"


def _fallback_reason(entry: dict) -> str | None:
    resp = entry.get("response") or {}
    fb = resp.get("fallback")
    return fb.get("reason") if fb else None


def _card_count(entry: dict) -> int:
    resp = entry.get("response") or {}
    plan = resp.get("stop_plan") or {}
    return sum(len(s.get("cards", [])) for s in plan.get("stops", []))
