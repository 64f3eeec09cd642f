"""Verdict aggregation.

Wins, ties, and losses are always reported separately; no figure quietly
collapses ties into a denominator choice. Rejection is the fallback
fraction over the out-of-scope queries, printed as an exact fraction.
"""

from __future__ import annotations

import json

FACTORS = ("category", "temporal_style", "location_spec", "lang_style")


def score(verdicts: list[dict]) -> dict:
    relevant = [v for v in verdicts if v.get("relevant")]
    irrelevant = [v for v in verdicts if not v.get("relevant")]

    def tally(subset: list[dict]) -> dict:
        wins1 = sum(1 for v in subset if v["unblinded_winner"] == "side1")
        wins2 = sum(1 for v in subset if v["unblinded_winner"] == "side2")
        ties = sum(1 for v in subset if v["unblinded_winner"] == "tie")
        n = len(subset)
        return {
            "n": n,
            "side1_wins": wins1,
            "side2_wins": wins2,
            "ties": ties,
            "side1_win_rate_pct": round(100.0 * wins1 / n, 1) if n else 0.0,
            "side2_win_rate_pct": round(100.0 * wins2 / n, 1) if n else 0.0,
        }

    def rejection(side: str) -> dict:
        n = len(irrelevant)
        fallbacks = sum(1 for v in irrelevant if v[f"{side}_kind"] == "fallback")
        out_of_scope = sum(
            1 for v in irrelevant if v[f"{side}_fallback_reason"] == "out_of_scope"
        )
        return {
            "fallbacks": fallbacks,
            "out_of_scope": out_of_scope,
            "total": n,
            "fraction": f"{out_of_scope}/{n}",
            "rate_pct": round(100.0 * out_of_scope / n, 1) if n else 0.0,
        }

    breakdowns: dict[str, dict] = {}
    for factor in FACTORS:
        levels: dict[str, dict] = {}
        for v in relevant:
            level = v.get(factor)
            if level is None:
                continue
            levels.setdefault(level, []).append(v)
        breakdowns[factor] = {level: tally(vs) for level, vs in sorted(levels.items())}

    return {
        "relevant": tally(relevant),
        "rejection": {"side1": rejection("side1"), "side2": rejection("side2")},
        "by_factor": breakdowns,
    }


def render_report(report: dict) -> str:
    """Human-readable report text."""
    lines = []
    rel = report["relevant"]
    lines.append(
        f"relevant queries: n={rel['n']} side1_wins={rel['side1_wins']} "
        f"side2_wins={rel['side2_wins']} ties={rel['ties']}"
    )
    lines.append(
        f"win rates: side1={rel['side1_win_rate_pct']}% side2={rel['side2_win_rate_pct']}%"
    )
    for side in ("side1", "side2"):
        rj = report["rejection"][side]
        lines.append(
            f"rejection ({side}): out_of_scope {rj['fraction']} = {rj['rate_pct']}% "
            f"(any fallback: {rj['fallbacks']}/{rj['total']})"
        )
    for factor, levels in report["by_factor"].items():
        lines.append(f"by {factor}:")
        for level, t in levels.items():
            lines.append(
                f"  {level}: n={t['n']} side1={t['side1_wins']} "
                f"side2={t['side2_wins']} ties={t['ties']}"
            )
    return "\n".join(lines)


def write_verdicts(verdicts: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for v in verdicts:
            f.write(json.dumps(v, sort_keys=True) + "\n")


def read_verdicts(path) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]
