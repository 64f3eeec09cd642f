"""Factorial benchmark corpus generation.

The relevant set covers the full category x temporal-style x location-spec
x language-style grid exactly once per cell (5 x 2 x 4 x 5 = 200 queries);
the irrelevant set is 100 general-purpose questions about cooking, device
support, and travel. Rendering is seeded and fully deterministic.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass

from servicenav.kg import Category

TEMPORAL_STYLES = ("implicit", "explicit_clock")
LOCATION_SPECS = ("zip", "neighborhood", "street_address", "ambiguous_cue")
LANG_STYLES = (
    "interrogative",
    "declarative",
    "search_style",
    "causal_reflective",
    "community_oriented",
)

RELEVANT_COUNT = 200
IRRELEVANT_COUNT = 100


@dataclass(frozen=True)
class BenchmarkQuery:
    id: str
    category: str | None
    temporal_style: str | None
    location_spec: str | None
    lang_style: str | None
    text: str
    relevant: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "BenchmarkQuery":
        return cls(**json.loads(line))


_CATEGORY_PHRASES = {
    "food": ["a food bank", "a food pantry", "free meals", "a place to get groceries"],
    "mental_health": [
        "a mental health clinic",
        "counseling services",
        "a walk-in crisis center",
        "a therapist",
    ],
    "shelter": ["a shelter", "an emergency shelter", "a place to stay", "a place to sleep"],
    "library": [
        "a public library",
        "a library",
        "a library with free wi-fi",
        "a place to print documents",
    ],
    "social_security": ["a social security office", "an ssa office", "a benefits office"],
}

_LOCATION_PHRASES = {
    "zip": ["in 19104", "in 19124", "in 19133", "in 19107"],
    "neighborhood": [
        "in Fairhill",
        "in University City",
        "in Frankford",
        "in Center City",
        "in Port Richmond",
    ],
    "street_address": [
        "on West Lehigh Avenue",
        "on Frankford Avenue",
        "on Broad Street",
        "near Chestnut Street",
    ],
    "ambiguous_cue": ["downtown", "near the city center", "around the city center"],
}

_TEMPORAL_PHRASES = {
    "implicit": ["earlier today", "right now", "tonight", "on weekends", "today"],
    "explicit_clock": [
        "after 6pm",
        "after 8pm on weekends",
        "before 5pm",
        "after 9:30am",
        "before 11am",
    ],
}

_LANG_TEMPLATES = {
    "interrogative": [
        "Where can I refer someone to {svc} {loc} {time}?",
        "Is there {svc} {loc} {time}?",
        "Can you help me find {svc} {loc} {time}?",
    ],
    "declarative": [
        "I need to find {svc} {loc} {time}.",
        "I'm looking for {svc} {loc} {time}.",
        "We need {svc} {loc} {time}.",
    ],
    "search_style": [
        "{svc} {loc} {time}",
        "{svc} {loc} open {time}",
    ],
    "causal_reflective": [
        "Because the person I'm helping can't travel far, I'm trying to find {svc} {loc} {time}.",
        "My cousin just arrived with nothing, so I'm looking for {svc} {loc} {time}.",
    ],
    "community_oriented": [
        "Our outreach team is looking for {svc} {loc} {time} for a neighbor.",
        "A volunteer at our community center is asking about {svc} {loc} {time}.",
    ],
}

# Topic pools for the out-of-scope set. None of these phrases may contain
# lexicon vocabulary; test_bench audits that against the shipped lexicon.
_IRRELEVANT_TEMPLATES = {
    "cooking": [
        "What's a good recipe for {x}?",
        "How long should I simmer {x}?",
        "What spices go well with {x}?",
        "Can I make {x} without an oven?",
    ],
    "tech_support": [
        "How do I fix my {x}?",
        "Why does my {x} keep freezing?",
        "How do I reset the password on my {x}?",
        "Is it worth repairing a cracked {x}?",
    ],
    "travel": [
        "What are the best sights to see in {x}?",
        "When is the cheapest time of year to fly to {x}?",
        "Do I need a visa to visit {x}?",
        "How many days should I spend in {x}?",
    ],
}

_IRRELEVANT_ITEMS = {
    "cooking": [
        "lasagna",
        "pancakes",
        "chili",
        "risotto",
        "dumplings",
        "banana muffins",
        "lentil curry",
        "roast vegetables",
        "tomato sauce",
        "apple pie",
    ],
    "tech_support": [
        "laptop screen",
        "phone battery",
        "tablet",
        "smartwatch",
        "router",
        "game console",
        "bluetooth speaker",
        "e-reader",
        "smart tv",
        "headphones",
    ],
    "travel": [
        "Rome",
        "Tokyo",
        "Iceland",
        "New Orleans",
        "the Grand Canyon",
        "Lisbon",
        "Montreal",
        "Costa Rica",
        "Scotland",
        "Buenos Aires",
    ],
}


def generate_benchmark(seed: int) -> list[BenchmarkQuery]:
    """The full 300-query corpus for one seed.

    Exactly one relevant query per factorial cell in a fixed cell order;
    the seed only picks which phrasing variant each cell uses, so two runs
    with the same seed are identical corpora.
    """
    rng = random.Random(seed)
    queries: list[BenchmarkQuery] = []
    n = 0
    for category in [c.value for c in Category]:
        for temporal_style in TEMPORAL_STYLES:
            for location_spec in LOCATION_SPECS:
                for lang_style in LANG_STYLES:
                    n += 1
                    template = rng.choice(_LANG_TEMPLATES[lang_style])
                    text = template.format(
                        svc=rng.choice(_CATEGORY_PHRASES[category]),
                        loc=rng.choice(_LOCATION_PHRASES[location_spec]),
                        time=rng.choice(_TEMPORAL_PHRASES[temporal_style]),
                    )
                    if lang_style != "search_style":
                        text = text[0].upper() + text[1:]
                    queries.append(
                        BenchmarkQuery(
                            id=f"R{n:03d}",
                            category=category,
                            temporal_style=temporal_style,
                            location_spec=location_spec,
                            lang_style=lang_style,
                            text=text,
                            relevant=True,
                        )
                    )

    topics = sorted(_IRRELEVANT_TEMPLATES)
    pool = []
    for topic in topics:
        for template in _IRRELEVANT_TEMPLATES[topic]:
            for item in _IRRELEVANT_ITEMS[topic]:
                pool.append(template.format(x=item))
    picks = rng.sample(pool, IRRELEVANT_COUNT)
    for i, text in enumerate(picks, start=1):
        queries.append(
            BenchmarkQuery(
                id=f"X{i:03d}",
                category=None,
                temporal_style=None,
                location_spec=None,
                lang_style=None,
                text=text,
                relevant=False,
            )
        )
    return queries


def write_corpus(queries: list[BenchmarkQuery], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for q in queries:
            f.write(q.to_json() + "\n")


def read_corpus(path) -> list[BenchmarkQuery]:
    with open(path, encoding="utf-8") as f:
        return [BenchmarkQuery.from_json(line) for line in f if line.strip()]
