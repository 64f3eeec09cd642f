from __future__ import annotations

import json

import pytest

from servicenav import data as bundled
from servicenav.config import ServiceConfig
from servicenav.engine import Engine
from servicenav.geo import Gazetteer
from servicenav.hours import ClockContext, Day
from servicenav.kg import load_dataset
from servicenav.understanding import Extractor, Lexicon

# Tuesday, noon, matching the golden scenario.
FIXED_CLOCK_ISO = "2025-06-10T12:00:00"


@pytest.fixture(scope="session")
def dataset_path():
    return bundled.path("dataset.json")


@pytest.fixture(scope="session")
def gazetteer_path():
    return bundled.path("gazetteer.json")


@pytest.fixture(scope="session")
def lexicon_path():
    return bundled.path("lexicon.json")


@pytest.fixture(scope="session")
def graph(dataset_path):
    return load_dataset(dataset_path)


@pytest.fixture(scope="session")
def gazetteer(gazetteer_path):
    return Gazetteer.load(gazetteer_path)


@pytest.fixture(scope="session")
def lexicon(lexicon_path):
    return Lexicon.load(lexicon_path)


@pytest.fixture(scope="session")
def extractor(lexicon, gazetteer):
    return Extractor(lexicon, gazetteer.names())


@pytest.fixture
def tue_noon():
    return ClockContext(Day.Tue, 720)


@pytest.fixture
def engine():
    return Engine(ServiceConfig(fixed_clock=FIXED_CLOCK_ISO))


@pytest.fixture(scope="session")
def session_engine():
    """Shared read-mostly engine for tests that only issue queries."""
    return Engine(ServiceConfig(fixed_clock=FIXED_CLOCK_ISO))


def write_dataset(tmp_path, organizations):
    path = tmp_path / "dataset.json"
    path.write_text(json.dumps({"organizations": organizations}), encoding="utf-8")
    return path


def minimal_org(**overrides):
    """A valid single-org record tests can perturb."""
    record = {
        "name": "Lillian Marrero Library",
        "address": {
            "street": "601 West Lehigh Avenue",
            "city": "Philadelphia",
            "state": "PA",
            "zip": "19133",
        },
        "phone": "(215) 685-9794",
        "description": "Branch library.",
        "location": {
            "lat": 39.99372,
            "lon": -75.14036,
            "neighborhood": "Fairhill",
            "street": "West Lehigh Avenue",
        },
        "services": [
            {
                "category": "library",
                "label": "Wi-Fi",
                "cost": "Free",
                "features": ["wifi"],
                "eligibility": "Open to the public",
            }
        ],
        "hours": [{"day": "Tue", "open": "11:00", "close": "19:00"}],
    }
    record.update(overrides)
    return record
