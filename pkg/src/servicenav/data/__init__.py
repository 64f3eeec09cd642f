"""Bundled fixture data: dataset, gazetteer, and lexicon files."""

from importlib import resources
from pathlib import Path


def path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(resources.files(__name__) / name)
