"""CLI surface: bench pipeline end to end, dataset validation."""

from __future__ import annotations

import json

from click.testing import CliRunner

from servicenav.bench.cli import bench
from servicenav.cli import main

from .conftest import FIXED_CLOCK_ISO


def test_bench_pipeline_end_to_end(tmp_path):
    runner = CliRunner()
    corpus = tmp_path / "corpus.jsonl"
    transcript = tmp_path / "full.jsonl"
    baseline = tmp_path / "baseline.jsonl"
    verdicts = tmp_path / "verdicts.jsonl"

    r = runner.invoke(bench, ["generate", "--seed", "1", "--out", str(corpus)])
    assert r.exit_code == 0, r.output
    assert len(corpus.read_text().strip().split("\n")) == 300

    r = runner.invoke(
        bench,
        ["run", "--corpus", str(corpus), "--clock", FIXED_CLOCK_ISO, "--out", str(transcript)],
    )
    assert r.exit_code == 0, r.output
    assert len(transcript.read_text().strip().split("\n")) == 300

    r = runner.invoke(
        bench, ["degrade", "--transcript", str(transcript), "--out", str(baseline)]
    )
    assert r.exit_code == 0, r.output

    r = runner.invoke(
        bench,
        [
            "judge",
            "--a", str(transcript),
            "--b", str(baseline),
            "--judge", "rubric",
            "--seed", "3",
            "--out", str(verdicts),
        ],
    )
    assert r.exit_code == 0, r.output

    r = runner.invoke(bench, ["score", "--verdicts", str(verdicts)])
    assert r.exit_code == 0, r.output
    assert "relevant queries" in r.output
    assert "rejection" in r.output

    r = runner.invoke(bench, ["score", "--verdicts", str(verdicts), "--json"])
    assert r.exit_code == 0
    report = json.loads(r.output)
    assert report["relevant"]["n"] == 200
    assert report["rejection"]["side1"]["fraction"] == "100/100"


def test_validate_dataset_command(dataset_path):
    runner = CliRunner()
    r = runner.invoke(main, ["validate-dataset", str(dataset_path)])
    assert r.exit_code == 0, r.output
    counts = json.loads(r.output)
    assert counts["violations"] == 0
    assert counts["organizations"] >= 10


def test_validate_dataset_rejects_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"organizations": [{"name": "x"}]}))
    runner = CliRunner()
    r = runner.invoke(main, ["validate-dataset", str(bad)])
    assert r.exit_code != 0
    assert "missing fields" in r.output


def test_main_group_lists_bench():
    runner = CliRunner()
    r = runner.invoke(main, ["--help"])
    assert r.exit_code == 0
    assert "bench" in r.output and "serve" in r.output
