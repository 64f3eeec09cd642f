"""Benchmark CLI: generate, run, degrade, judge, score.

All files are JSON-lines: one object per line.
"""

from __future__ import annotations

import json

import click

from servicenav.config import ServiceConfig, parse_clock


@click.group()
def bench():
    """Factorial benchmark and blind pairwise judging."""


@bench.command()
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def generate(seed, out):
    """Generate the 200-relevant + 100-irrelevant corpus."""
    from .corpus import generate_benchmark, write_corpus

    queries = generate_benchmark(seed)
    write_corpus(queries, out)
    click.echo(f"wrote {len(queries)} queries to {out}")


@bench.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--endpoint", default=None, help="Base URL of a running API; omit for in-process.")
@click.option("--clock", required=True, help="Fixed ISO-8601 clock for the run.")
@click.option("--out", type=click.Path(), required=True)
@click.option("--dataset", type=click.Path(exists=True), default=None)
@click.option("--gazetteer", type=click.Path(exists=True), default=None)
@click.option("--lexicon", type=click.Path(exists=True), default=None)
def run(corpus_path, endpoint, clock, out, dataset, gazetteer, lexicon):
    """Run a corpus against the system, one fresh session per query."""
    from servicenav.engine import Engine

    from .corpus import read_corpus
    from .runner import run_system, write_transcript

    corpus = read_corpus(corpus_path)
    clock_ctx = parse_clock(clock)
    if endpoint:
        entries = run_system(corpus, endpoint=endpoint, clock=clock_ctx)
    else:
        cfg = ServiceConfig.from_env(
            dataset_path=dataset,
            gazetteer_path=gazetteer,
            lexicon_path=lexicon,
            fixed_clock=clock,
        )
        entries = run_system(corpus, engine=Engine(cfg), clock=clock_ctx)
    write_transcript(entries, out)
    answered = sum(1 for e in entries if (e.get("response") or {}).get("kind") == "answer")
    click.echo(f"wrote {len(entries)} transcript entries to {out} ({answered} answers)")


@bench.command()
@click.option("--transcript", "transcript_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
def degrade(transcript_path, out):
    """Derive the degraded-baseline transcript from a system transcript."""
    from .degrade import degrade_transcript
    from .runner import read_transcript, write_transcript

    entries = degrade_transcript(read_transcript(transcript_path))
    write_transcript(entries, out)
    click.echo(f"wrote {len(entries)} degraded entries to {out}")


@bench.command()
@click.option("--a", "a_path", type=click.Path(exists=True), required=True)
@click.option("--b", "b_path", type=click.Path(exists=True), required=True)
@click.option("--judge", "judge_kind", type=click.Choice(["rubric", "external"]), default="rubric")
@click.option("--judge-url", default=None, help="Endpoint for the external judge.")
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def judge(a_path, b_path, judge_kind, judge_url, seed, out):
    """Blind pairwise judging of two transcripts over the same corpus."""
    from .judge import ExternalJudge, RubricJudge, judge_pairwise
    from .runner import read_transcript
    from .scoring import write_verdicts

    if judge_kind == "external":
        if not judge_url:
            raise click.UsageError("--judge external requires --judge-url")
        the_judge = ExternalJudge(judge_url)
    else:
        the_judge = RubricJudge()
    verdicts = judge_pairwise(read_transcript(a_path), read_transcript(b_path), the_judge, seed)
    write_verdicts(verdicts, out)
    click.echo(f"wrote {len(verdicts)} verdicts to {out}")


@bench.command()
@click.option("--verdicts", "verdicts_path", type=click.Path(exists=True), required=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the raw report object.")
def score(verdicts_path, as_json):
    """Aggregate verdicts: win/tie/loss counts, rejection rate, breakdowns."""
    from .scoring import read_verdicts, render_report
    from .scoring import score as score_verdicts

    report = score_verdicts(read_verdicts(verdicts_path))
    if as_json:
        click.echo(json.dumps(report, indent=2, sort_keys=True))
    else:
        click.echo(render_report(report))
