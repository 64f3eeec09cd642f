"""Command-line entry points: serve the API, validate data, run benchmarks."""

from __future__ import annotations

import json

import click

from servicenav.config import ServiceConfig


@click.group()
def main():
    """Community-service navigation engine."""


@main.command()
@click.option("--dataset", type=click.Path(exists=True), default=None, help="Dataset JSON file.")
@click.option("--gazetteer", type=click.Path(exists=True), default=None, help="Gazetteer JSON file.")
@click.option("--lexicon", type=click.Path(exists=True), default=None, help="Lexicon JSON file.")
@click.option("--host", default=None, help="Bind address.")
@click.option("--port", type=int, default=None, help="Bind port.")
@click.option("--clock", default=None, help="Fixed ISO-8601 clock override (for reproducible runs).")
@click.option("--session-ttl", type=float, default=None, help="Session idle TTL in seconds.")
@click.option("--radius-miles", type=float, default=None, help="Default search radius in miles.")
@click.option("--limit", type=int, default=None, help="Default results per request.")
@click.option("--cors-origin", default=None, help="Allowed CORS origin for the web UI.")
def serve(dataset, gazetteer, lexicon, host, port, clock, session_ttl, radius_miles, limit, cors_origin):
    """Start the HTTP API."""
    import uvicorn

    from servicenav.api import create_app

    cfg = ServiceConfig.from_env(
        dataset_path=dataset,
        gazetteer_path=gazetteer,
        lexicon_path=lexicon,
        host=host,
        port=port,
        fixed_clock=clock,
        session_ttl_seconds=session_ttl,
        default_radius_m=radius_miles * 1609.344 if radius_miles else None,
        default_limit=limit,
        cors_origin=cors_origin,
    )
    app = create_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port)


@main.command("validate-dataset")
@click.argument("path", type=click.Path(exists=True))
def validate_dataset(path):
    """Load a dataset file and report whether it is valid."""
    from servicenav.kg import DatasetError, load_dataset, validate

    try:
        graph = load_dataset(path)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc
    report = validate(graph)
    counts = {
        "organizations": len(graph.organizations),
        "locations": len(graph.locations),
        "services": len(graph.services),
        "hours_windows": len(graph.hours_windows),
        "violations": len(report),
    }
    click.echo(json.dumps(counts, indent=2))


def _register_bench():
    from servicenav.bench.cli import bench as bench_group

    main.add_command(bench_group)


_register_bench()


if __name__ == "__main__":
    main()
