"""Command line interface.

Exit codes are a contract: 0 success, 1 parse/validation problems, 2 empty
case base, 3 internal errors. stdout carries only payload; diagnostics go
to stderr.
"""

from __future__ import annotations

import errno
import json
import socket
import sys
from pathlib import Path

import click

from .casebase import case_from_document
from .engine import Engine, load_engine_config
from .errors import ClarifyError, EmptyCaseBase, ParseError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_EMPTY_CASE_BASE = 2
EXIT_INTERNAL = 3

_config_option = click.option(
    "--config",
    "config_path",
    envvar="CLARIFY_CONFIG",
    required=True,
    type=click.Path(path_type=Path),
    help="Engine config file (or set CLARIFY_CONFIG).",
)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _exit_code_for(exc: ClarifyError) -> int:
    if isinstance(exc, EmptyCaseBase):
        return EXIT_EMPTY_CASE_BASE
    if exc.api_code in {"PARSE_ERROR", "VALIDATION_ERROR", "UNKNOWN_CONCEPT", "NOT_FOUND"}:
        return EXIT_INVALID
    return EXIT_INTERNAL


def _load_engine(config_path: Path, *, audit: bool = True) -> Engine:
    try:
        return Engine.from_config(config_path, audit=audit)
    except ClarifyError as exc:
        _fail(exc.message, _exit_code_for(exc))
    except OSError as exc:
        _fail(f"cannot read {exc.filename or config_path}: {exc.strerror}", EXIT_INVALID)


def _load_case(case_path: Path):
    try:
        text = case_path.read_text(encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot read case file {case_path}: {exc.strerror}", EXIT_INVALID)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"case file {case_path} is not valid JSON: {exc.msg}", EXIT_INVALID)
    try:
        return case_from_document(doc, str(case_path))
    except ParseError as exc:
        _fail(exc.message, EXIT_INVALID)


@click.group()
def cli():
    """Case-based decision support with ontology-grounded explanations."""


@cli.command()
@_config_option
@click.option("--case", "case_path", required=True, type=click.Path(path_type=Path))
@click.option("--template", default=None, help="Explanation template override.")
@click.option("--json", "as_json", is_flag=True, help="Emit the full decision document.")
def decide(config_path: Path, case_path: Path, template: str | None, as_json: bool):
    """Decide one case and print its explanation."""
    engine = _load_engine(config_path)
    case = _load_case(case_path)
    try:
        details = engine.decide(case, template)
    except ClarifyError as exc:
        _fail(exc.message, _exit_code_for(exc))
    if as_json:
        click.echo(json.dumps(details.to_document(), indent=2, sort_keys=True))
    else:
        click.echo(details.explanation.rendered_text)


@cli.command()
@_config_option
def validate(config_path: Path):
    """Load and cross-validate the ontology and case base."""
    try:
        engine = Engine.from_config(config_path, audit=False)
    except ClarifyError as exc:
        click.echo(f"error: {exc.message}", err=True)
        sys.exit(EXIT_INVALID)
    except OSError as exc:
        _fail(f"cannot read {exc.filename or config_path}: {exc.strerror}", EXIT_INVALID)
    problems = engine.validation_report()
    if problems:
        for line in problems:
            click.echo(line, err=True)
        sys.exit(EXIT_INVALID)
    click.echo("OK")


@cli.command()
@_config_option
@click.option("--case", "case_path", required=True, type=click.Path(path_type=Path))
@click.option("-k", "k", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--json", "as_json", is_flag=True)
def retrieve(config_path: Path, case_path: Path, k: int, as_json: bool):
    """List the k most similar stored cases."""
    engine = _load_engine(config_path, audit=False)
    case = _load_case(case_path)
    try:
        results = engine.retrieve(case, k)
    except ClarifyError as exc:
        _fail(exc.message, _exit_code_for(exc))
    if as_json:
        click.echo(
            json.dumps([r.to_document() for r in results], indent=2, sort_keys=True)
        )
    else:
        for r in results:
            click.echo(f"{r.case.case_id}\t{r.similarity:.4f}\t{r.solution.action}")


@cli.command()
@_config_option
@click.option("--port", envvar="CLARIFY_PORT", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path: Path, port: int, host: str):
    """Serve the /v1 HTTP API until interrupted."""
    import uvicorn

    from .service import create_app

    engine = _load_engine(config_path)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        if exc.errno in (errno.EADDRINUSE, errno.EACCES, errno.EADDRNOTAVAIL):
            _fail(f"cannot bind {host}:{port}: {exc.strerror}", EXIT_INVALID)
        raise
    finally:
        probe.close()
    uvicorn.run(create_app(engine), host=host, port=port, log_level="warning")


def main():
    cli(prog_name="clarify")


if __name__ == "__main__":
    main()
