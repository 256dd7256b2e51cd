"""Command-line entry point.

Exit codes (shared by `analyze` and `check`):
  0  analysis ran, no potential violation
  1  input error (unreadable file, parse error, catalog conflict)
  2  at least one potential violation, for use as a CI gate
"""

from __future__ import annotations

import hashlib
import os
import sys
from pathlib import Path

import click

from . import views
from .catalog import Catalog, default_catalog_bytes, load_catalog
from .dpv import to_turtle
from .errors import PrivsliceError
from .pipeline import AppAnalysis, analyze_program
from .slir import parse_slir

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VIOLATION = 2

_EMIT_CHOICES = ("bundle", "dot", "turtle")


def _fail(message: str) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(EXIT_INPUT_ERROR)


def _load_inputs(ir: str, catalog_path: str | None, app_name: str | None):
    ir_file = Path(ir)
    try:
        ir_text = ir_file.read_text(encoding="utf-8")
    except OSError as exc:
        raise _fail(f"cannot read IR file {ir}: {exc.strerror or exc}")
    if catalog_path is None:
        catalog_bytes = default_catalog_bytes()
        catalog_origin = "<default catalog>"
    else:
        try:
            catalog_bytes = Path(catalog_path).read_bytes()
        except OSError as exc:
            raise _fail(f"cannot read catalog {catalog_path}: {exc.strerror or exc}")
        catalog_origin = catalog_path
    try:
        program = parse_slir(ir_text)
    except PrivsliceError as exc:
        raise _fail(f"{ir}: {exc}")
    try:
        catalog = load_catalog(catalog_bytes.decode("utf-8"))
    except (PrivsliceError, UnicodeDecodeError) as exc:
        raise _fail(f"{catalog_origin}: {exc}")
    app = app_name if app_name else ir_file.stem
    digest = hashlib.sha256(catalog_bytes).hexdigest()
    return program, catalog, app, digest


def _run(program, catalog: Catalog, app: str) -> AppAnalysis:
    try:
        return analyze_program(program, catalog, app)
    except PrivsliceError as exc:
        raise _fail(str(exc))


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _slug(slice_id: str) -> str:
    return slice_id.replace(":", "_").replace("#", "-")


@click.group()
def main() -> None:
    """Slice programs from privacy sources, map the slices to a privacy
    vocabulary, check GDPR-derived rules, and render assessor views."""


@main.command("analyze")
@click.option("--ir", required=True, help="SLIR input file.")
@click.option("--catalog", "catalog_path", default=None, help="Catalog JSON (default: shipped catalog).")
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--emit", default="bundle", help="Comma-separated: bundle,dot,turtle.")
@click.option("--app-name", default=None, help="App name (default: IR file stem).")
def cmd_analyze(ir: str, catalog_path: str | None, out_dir: str, emit: str, app_name: str | None) -> None:
    """Run the full pipeline and write bundle/DOT/Turtle outputs."""
    emits = tuple(part.strip() for part in emit.split(",") if part.strip())
    for part in emits:
        if part not in _EMIT_CHOICES:
            raise _fail(f"unknown --emit value {part!r} (choose from {', '.join(_EMIT_CHOICES)})")
    program, catalog, app, digest = _load_inputs(ir, catalog_path, app_name)
    analysis = _run(program, catalog, app)
    for warning in analysis.warnings:
        click.echo(f"warning: {warning}", err=True)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    items = [(a.slice, a.model, a.findings) for a in analysis.slices]
    bundle = views.emit_bundle(app, digest, items, analysis.dpia, program)
    _write_atomic(out / "bundle.json", bundle)
    if "dot" in emits:
        for a in analysis.slices:
            slug = _slug(a.slice.id)
            _write_atomic(out / f"view1-{slug}.dot", views.render_view1(a.slice, program))
            _write_atomic(out / f"view2-{slug}.dot", views.render_view2(a.model))
            _write_atomic(out / f"view3-{slug}.dot", views.render_view3(a.model, a.findings))
        rollup = views.render_view3_rollup(app, [(a.model, a.findings) for a in analysis.slices])
        _write_atomic(out / "view3-rollup.dot", rollup)
    if "turtle" in emits:
        for a in analysis.slices:
            _write_atomic(out / f"view2-{_slug(a.slice.id)}.ttl", to_turtle(a.model))

    sys.exit(EXIT_VIOLATION if analysis.has_potential_violation() else EXIT_OK)


@main.command("check")
@click.option("--ir", required=True, help="SLIR input file.")
@click.option("--catalog", "catalog_path", default=None, help="Catalog JSON (default: shipped catalog).")
@click.option("--app-name", default=None, help="App name (default: IR file stem).")
def cmd_check(ir: str, catalog_path: str | None, app_name: str | None) -> None:
    """Print findings as a tab-separated table, no files written."""
    program, catalog, app, _ = _load_inputs(ir, catalog_path, app_name)
    analysis = _run(program, catalog, app)
    for f in analysis.findings:
        click.echo(f"{f.severity}\t{f.article}\t{f.slice_id}\t{f.message}")
    sys.exit(EXIT_VIOLATION if analysis.has_potential_violation() else EXIT_OK)


if __name__ == "__main__":  # pragma: no cover
    main()
