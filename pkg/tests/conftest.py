from __future__ import annotations

from pathlib import Path

import pytest

from privslice.catalog import Catalog, default_catalog
from privslice.pipeline import AppAnalysis, analyze_program
from privslice.slir import SlirProgram, parse_slir

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"

# (file stem, app name) in the order used for combined runs
CORPUS_APPS = (
    ("steam", "Steam"),
    ("beita_com_beita_contact", "Beita_com_beita_contact"),
    ("overlay_android_samp", "Overlay_android_samp"),
    ("roidsec", "Roidsec"),
)


def corpus_text(stem: str) -> str:
    return (CORPUS_DIR / f"{stem}.slir").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return default_catalog()


@pytest.fixture(scope="session")
def corpus_programs() -> dict[str, SlirProgram]:
    return {app: parse_slir(corpus_text(stem)) for stem, app in CORPUS_APPS}


@pytest.fixture(scope="session")
def corpus_analyses(corpus_programs, catalog) -> dict[str, AppAnalysis]:
    return {app: analyze_program(prog, catalog, app) for app, prog in corpus_programs.items()}


@pytest.fixture(scope="session")
def combined_corpus_text() -> str:
    return "".join(corpus_text(stem) for stem, _ in CORPUS_APPS)


@pytest.fixture(scope="session")
def combined_analysis(combined_corpus_text, catalog) -> AppAnalysis:
    return analyze_program(parse_slir(combined_corpus_text), catalog, "corpus")
