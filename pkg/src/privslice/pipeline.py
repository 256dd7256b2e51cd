"""End-to-end orchestration: parse -> dependence -> slice -> map -> check."""

from __future__ import annotations

from dataclasses import dataclass

from . import depgraph, dpv, rules, slicer
from .catalog import Catalog
from .depgraph import Pdg
from .dpv import DpvModel, sanitize_process_id
from .rules import DpiaSummary, Finding
from .slicer import PrivacySlice
from .slir import SlirProgram


@dataclass(frozen=True)
class SliceAnalysis:
    slice: PrivacySlice
    model: DpvModel
    findings: tuple[Finding, ...]


@dataclass(frozen=True)
class AppAnalysis:
    app: str
    program: SlirProgram
    pdg: Pdg
    slices: tuple[SliceAnalysis, ...]
    dpia: DpiaSummary
    warnings: tuple[str, ...]

    @property
    def findings(self) -> tuple[Finding, ...]:
        return tuple(f for s in self.slices for f in s.findings)

    def has_potential_violation(self) -> bool:
        return any(f.severity is rules.Severity.POTENTIAL_VIOLATION for f in self.findings)


def process_ids(app: str, count: int) -> list[str]:
    """The first slice of an app takes the app's name; later slices get a
    stable ordinal suffix."""
    base = sanitize_process_id(app)
    return [base if i == 0 else f"{base}-{i + 1}" for i in range(count)]


def analyze_program(program: SlirProgram, catalog: Catalog, app: str) -> AppAnalysis:
    pdg = depgraph.build_pdg(program)
    slices = slicer.build_slices(program, pdg, catalog, app)
    ids = process_ids(app, len(slices))
    analyses: list[SliceAnalysis] = []
    for sl, pid in zip(slices, ids):
        model = dpv.map_slice(sl, process_id=pid)
        findings = rules.check(model, sl)
        analyses.append(SliceAnalysis(sl, model, findings))
    dpia = rules.summarize_dpia([(a.model, a.slice) for a in analyses])
    warnings = tuple(
        f"unreachable statement {sid.text()} (line {pdg.statements[sid].pos[0]})"
        for sid in pdg.unreachable
    )
    return AppAnalysis(app, program, pdg, tuple(analyses), dpia, warnings)
