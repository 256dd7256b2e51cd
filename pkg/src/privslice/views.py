"""The three assessor views (DOT text) and the machine-readable bundle.

View 1 is the source-level slice graph, View 2 the DPV model star,
View 3 the per-slice summary with findings badges. The bundle is a
single self-contained JSON document with stable cross-view links; two
runs over identical inputs produce identical bytes everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import slir
from .depgraph import DepKind, StmtId
from .dpv import DataSource, DpvModel, to_turtle
from .rules import DpiaSummary, Finding, Severity
from .slicer import PrivacySlice
from .slir import SlirProgram

BUNDLE_VERSION = 1


@dataclass(frozen=True)
class ViewStyle:
    """Edge and badge styling; the defaults are conventions, not contracts."""

    data_color: str = "blue"
    control_color: str = "green"
    interproc_color: str = "dimgray"
    severity_colors: Mapping[str, str] = field(
        default_factory=lambda: {
            Severity.POTENTIAL_VIOLATION.value: "red",
            Severity.ADHERENCE.value: "green",
            Severity.SUGGESTION.value: "#ffbf00",
            Severity.NOTE.value: "gray",
        }
    )

    def edge_color(self, kind: DepKind) -> str:
        if kind is DepKind.DATA:
            return self.data_color
        if kind is DepKind.CONTROL:
            return self.control_color
        return self.interproc_color


DEFAULT_STYLE = ViewStyle()

# Badge captions per rule; the article citation is appended by the renderer.
_BADGE_TITLES = {
    "R-A25-VIOLATION": "Potential violation",
    "R-A25-ADHERENCE": "Adherence",
    "R-A5-MIN": "Data minimization",
    "R-CH5-3P": "Third-party transfer",
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _short_location(node: StmtId) -> str:
    cls_tail = node.cls.rsplit(".", 1)[-1]
    return f"{cls_tail}.{node.method}#{node.index}"


def node_tags(sl: PrivacySlice, node: StmtId) -> tuple[str, ...]:
    tags: list[str] = []
    if node == sl.source_stmt:
        tags.append("source")
    annot = sl.annotations.get(node)
    if annot is not None:
        if annot.processing is not None:
            tags.append(f"processing:{annot.processing}")
        if annot.measure is not None:
            tags.append(f"measure:{annot.measure}")
        if annot.purpose is not None:
            tags.append(f"purpose:{annot.purpose}")
        if annot.third_party:
            tags.append("third-party")
    return tuple(tags)


def _statement_lookup(program: SlirProgram) -> dict[tuple[str, str], slir.SlirMethod]:
    return {(cls.name, m.name): m for cls in program.classes for m in cls.methods}


def render_view1(sl: PrivacySlice, program: SlirProgram, style: ViewStyle = DEFAULT_STYLE) -> str:
    """Slice graph: one box per statement, data edges vs control edges
    distinguished by color, the source node double-bordered."""
    methods = _statement_lookup(program)
    lines = [
        "digraph view1 {",
        "  rankdir=TB;",
        "  node [shape=box, fontname=\"Helvetica\"];",
    ]
    for node in sl.nodes:
        stmt = methods[(node.cls, node.method)].statements[node.index]
        label = f"{_short_location(node)}: {slir.format_stmt(stmt)}"
        attrs = [f"label={_quote(label)}"]
        if node == sl.source_stmt:
            attrs.append("peripheries=2")
        lines.append(f"  {_quote(node.text())} [{', '.join(attrs)}];")
    for e in sl.edges:
        attrs = [f"color={_quote(style.edge_color(e.kind))}"]
        if e.kind is not DepKind.DATA and e.kind is not DepKind.CONTROL:
            attrs.append("style=dashed")
        if e.kind is DepKind.CONTROL:
            label = None
        else:
            label = e.provenance or (e.kind.value if e.kind is not DepKind.DATA else None)
        if label:
            attrs.append(f"label={_quote(label)}")
        lines.append(f"  {_quote(e.src.text())} -> {_quote(e.dst.text())} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_view2(model: DpvModel, style: ViewStyle = DEFAULT_STYLE) -> str:
    """DPV model star: the process in the middle, one labeled edge per
    predicate, processing nodes numbered with their order."""
    center = "process"
    lines = [
        "digraph view2 {",
        "  node [fontname=\"Helvetica\"];",
        f"  {_quote(center)} [label={_quote('ex:' + model.process_id)}, shape=ellipse, style=bold];",
    ]
    edges: list[tuple[str, str, str]] = []

    def leaf(node_id: str, label: str, predicate: str) -> None:
        lines.append(f"  {_quote(node_id)} [label={_quote(label)}, shape=box];")
        edges.append((center, node_id, predicate))

    leaf("pd", f"pd:{model.personal_data}", "hasPersonalData")
    if model.data_source is DataSource.THIRD_PARTY:
        leaf("src", f"dpv:{model.data_source}", "hasDataSource")
    for i, p in enumerate(model.processing, start=1):
        leaf(f"p{i}", f"dpv:{p} ({i})", "hasProcessing")
    for j, m in enumerate(model.measures, start=1):
        leaf(f"m{j}", f"dpv:{m.measure}", "hasTechnicalMeasure")
    if model.purpose is not None:
        leaf("purpose", f"dpv:{model.purpose}", "hasPurpose")
    for src, dst, predicate in edges:
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(predicate)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def badge_label(finding: Finding) -> str:
    return f"{_BADGE_TITLES[finding.rule_id]} — {finding.article}"


def render_view3(
    model: DpvModel, findings: Sequence[Finding], style: ViewStyle = DEFAULT_STYLE
) -> str:
    """Compact summary: process and personal-data node plus one badge per
    finding, colored by severity."""
    lines = [
        "digraph view3 {",
        "  node [fontname=\"Helvetica\"];",
        f"  \"app\" [label={_quote(model.process_id)}, shape=box, style=bold];",
        f"  \"pd\" [label={_quote(str(model.personal_data))}, shape=ellipse];",
        "  \"app\" -> \"pd\" [label=\"collects\"];",
    ]
    for i, finding in enumerate(findings, start=1):
        color = style.severity_colors[finding.severity.value]
        lines.append(
            f"  \"badge{i}\" [label={_quote(badge_label(finding))}, shape=note, "
            f"style=filled, fillcolor={_quote(color)}];"
        )
        lines.append(f"  \"app\" -> \"badge{i}\" [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_view3_rollup(
    app: str,
    items: Sequence[tuple[DpvModel, Sequence[Finding]]],
    style: ViewStyle = DEFAULT_STYLE,
) -> str:
    """App-level page listing every slice's badges."""
    lines = [
        "digraph view3_rollup {",
        "  node [fontname=\"Helvetica\"];",
        f"  \"app\" [label={_quote(app)}, shape=box, style=bold];",
    ]
    for s, (model, findings) in enumerate(items, start=1):
        pid = f"slice{s}"
        lines.append(
            f"  {_quote(pid)} [label={_quote(model.process_id + ': ' + str(model.personal_data))}, "
            f"shape=ellipse];"
        )
        lines.append(f"  \"app\" -> {_quote(pid)};")
        for i, finding in enumerate(findings, start=1):
            color = style.severity_colors[finding.severity.value]
            bid = f"{pid}_badge{i}"
            lines.append(
                f"  {_quote(bid)} [label={_quote(badge_label(finding))}, shape=note, "
                f"style=filled, fillcolor={_quote(color)}];"
            )
            lines.append(f"  {_quote(pid)} -> {_quote(bid)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Bundle


def _model_json(model: DpvModel) -> dict:
    return {
        "process_id": model.process_id,
        "personal_data": str(model.personal_data),
        "data_source": model.data_source.value,
        "processing": [p.value for p in model.processing],
        "measures": [
            {"measure": m.measure.value, "position": m.position} for m in model.measures
        ],
        "purpose": model.purpose,
    }


def _dpia_json(summary: DpiaSummary) -> dict:
    def cell(c) -> dict:
        out: dict = {"evidence": [n.text() for n in c.evidence]}
        if c.note is not None:
            out["note"] = c.note
        return out

    rows = []
    for row in summary.rows:
        rows.append(
            {
                "slice": row.slice_id,
                "personal_data": str(row.personal_data),
                "source_api": row.source_api,
                "data_source": row.data_source.value,
                "collection": cell(row.collection),
                "use": cell(row.use),
                "storage": cell(row.storage),
                "deletion": cell(row.deletion),
                "sharing": cell(row.sharing),
                "processing": cell(row.processing),
                "pseudonymization": cell(row.pseudonymization),
            }
        )
    return {"rows": rows}


def emit_bundle(
    app: str,
    catalog_digest: str,
    items: Sequence[tuple[PrivacySlice, DpvModel, Sequence[Finding]]],
    dpia: DpiaSummary,
    program: SlirProgram,
) -> str:
    """Self-contained analysis record; sorted keys and fixed formatting keep
    the bytes stable across runs."""
    methods = _statement_lookup(program)
    slices_json = []
    findings_json = []
    for sl, model, findings in items:
        view1_nodes = []
        for node in sl.nodes:
            stmt = methods[(node.cls, node.method)].statements[node.index]
            view1_nodes.append(
                {
                    "id": node.text(),
                    "label": _short_location(node),
                    "stmt": slir.format_stmt(stmt),
                    "tags": list(node_tags(sl, node)),
                }
            )
        view1_edges = [
            {
                "from": e.src.text(),
                "to": e.dst.text(),
                "kind": e.kind.value,
                "provenance": e.provenance,
            }
            for e in sl.edges
        ]
        evidence_json = {
            key: [n.text() for n in nodes] for key, nodes in sorted(model.evidence.items())
        }
        slices_json.append(
            {
                "id": sl.id,
                "personal_data": str(sl.personal_data),
                "source": sl.source_stmt.text(),
                "view1": {"nodes": view1_nodes, "edges": view1_edges},
                "view2": {
                    "turtle": to_turtle(model),
                    "model": _model_json(model),
                    "evidence": evidence_json,
                },
                "view3": {
                    "summary": _model_json(model),
                    "findings": [f.finding_id for f in findings],
                },
            }
        )
        for f in findings:
            findings_json.append(
                {
                    "id": f.finding_id,
                    "rule_id": f.rule_id,
                    "article": f.article,
                    "severity": f.severity.value,
                    "slice": f.slice_id,
                    "evidence": [n.text() for n in f.evidence],
                    "message": f.message,
                }
            )

    bundle = {
        "bundle_version": BUNDLE_VERSION,
        "app": app,
        "catalog_digest": catalog_digest,
        "slices": slices_json,
        "findings": findings_json,
        "dpia_summary": _dpia_json(dpia),
    }
    return json.dumps(bundle, sort_keys=True, indent=2) + "\n"
