from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from dotcheck import check_dot
from privslice.depgraph import StmtId, build_pdg
from privslice.dpv import DataSource, DpvModel, PersonalData, ProcessingCategory
from privslice.slicer import build_slices
from privslice.slir import parse_slir
from privslice.views import (
    ViewStyle,
    badge_label,
    emit_bundle,
    render_view1,
    render_view2,
    render_view3,
    render_view3_rollup,
)

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "schema" / "bundle.schema.json").read_text()
)


def single(analysis):
    assert len(analysis.slices) == 1
    return analysis.slices[0]


def bundle_of(analysis) -> dict:
    items = [(a.slice, a.model, a.findings) for a in analysis.slices]
    text = emit_bundle(analysis.app, "0" * 64, items, analysis.dpia, analysis.program)
    return json.loads(text)


# ---------------------------------------------------------------------------
# View 1


def test_view1_single_node_slice(catalog):
    program = parse_slir(
        "class A { method m(loc) {\nlat = call android.location.Location.getLatitude(loc)\n} }"
    )
    sl = build_slices(program, build_pdg(program), catalog, "app")[0]
    dot = render_view1(sl, program)
    check_dot(dot)
    assert dot.count("->") == 0
    assert dot.count("peripheries=2") == 1


def test_view1_roidsec_source_and_data_edge(corpus_analyses, corpus_programs):
    item = single(corpus_analyses["Roidsec"])
    dot = render_view1(item.slice, corpus_programs["Roidsec"])
    check_dot(dot)
    source = StmtId("cn.phonesync.app.WifiMonitor", "onLocationChanged", 0)
    append = StmtId("cn.phonesync.app.WifiMonitor", "onLocationChanged", 2)
    assert f'"{source.text()}" [label=' in dot
    assert "peripheries=2" in dot.split(source.text(), 2)[1].split("\n")[0]
    assert f'"{source.text()}" -> "{append.text()}" [color="blue", label="lat"];' in dot


def test_view1_styles_are_overridable(corpus_analyses, corpus_programs):
    item = single(corpus_analyses["Beita_com_beita_contact"])
    style = ViewStyle(data_color="#112233", control_color="orange")
    dot = render_view1(item.slice, corpus_programs["Beita_com_beita_contact"], style)
    check_dot(dot)
    assert 'color="#112233"' in dot
    assert 'color="orange"' in dot  # control edges exist in the Beita slice


def test_view1_all_corpus_slices_pass_the_dot_checker(corpus_analyses, corpus_programs):
    for app, analysis in corpus_analyses.items():
        for item in analysis.slices:
            check_dot(render_view1(item.slice, corpus_programs[app]))


# ---------------------------------------------------------------------------
# View 2


def test_view2_roidsec_star(corpus_analyses):
    model = single(corpus_analyses["Roidsec"]).model
    dot = render_view2(model)
    check_dot(dot)
    assert 'label="pd:Location"' in dot
    assert 'label="dpv:Collect (1)"' in dot
    assert 'label="dpv:Combine (2)"' in dot
    assert 'label="hasPersonalData"' in dot
    assert "hasDataSource" not in dot  # first-party stays implicit


def test_view2_steam_has_data_source_edge(corpus_analyses):
    dot = render_view2(single(corpus_analyses["Steam"]).model)
    check_dot(dot)
    assert 'label="dpv:ThirdParty"' in dot
    assert 'label="hasDataSource"' in dot


def test_view2_minimal_model_is_two_edge_star():
    model = DpvModel(
        "t", PersonalData("x-test"), DataSource.FIRST_PARTY, (ProcessingCategory.COLLECT,)
    )
    dot = render_view2(model)
    check_dot(dot)
    assert dot.count("->") == 2  # personal data + the one processing node


# ---------------------------------------------------------------------------
# View 3


def test_view3_roidsec_amber_minimization_badge(corpus_analyses):
    item = single(corpus_analyses["Roidsec"])
    dot = render_view3(item.model, item.findings)
    check_dot(dot)
    assert 'label="Data minimization — GDPR Art. 5(1)(c)"' in dot
    assert 'fillcolor="#ffbf00"' in dot


def test_view3_overlay_green_adherence_badge(corpus_analyses):
    item = single(corpus_analyses["Overlay_android_samp"])
    dot = render_view3(item.model, item.findings)
    check_dot(dot)
    assert "Art. 25" in dot
    assert 'fillcolor="green"' in dot


def test_view3_no_findings_no_badges(corpus_analyses):
    model = single(corpus_analyses["Roidsec"]).model
    dot = render_view3(model, [])
    check_dot(dot)
    assert "badge" not in dot


def test_view3_rollup_lists_all_slices(combined_analysis):
    items = [(a.model, a.findings) for a in combined_analysis.slices]
    dot = render_view3_rollup("corpus", items)
    check_dot(dot)
    assert dot.count("slice") >= 4
    assert dot.count("badge") >= 5


def test_badge_labels_cite_articles(corpus_analyses):
    for analysis in corpus_analyses.values():
        for item in analysis.slices:
            for finding in item.findings:
                assert finding.article in badge_label(finding)


# ---------------------------------------------------------------------------
# Bundle


def test_bundle_full_corpus_counts(combined_analysis):
    bundle = bundle_of(combined_analysis)
    jsonschema.validate(bundle, SCHEMA)
    assert bundle["bundle_version"] == 1
    assert len(bundle["slices"]) == 4
    assert len(bundle["findings"]) >= 5


def test_bundle_empty_app(catalog):
    program = parse_slir("class A { method m() { return } }")
    from privslice.pipeline import analyze_program

    analysis = analyze_program(program, catalog, "empty")
    bundle = bundle_of(analysis)
    jsonschema.validate(bundle, SCHEMA)
    assert bundle["slices"] == [] and bundle["findings"] == []
    assert bundle["dpia_summary"] == {"rows": []}


def test_bundle_bytes_deterministic(combined_analysis):
    items = [(a.slice, a.model, a.findings) for a in combined_analysis.slices]
    first = emit_bundle("corpus", "0" * 64, items, combined_analysis.dpia, combined_analysis.program)
    second = emit_bundle("corpus", "0" * 64, items, combined_analysis.dpia, combined_analysis.program)
    assert first == second


def test_bundle_cross_view_integrity(combined_analysis):
    bundle = bundle_of(combined_analysis)
    findings_by_id = {f["id"]: f for f in bundle["findings"]}
    for record in bundle["slices"]:
        node_ids = {n["id"] for n in record["view1"]["nodes"]}
        for edge in record["view1"]["edges"]:
            assert edge["from"] in node_ids and edge["to"] in node_ids
        for element, cited in record["view2"]["evidence"].items():
            assert cited, element
            assert set(cited) <= node_ids
        for fid in record["view3"]["findings"]:
            finding = findings_by_id[fid]
            assert finding["slice"] == record["id"]
            assert set(finding["evidence"]) <= node_ids
    # dpia cells cite view1 nodes of their slice
    nodes_by_slice = {
        record["id"]: {n["id"] for n in record["view1"]["nodes"]}
        for record in bundle["slices"]
    }
    for row in bundle["dpia_summary"]["rows"]:
        for cell_name in (
            "collection", "use", "storage", "deletion", "sharing", "processing", "pseudonymization"
        ):
            cell = row[cell_name]
            assert set(cell["evidence"]) <= nodes_by_slice[row["slice"]]
            if not cell["evidence"]:
                assert cell["note"] == "no evidence found"


def test_bundle_view1_tags_mark_source_and_measures(combined_analysis):
    bundle = bundle_of(combined_analysis)
    tags_seen = set()
    for record in bundle["slices"]:
        for node in record["view1"]["nodes"]:
            tags_seen.update(node["tags"])
    assert "source" in tags_seen
    assert "processing:Collect" in tags_seen
    assert "measure:HashFunction" in tags_seen
    assert "third-party" in tags_seen


def test_dpia_summary_note_matches_cell_shape(corpus_analyses):
    analysis = corpus_analyses["Roidsec"]
    bundle = bundle_of(analysis)
    row = bundle["dpia_summary"]["rows"][0]
    assert row["storage"] == {"evidence": [], "note": "no evidence found"}
    assert row["collection"]["evidence"]
    assert "note" not in row["collection"]
