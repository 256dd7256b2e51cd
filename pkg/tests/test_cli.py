from __future__ import annotations

from click.testing import CliRunner

from conftest import CORPUS_DIR
from privslice.cli import main

runner = CliRunner()


def analyze(*args: str):
    return runner.invoke(main, ["analyze", *args])


def check(*args: str):
    return runner.invoke(main, ["check", *args])


def ir(stem: str) -> str:
    return str(CORPUS_DIR / f"{stem}.slir")


def test_analyze_steam_exits_2(tmp_path):
    result = analyze("--ir", ir("steam"), "--out", str(tmp_path / "out"), "--app-name", "Steam")
    assert result.exit_code == 2
    assert (tmp_path / "out" / "bundle.json").exists()


def test_analyze_overlay_exits_0(tmp_path):
    result = analyze(
        "--ir", ir("overlay_android_samp"), "--out", str(tmp_path / "out"),
        "--app-name", "Overlay_android_samp",
    )
    assert result.exit_code == 0
    assert (tmp_path / "out" / "bundle.json").exists()


def test_missing_catalog_exits_1_without_outputs(tmp_path):
    out = tmp_path / "out"
    result = analyze(
        "--ir", ir("steam"), "--catalog", str(tmp_path / "nope.json"), "--out", str(out)
    )
    assert result.exit_code == 1
    assert "cannot read catalog" in result.stderr
    assert not out.exists()


def test_missing_ir_exits_1(tmp_path):
    result = analyze("--ir", str(tmp_path / "nope.slir"), "--out", str(tmp_path / "out"))
    assert result.exit_code == 1
    assert "cannot read IR" in result.stderr


def test_parse_error_reports_location_and_exits_1(tmp_path):
    bad = tmp_path / "bad.slir"
    bad.write_text("class A { method m() { goto L9 } }", encoding="utf-8")
    out = tmp_path / "out"
    result = analyze("--ir", str(bad), "--out", str(out))
    assert result.exit_code == 1
    assert "undefined label 'L9'" in result.stderr
    assert "1:24" in result.stderr
    assert not out.exists()


def test_catalog_conflict_exits_1(tmp_path):
    catalog = tmp_path / "catalog.json"
    catalog.write_text(
        '{"entries": ['
        '{"signature": "a.b.C.f", "role": "processing", "processing": "Store"},'
        '{"signature": "a.b.C.f", "role": "measure", "measure": "HashFunction"}]}',
        encoding="utf-8",
    )
    result = analyze("--ir", ir("steam"), "--catalog", str(catalog), "--out", str(tmp_path / "o"))
    assert result.exit_code == 1
    assert "both a processing and a measure" in result.stderr


def test_bad_emit_value_exits_1(tmp_path):
    result = analyze("--ir", ir("steam"), "--out", str(tmp_path / "o"), "--emit", "png")
    assert result.exit_code == 1
    assert "unknown --emit" in result.stderr


def test_default_emit_writes_bundle_only(tmp_path):
    out = tmp_path / "out"
    analyze("--ir", ir("roidsec"), "--out", str(out), "--app-name", "Roidsec")
    assert [p.name for p in sorted(out.iterdir())] == ["bundle.json"]


def test_full_emit_writes_dot_and_turtle(tmp_path):
    out = tmp_path / "out"
    result = analyze(
        "--ir", ir("overlay_android_samp"), "--out", str(out),
        "--emit", "bundle,dot,turtle", "--app-name", "Overlay_android_samp",
    )
    assert result.exit_code == 0
    names = {p.name for p in out.iterdir()}
    assert "bundle.json" in names and "view3-rollup.dot" in names
    assert any(n.startswith("view1-") and n.endswith(".dot") for n in names)
    assert any(n.startswith("view2-") and n.endswith(".dot") for n in names)
    assert any(n.startswith("view2-") and n.endswith(".ttl") for n in names)
    assert any(n.startswith("view3-") and n.endswith(".dot") for n in names)


def test_check_roidsec_prints_one_suggestion(tmp_path):
    result = check("--ir", ir("roidsec"), "--app-name", "Roidsec")
    assert result.exit_code == 0
    lines = result.output.strip().split("\n")
    assert len(lines) == 1
    severity, article, slice_id, message = lines[0].split("\t")
    assert severity == "Suggestion"
    assert article == "GDPR Art. 5(1)(c)"
    assert slice_id.startswith("Roidsec:")
    assert message


def test_check_beita_prints_violation_and_exits_2():
    result = check("--ir", ir("beita_com_beita_contact"))
    assert result.exit_code == 2
    lines = result.output.strip().split("\n")
    assert len(lines) == 1
    assert lines[0].startswith("PotentialViolation\tGDPR Art. 25\t")


def test_check_empty_program_prints_nothing(tmp_path):
    empty = tmp_path / "empty.slir"
    empty.write_text("class A { method m() { return } }", encoding="utf-8")
    result = check("--ir", str(empty))
    assert result.exit_code == 0
    assert result.output == ""


def test_check_writes_no_files(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    check("--ir", ir("steam"))
    assert list(tmp_path.iterdir()) == []


def test_unreachable_code_warning_on_stderr(tmp_path):
    src = tmp_path / "dead.slir"
    src.write_text(
        "class A { method m() {\nreturn\nx = const 1\n} }", encoding="utf-8"
    )
    result = analyze("--ir", str(src), "--out", str(tmp_path / "out"))
    assert result.exit_code == 0
    assert "warning: unreachable statement A.m#1 (line 3)" in result.stderr


def test_app_name_defaults_to_file_stem(tmp_path):
    out = tmp_path / "out"
    analyze("--ir", ir("roidsec"), "--out", str(out))
    assert '"app": "roidsec"' in (out / "bundle.json").read_text()


def test_bundle_records_sha256_of_catalog_bytes(tmp_path):
    import hashlib
    import json

    from privslice.catalog import default_catalog_bytes

    out = tmp_path / "out"
    analyze("--ir", ir("roidsec"), "--out", str(out))
    bundle = json.loads((out / "bundle.json").read_text())
    assert bundle["catalog_digest"] == hashlib.sha256(default_catalog_bytes()).hexdigest()
