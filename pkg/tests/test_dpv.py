from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from gens import random_model
from privslice.dpv import (
    DataSource,
    DpvModel,
    MeasureUse,
    PersonalData,
    ProcessingCategory,
    TechnicalMeasure,
    map_slice,
    parse_turtle_subset,
    sanitize_process_id,
    to_turtle,
    turtle_fields,
)
from privslice.errors import TurtleParseError

P = ProcessingCategory


# ---------------------------------------------------------------------------
# Category types


def test_known_personal_data_categories():
    for name in ("Email", "Location", "Phone", "Contact", "DeviceId"):
        assert PersonalData(name).name == name


def test_custom_personal_data_requires_x_prefix():
    assert PersonalData("x-gait").name == "x-gait"
    with pytest.raises(ValueError):
        PersonalData("Gait")
    with pytest.raises(ValueError):
        PersonalData("x-")


def test_model_must_begin_with_collect():
    with pytest.raises(ValueError, match="begin with Collect"):
        DpvModel("p", PersonalData("Email"), DataSource.FIRST_PARTY, (P.STORE,))
    with pytest.raises(ValueError):
        DpvModel("p", PersonalData("Email"), DataSource.FIRST_PARTY, ())


# ---------------------------------------------------------------------------
# map_slice over the corpus


def corpus_model(analyses, app):
    slices = analyses[app].slices
    assert len(slices) == 1
    return slices[0].model, slices[0].slice


def test_map_slice_steam(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Steam")
    assert model.personal_data == PersonalData("Email")
    assert model.data_source is DataSource.THIRD_PARTY
    assert model.processing == (P.COLLECT, P.STORE)
    assert model.measures == ()
    assert model.purpose is None


def test_map_slice_beita(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Beita_com_beita_contact")
    assert model.personal_data == PersonalData("Email")
    assert model.data_source is DataSource.FIRST_PARTY
    assert model.processing == (P.COLLECT, P.USE)
    assert model.purpose == "CommunicationManagement"


def test_map_slice_roidsec(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Roidsec")
    assert model.personal_data == PersonalData("Location")
    assert model.data_source is DataSource.FIRST_PARTY
    assert model.processing == (P.COLLECT, P.COMBINE)
    assert model.measures == () and model.purpose is None


def test_map_slice_overlay_measure_position(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Overlay_android_samp")
    assert model.processing == (P.COLLECT,)
    assert model.measures == (MeasureUse(TechnicalMeasure.HASH_FUNCTION, 1),)


def test_unannotated_slice_maps_to_collect_only(corpus_analyses, catalog):
    from privslice.depgraph import build_pdg
    from privslice.slicer import build_slices
    from privslice.slir import parse_slir

    program = parse_slir(
        "class A { method m(loc) {\n"
        "lat = call android.location.Location.getLatitude(loc)\n"
        "r = call com.example.Unknown.advance(lat)\n} }"
    )
    sl = build_slices(program, build_pdg(program), catalog, "app")[0]
    model = map_slice(sl)
    assert model.processing == (P.COLLECT,)
    assert model.measures == () and model.purpose is None


def test_evidence_completeness_over_corpus(corpus_analyses):
    for analysis in corpus_analyses.values():
        for item in analysis.slices:
            model, sl = item.model, item.slice
            node_set = set(sl.nodes)
            for cat in model.processing:
                nodes = model.evidence[f"processing:{cat.value}"]
                assert nodes and set(nodes) <= node_set
                for n in nodes:
                    tag = sl.annotations[n]
                    assert tag.processing is cat
            for mu in model.measures:
                nodes = model.evidence[f"measure:{mu.measure.value}"]
                assert nodes and set(nodes) <= node_set
                for n in nodes:
                    assert sl.annotations[n].measure is mu.measure


def test_processing_order_respects_dependence_order(corpus_analyses):
    # Collect evidence precedes every other category's evidence in each
    # corpus slice, and Collect comes first in the model.
    for analysis in corpus_analyses.values():
        for item in analysis.slices:
            model = item.model
            assert model.processing[0] is P.COLLECT
            positions = {n: i for i, n in enumerate(item.slice.nodes)}
            collect_nodes = model.evidence["processing:Collect"]
            for cat in model.processing[1:]:
                for n in model.evidence[f"processing:{cat.value}"]:
                    assert min(positions[c] for c in collect_nodes) <= positions[n]


# ---------------------------------------------------------------------------
# Turtle emission


def test_turtle_steam(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Steam")
    text = to_turtle(model)
    assert "ex:Steam a dpv:Process ;" in text
    assert "dpv:hasPersonalData pd:Email ;" in text
    assert "dpv:hasDataSource dpv:ThirdParty ;" in text
    assert "dpv:hasProcessing dpv:Collect, dpv:Store ." in text
    assert "hasTechnicalMeasure" not in text and "hasPurpose" not in text


def test_turtle_overlay_measure(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Overlay_android_samp")
    assert "dpv:hasTechnicalMeasure dpv:HashFunction ." in to_turtle(model)


def test_turtle_beita_purpose(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Beita_com_beita_contact")
    text = to_turtle(model)
    assert "dpv:hasProcessing dpv:Collect, dpv:Use ;" in text
    assert "dpv:hasPurpose dpv:CommunicationManagement ." in text
    assert "hasDataSource" not in text  # first party is implied by omission


def test_turtle_minimal_model_is_three_statement_lines():
    model = DpvModel("x_test", PersonalData("x-test"), DataSource.FIRST_PARTY, (P.COLLECT,))
    text = to_turtle(model)
    header, _, body = text.partition("\n\n")
    assert header.count("@prefix") == 3
    body_lines = body.strip("\n").split("\n")
    assert body_lines == [
        "ex:x_test a dpv:Process ;",
        "    dpv:hasPersonalData pd:x-test ;",
        "    dpv:hasProcessing dpv:Collect .",
    ]


def test_turtle_bytes_are_deterministic(corpus_analyses):
    model, _ = corpus_model(corpus_analyses, "Steam")
    assert to_turtle(model) == to_turtle(model)


# ---------------------------------------------------------------------------
# Turtle parsing


def test_turtle_roundtrip_over_corpus(corpus_analyses):
    for analysis in corpus_analyses.values():
        for item in analysis.slices:
            model = item.model
            parsed = parse_turtle_subset(to_turtle(model))
            assert turtle_fields(parsed) == turtle_fields(model)
            assert all(m.position is None for m in parsed.measures)
            assert parsed.evidence == {}


def test_turtle_unknown_predicate_rejected():
    text = (
        "ex:p a dpv:Process ;\n"
        "    dpv:hasPersonalData pd:Email ;\n"
        "    dpv:hasWeather dpv:Sunny ;\n"
        "    dpv:hasProcessing dpv:Collect .\n"
    )
    with pytest.raises(TurtleParseError, match="unknown predicate"):
        parse_turtle_subset(text)


def test_turtle_empty_document_rejected():
    with pytest.raises(TurtleParseError, match="empty"):
        parse_turtle_subset("")
    with pytest.raises(TurtleParseError, match="empty"):
        parse_turtle_subset(PREFIXES_ONLY)


PREFIXES_ONLY = (
    "@prefix ex: <http://example.org/slice#> .\n"
    "@prefix dpv: <https://w3id.org/dpv#> .\n"
    "@prefix pd: <https://w3id.org/dpv/pd#> .\n"
)


def test_turtle_unknown_category_value_rejected():
    text = (
        "ex:p a dpv:Process ;\n"
        "    dpv:hasPersonalData pd:Weather ;\n"
        "    dpv:hasProcessing dpv:Collect .\n"
    )
    with pytest.raises(TurtleParseError, match="Weather"):
        parse_turtle_subset(text)


def test_turtle_malformed_triple_rejected():
    with pytest.raises(TurtleParseError):
        parse_turtle_subset("ex:p a dpv:Process ;\n    dpv:hasPersonalData\n")
    with pytest.raises(TurtleParseError, match="expected"):
        parse_turtle_subset("nonsense line\n")


def test_turtle_missing_required_predicates_rejected():
    with pytest.raises(TurtleParseError, match="hasProcessing"):
        parse_turtle_subset("ex:p a dpv:Process ;\n    dpv:hasPersonalData pd:Email .\n")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_turtle_roundtrip_random_models(seed):
    model = random_model(random.Random(seed), process_id=f"proc{seed % 7}")
    parsed = parse_turtle_subset(to_turtle(model))
    assert turtle_fields(parsed) == turtle_fields(model)


def test_sanitize_process_id():
    assert sanitize_process_id("My App:v2#1") == "My_App_v2_1"
    assert sanitize_process_id("app:cls.m#0") == "app_cls_m_0"
    assert sanitize_process_id("///") == "process"
