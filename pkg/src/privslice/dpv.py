"""Privacy-vocabulary model: a frozen subset of DPV categories, the
per-slice model record, and its Turtle-subset serialization.

The vocabulary covers exactly the personal-data, processing, and
technical-measure categories this pipeline can observe, plus an `x-`
escape hatch for custom personal-data names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Mapping, NamedTuple

from .errors import TurtleParseError

if TYPE_CHECKING:  # pragma: no cover
    from .depgraph import StmtId
    from .slicer import PrivacySlice


# ---------------------------------------------------------------------------
# Categories

_KNOWN_PERSONAL_DATA = ("Email", "Location", "Phone", "Contact", "DeviceId")
_CUSTOM_RE = re.compile(r"^x-[A-Za-z0-9_][A-Za-z0-9_.-]*$")
_PURPOSE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


@dataclass(frozen=True)
class PersonalData:
    """A personal-data category: one of the known names, or a custom
    `x-` prefixed identifier."""

    name: str

    def __post_init__(self) -> None:
        if self.name not in _KNOWN_PERSONAL_DATA and not _CUSTOM_RE.match(self.name):
            raise ValueError(f"unknown personal data category: {self.name!r}")

    def __str__(self) -> str:
        return self.name


EMAIL = PersonalData("Email")
LOCATION = PersonalData("Location")
PHONE = PersonalData("Phone")
CONTACT = PersonalData("Contact")
DEVICE_ID = PersonalData("DeviceId")


class ProcessingCategory(str, Enum):
    COLLECT = "Collect"
    STORE = "Store"
    USE = "Use"
    SHARE = "Share"
    COMBINE = "Combine"
    ERASE = "Erase"

    def __str__(self) -> str:
        return self.value


class TechnicalMeasure(str, Enum):
    HASH_FUNCTION = "HashFunction"
    ENCRYPTION = "Encryption"
    PSEUDONYMISATION = "Pseudonymisation"

    def __str__(self) -> str:
        return self.value


class DataSource(str, Enum):
    FIRST_PARTY = "FirstParty"
    THIRD_PARTY = "ThirdParty"

    def __str__(self) -> str:
        return self.value


def parse_personal_data(name: str) -> PersonalData:
    try:
        return PersonalData(name)
    except ValueError:
        raise


def parse_purpose(name: str) -> str:
    if not _PURPOSE_RE.match(name):
        raise ValueError(f"not a valid purpose identifier: {name!r}")
    return name


class MeasureUse(NamedTuple):
    """A technical measure and its position in the processing sequence:
    position k means the measure was applied after the first k processing
    categories. None when the order is unknown (parsed from Turtle)."""

    measure: TechnicalMeasure
    position: int | None


# ---------------------------------------------------------------------------
# Model


@dataclass(frozen=True)
class DpvModel:
    process_id: str
    personal_data: PersonalData
    data_source: DataSource
    processing: tuple[ProcessingCategory, ...]
    measures: tuple[MeasureUse, ...] = ()
    purpose: str | None = None
    # Model element -> slice statement ids backing it. Keys: "personal_data",
    # "data_source", "processing:<Cat>", "measure:<M>", "purpose".
    evidence: Mapping[str, tuple["StmtId", ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.processing or self.processing[0] is not ProcessingCategory.COLLECT:
            raise ValueError("processing must be non-empty and begin with Collect")


def turtle_fields(model: DpvModel) -> tuple:
    """Projection to the fields carried by the Turtle serialization
    (measure positions and evidence are not serialized)."""
    return (
        model.process_id,
        model.personal_data,
        model.data_source,
        model.processing,
        tuple(m.measure for m in model.measures),
        model.purpose,
    )


_ID_SAFE_RE = re.compile(r"[^A-Za-z0-9_-]+")


def sanitize_process_id(raw: str) -> str:
    cleaned = _ID_SAFE_RE.sub("_", raw).strip("_")
    return cleaned or "process"


# ---------------------------------------------------------------------------
# Slice -> model mapping


def _topological_order(sl: "PrivacySlice") -> list["StmtId"]:
    """Kahn's algorithm over the slice's dependence edges; ties (and cycle
    breaking) follow the slice's program-order node listing."""
    position = {node: i for i, node in enumerate(sl.nodes)}
    indeg = {node: 0 for node in sl.nodes}
    succs: dict = {node: [] for node in sl.nodes}
    for e in sl.edges:
        if e.src == e.dst:
            continue
        succs[e.src].append(e.dst)
        indeg[e.dst] += 1
    order: list = []
    remaining = set(sl.nodes)
    ready = sorted((n for n in remaining if indeg[n] == 0), key=position.__getitem__)
    while remaining:
        if not ready:
            # dependence cycle: fall back to program order
            ready = [min(remaining, key=position.__getitem__)]
        node = ready.pop(0)
        if node not in remaining:
            continue
        remaining.discard(node)
        order.append(node)
        for s in succs[node]:
            if s in remaining:
                indeg[s] -= 1
                if indeg[s] == 0:
                    ready.append(s)
        ready.sort(key=position.__getitem__)
    return order


def map_slice(sl: "PrivacySlice", process_id: str | None = None) -> DpvModel:
    """Abstract an annotated slice into its DPV model: processing categories
    in first-occurrence order along the dependence order, measures with
    their positions, the data source, and the first stated purpose."""
    order = _topological_order(sl)
    source_tag = sl.annotations.get(sl.source_stmt)
    third_party = bool(source_tag and source_tag.third_party)

    processing: list[ProcessingCategory] = []
    proc_evidence: dict[ProcessingCategory, list] = {}
    measures: list[MeasureUse] = []
    measure_evidence: dict[TechnicalMeasure, list] = {}
    seen_measures: set[TechnicalMeasure] = set()
    purpose: str | None = None
    purpose_evidence: list = []

    for node in order:
        tag = sl.annotations.get(node)
        if tag is None:
            continue
        if tag.processing is not None:
            if tag.processing not in proc_evidence:
                proc_evidence[tag.processing] = []
                processing.append(tag.processing)
            proc_evidence[tag.processing].append(node)
        if tag.measure is not None:
            measure_evidence.setdefault(tag.measure, []).append(node)
            if tag.measure not in seen_measures:
                seen_measures.add(tag.measure)
                measures.append(MeasureUse(tag.measure, len(processing)))
        if tag.purpose is not None and purpose is None:
            purpose = tag.purpose
    if purpose is not None:
        purpose_evidence = [
            n for n in order
            if (t := sl.annotations.get(n)) is not None and t.purpose == purpose
        ]

    evidence: dict[str, tuple] = {
        "personal_data": (sl.source_stmt,),
        "data_source": (sl.source_stmt,),
    }
    for cat, nodes in proc_evidence.items():
        evidence[f"processing:{cat.value}"] = tuple(nodes)
    for m, nodes in measure_evidence.items():
        evidence[f"measure:{m.value}"] = tuple(nodes)
    if purpose is not None:
        evidence["purpose"] = tuple(purpose_evidence)

    return DpvModel(
        process_id=process_id if process_id is not None else sanitize_process_id(sl.id),
        personal_data=sl.personal_data,
        data_source=DataSource.THIRD_PARTY if third_party else DataSource.FIRST_PARTY,
        processing=tuple(processing),
        measures=tuple(measures),
        purpose=purpose,
        evidence=evidence,
    )


# ---------------------------------------------------------------------------
# Turtle subset

PREFIX_HEADER = (
    "@prefix ex: <http://example.org/slice#> .\n"
    "@prefix dpv: <https://w3id.org/dpv#> .\n"
    "@prefix pd: <https://w3id.org/dpv/pd#> .\n"
)


def to_turtle(model: DpvModel) -> str:
    """Serialize in a fixed predicate order with deterministic bytes.
    hasDataSource appears only for third-party sources; hasTechnicalMeasure
    and hasPurpose only when present."""
    preds: list[str] = [f"dpv:hasPersonalData pd:{model.personal_data}"]
    if model.data_source is DataSource.THIRD_PARTY:
        preds.append(f"dpv:hasDataSource dpv:{model.data_source}")
    preds.append("dpv:hasProcessing " + ", ".join(f"dpv:{p}" for p in model.processing))
    if model.measures:
        preds.append(
            "dpv:hasTechnicalMeasure " + ", ".join(f"dpv:{m.measure}" for m in model.measures)
        )
    if model.purpose is not None:
        preds.append(f"dpv:hasPurpose dpv:{model.purpose}")

    lines = [f"ex:{model.process_id} a dpv:Process ;"]
    for i, pred in enumerate(preds):
        terminator = " ." if i == len(preds) - 1 else " ;"
        lines.append(f"    {pred}{terminator}")
    return PREFIX_HEADER + "\n" + "\n".join(lines) + "\n"


_SUBJECT_RE = re.compile(r"^ex:([A-Za-z0-9_-]+)\s+a\s+dpv:Process\s*;$")
_PREDICATE_RE = re.compile(r"^(dpv:[A-Za-z]+)\s+(.+?)\s*([;.])$")
_TERM_RE = re.compile(r"^(dpv|pd):([A-Za-z0-9_.-]+)$")

_PARSERS = {
    "dpv:hasPersonalData": "personal_data",
    "dpv:hasDataSource": "data_source",
    "dpv:hasProcessing": "processing",
    "dpv:hasTechnicalMeasure": "measures",
    "dpv:hasPurpose": "purpose",
}


def _parse_term(raw: str, want_prefix: str, line_no: int) -> str:
    m = _TERM_RE.match(raw.strip())
    if not m or m.group(1) != want_prefix:
        raise TurtleParseError(f"line {line_no}: malformed term {raw.strip()!r}")
    return m.group(2)


def parse_turtle_subset(text: str) -> DpvModel:
    """Inverse of to_turtle, up to evidence and measure positions."""
    lines = [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("@prefix")]
    if not lines:
        raise TurtleParseError("empty document")

    subject = _SUBJECT_RE.match(lines[0].strip())
    if not subject:
        raise TurtleParseError(f"line 1: expected 'ex:<id> a dpv:Process ;', got {lines[0].strip()!r}")
    process_id = subject.group(1)

    fields: dict[str, object] = {}
    for idx, raw in enumerate(lines[1:], start=2):
        m = _PREDICATE_RE.match(raw.strip())
        if not m:
            raise TurtleParseError(f"line {idx}: malformed triple {raw.strip()!r}")
        predicate, objects, terminator = m.groups()
        if predicate not in _PARSERS:
            raise TurtleParseError(f"line {idx}: unknown predicate {predicate!r}")
        key = _PARSERS[predicate]
        if key in fields:
            raise TurtleParseError(f"line {idx}: duplicate predicate {predicate!r}")
        try:
            if key == "personal_data":
                fields[key] = PersonalData(_parse_term(objects, "pd", idx))
            elif key == "data_source":
                fields[key] = DataSource(_parse_term(objects, "dpv", idx))
            elif key == "processing":
                cats = [ProcessingCategory(_parse_term(o, "dpv", idx)) for o in objects.split(",")]
                fields[key] = tuple(cats)
            elif key == "measures":
                ms = [TechnicalMeasure(_parse_term(o, "dpv", idx)) for o in objects.split(",")]
                fields[key] = tuple(MeasureUse(m_, None) for m_ in ms)
            elif key == "purpose":
                fields[key] = parse_purpose(_parse_term(objects, "dpv", idx))
        except ValueError as exc:
            raise TurtleParseError(f"line {idx}: {exc}") from exc
        if terminator == ".":
            if idx != len(lines):
                raise TurtleParseError(f"line {idx}: statement ends before the last line")
            break
    else:
        raise TurtleParseError("document not terminated with '.'")

    if "personal_data" not in fields:
        raise TurtleParseError("missing dpv:hasPersonalData")
    if "processing" not in fields:
        raise TurtleParseError("missing dpv:hasProcessing")

    try:
        return DpvModel(
            process_id=process_id,
            personal_data=fields["personal_data"],  # type: ignore[arg-type]
            data_source=fields.get("data_source", DataSource.FIRST_PARTY),  # type: ignore[arg-type]
            processing=fields["processing"],  # type: ignore[arg-type]
            measures=fields.get("measures", ()),  # type: ignore[arg-type]
            purpose=fields.get("purpose"),  # type: ignore[arg-type]
        )
    except ValueError as exc:
        raise TurtleParseError(str(exc)) from exc
