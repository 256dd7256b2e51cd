"""Compliance rules over DPV models, and the DPIA summary table.

Rule ids are fixed, and each determines its article citation and
severity. "Precedes" is judged on the model's processing/measure order
(the dependence order of the slice), not on source line numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .depgraph import StmtId
from .dpv import DataSource, DpvModel, PersonalData, ProcessingCategory
from .errors import AnalysisInputError
from .slicer import PrivacySlice


class Severity(str, Enum):
    POTENTIAL_VIOLATION = "PotentialViolation"
    ADHERENCE = "Adherence"
    SUGGESTION = "Suggestion"
    NOTE = "Note"

    def __str__(self) -> str:
        return self.value


RULE_PSEUDONYMIZE_VIOLATION = "R-A25-VIOLATION"
RULE_PSEUDONYMIZE_ADHERENCE = "R-A25-ADHERENCE"
RULE_DATA_MINIMIZATION = "R-A5-MIN"
RULE_THIRD_PARTY_TRANSFER = "R-CH5-3P"

RULE_ARTICLE = {
    RULE_PSEUDONYMIZE_VIOLATION: "GDPR Art. 25",
    RULE_PSEUDONYMIZE_ADHERENCE: "GDPR Art. 25",
    RULE_DATA_MINIMIZATION: "GDPR Art. 5(1)(c)",
    RULE_THIRD_PARTY_TRANSFER: "GDPR Ch. V",
}

RULE_SEVERITY = {
    RULE_PSEUDONYMIZE_VIOLATION: Severity.POTENTIAL_VIOLATION,
    RULE_PSEUDONYMIZE_ADHERENCE: Severity.ADHERENCE,
    RULE_DATA_MINIMIZATION: Severity.SUGGESTION,
    RULE_THIRD_PARTY_TRANSFER: Severity.NOTE,
}

# Operations that consume collected data and therefore require a prior
# technical measure under the Art. 25 rule.
CONSUMING_OPS = frozenset(
    {
        ProcessingCategory.STORE,
        ProcessingCategory.USE,
        ProcessingCategory.SHARE,
        ProcessingCategory.ERASE,
    }
)


@dataclass(frozen=True)
class Finding:
    rule_id: str
    article: str
    severity: Severity
    slice_id: str
    evidence: tuple[StmtId, ...]
    message: str

    @property
    def finding_id(self) -> str:
        return f"{self.slice_id}:{self.rule_id}"


def _measure_precedes(model: DpvModel, processing_index: int) -> bool:
    """A measure with unknown position (parsed, not mapped) never counts
    as preceding."""
    return any(
        m.position is not None and m.position <= processing_index for m in model.measures
    )


def _evidence(model: DpvModel, keys: Sequence[str]) -> tuple[StmtId, ...]:
    nodes: list[StmtId] = []
    for key in keys:
        nodes.extend(model.evidence.get(key, ()))
    return tuple(sorted(set(nodes)))


def check(model: DpvModel, sl: PrivacySlice) -> tuple[Finding, ...]:
    """Evaluate all rules for one slice; findings ordered by rule id."""
    if model.personal_data != sl.personal_data:
        raise AnalysisInputError(
            f"model {model.process_id} does not match slice {sl.id}: personal data differs"
        )
    node_set = set(sl.nodes)
    for key, nodes in model.evidence.items():
        for node in nodes:
            if node not in node_set:
                raise AnalysisInputError(
                    f"model {model.process_id} evidence {key} cites {node.text()} "
                    f"outside slice {sl.id}"
                )

    consuming = [
        (i, p) for i, p in enumerate(model.processing) if p in CONSUMING_OPS
    ]
    pd = model.personal_data
    findings: list[Finding] = []

    if consuming:
        # A measure preceding the first consuming op precedes them all,
        # so this single test decides between violation and adherence.
        first_idx = consuming[0][0]
        ops = ", ".join(str(p) for _, p in consuming)
        consuming_keys = [f"processing:{p}" for _, p in consuming]
        if _measure_precedes(model, first_idx):
            measure_keys = [f"measure:{m.measure}" for m in model.measures]
            findings.append(
                Finding(
                    RULE_PSEUDONYMIZE_ADHERENCE,
                    RULE_ARTICLE[RULE_PSEUDONYMIZE_ADHERENCE],
                    RULE_SEVERITY[RULE_PSEUDONYMIZE_ADHERENCE],
                    sl.id,
                    _evidence(model, measure_keys + consuming_keys),
                    f"{pd} data passes through a technical measure before it is "
                    f"consumed ({ops}).",
                )
            )
        else:
            findings.append(
                Finding(
                    RULE_PSEUDONYMIZE_VIOLATION,
                    RULE_ARTICLE[RULE_PSEUDONYMIZE_VIOLATION],
                    RULE_SEVERITY[RULE_PSEUDONYMIZE_VIOLATION],
                    sl.id,
                    _evidence(model, consuming_keys),
                    f"{pd} data is consumed ({ops}) with no prior technical measure "
                    f"such as pseudonymization.",
                )
            )
    elif model.measures:
        measure_keys = [f"measure:{m.measure}" for m in model.measures]
        findings.append(
            Finding(
                RULE_PSEUDONYMIZE_ADHERENCE,
                RULE_ARTICLE[RULE_PSEUDONYMIZE_ADHERENCE],
                RULE_SEVERITY[RULE_PSEUDONYMIZE_ADHERENCE],
                sl.id,
                _evidence(model, measure_keys),
                f"{pd} data passes through a technical measure and is never "
                f"consumed unprotected.",
            )
        )
    else:
        keys = ["processing:Collect"]
        if ProcessingCategory.COMBINE in model.processing:
            keys.append("processing:Combine")
        findings.append(
            Finding(
                RULE_DATA_MINIMIZATION,
                RULE_ARTICLE[RULE_DATA_MINIMIZATION],
                RULE_SEVERITY[RULE_DATA_MINIMIZATION],
                sl.id,
                _evidence(model, keys),
                f"{pd} data is collected but never stored, used, shared, or erased; "
                f"consider not collecting it.",
            )
        )

    if model.data_source is DataSource.THIRD_PARTY:
        findings.append(
            Finding(
                RULE_THIRD_PARTY_TRANSFER,
                RULE_ARTICLE[RULE_THIRD_PARTY_TRANSFER],
                RULE_SEVERITY[RULE_THIRD_PARTY_TRANSFER],
                sl.id,
                _evidence(model, ["data_source"]),
                f"{pd} data comes from a third-party source; lawful-transfer "
                f"obligations apply.",
            )
        )

    return tuple(sorted(findings, key=lambda f: f.rule_id))


# ---------------------------------------------------------------------------
# DPIA summary


@dataclass(frozen=True)
class DpiaCell:
    evidence: tuple[StmtId, ...] = ()

    @property
    def note(self) -> str | None:
        return None if self.evidence else "no evidence found"


@dataclass(frozen=True)
class DpiaRow:
    slice_id: str
    personal_data: PersonalData
    source_api: str
    data_source: DataSource
    collection: DpiaCell
    use: DpiaCell
    storage: DpiaCell
    deletion: DpiaCell
    sharing: DpiaCell
    processing: DpiaCell  # every processing-category evidence node, combined
    pseudonymization: DpiaCell


@dataclass(frozen=True)
class DpiaSummary:
    rows: tuple[DpiaRow, ...]


def summarize_dpia(items: Sequence[tuple[DpvModel, PrivacySlice]]) -> DpiaSummary:
    """One row per slice, answering the assessment template's questions:
    where data comes from, how it is used, stored, deleted, processed,
    shared, and whether it is pseudonymized."""
    rows: list[DpiaRow] = []
    for model, sl in items:

        def cell(*keys: str) -> DpiaCell:
            return DpiaCell(_evidence(model, keys))

        measure_keys = tuple(f"measure:{m.measure}" for m in model.measures)
        processing_keys = tuple(f"processing:{p}" for p in model.processing)
        rows.append(
            DpiaRow(
                slice_id=sl.id,
                personal_data=model.personal_data,
                source_api=sl.source_signature,
                data_source=model.data_source,
                collection=cell("processing:Collect"),
                use=cell("processing:Use"),
                storage=cell("processing:Store"),
                deletion=cell("processing:Erase"),
                sharing=cell("processing:Share"),
                processing=cell(*processing_keys),
                pseudonymization=cell(*measure_keys),
            )
        )
    return DpiaSummary(tuple(rows))
