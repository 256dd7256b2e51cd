"""Signature catalogs: which call signatures count as privacy sources,
processing operations, or technical measures, and which package prefixes
mark third-party code.

Signatures are exact dotted names or prefix patterns with a trailing
`*`. Exact entries beat prefix entries; among prefixes the longest
match wins.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .dpv import PersonalData, ProcessingCategory, TechnicalMeasure, parse_purpose
from .errors import CatalogError

ROLE_SOURCE = "source"
ROLE_PROCESSING = "processing"
ROLE_MEASURE = "measure"
_ROLES = (ROLE_SOURCE, ROLE_PROCESSING, ROLE_MEASURE)

_SIGNATURE_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_$]*(\.[A-Za-z_][A-Za-z0-9_$]*)*(\.\*|\*)?$")
_PREFIX_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_$]*(\.[A-Za-z_][A-Za-z0-9_$]*)*$")

_ENTRY_KEYS = {"signature", "role", "personal_data", "processing", "measure", "purpose"}
_ROLE_FIELDS = {
    ROLE_SOURCE: "personal_data",
    ROLE_PROCESSING: "processing",
    ROLE_MEASURE: "measure",
}


@dataclass(frozen=True)
class CatalogEntry:
    signature: str
    role: str
    personal_data: PersonalData | None = None
    processing: ProcessingCategory | None = None
    measure: TechnicalMeasure | None = None
    purpose: str | None = None

    @property
    def is_pattern(self) -> bool:
        return self.signature.endswith("*")

    def matches(self, signature: str) -> bool:
        if self.is_pattern:
            return signature.startswith(self.signature[:-1])
        return signature == self.signature

    def specificity(self) -> tuple[int, int]:
        # exact match ranks above any prefix; longer prefixes above shorter
        return (1, 0) if not self.is_pattern else (0, len(self.signature))


@dataclass(frozen=True)
class Catalog:
    entries: tuple[CatalogEntry, ...]
    third_party_prefixes: tuple[str, ...] = ()

    def _best(self, signature: str, role: str) -> CatalogEntry | None:
        candidates = [e for e in self.entries if e.role == role and e.matches(signature)]
        if not candidates:
            return None
        return max(candidates, key=CatalogEntry.specificity)

    def source_for(self, signature: str) -> CatalogEntry | None:
        return self._best(signature, ROLE_SOURCE)

    def tag_for(self, signature: str) -> CatalogEntry | None:
        """Best processing or measure entry for the signature. When both
        roles match through different patterns, the more specific one wins."""
        processing = self._best(signature, ROLE_PROCESSING)
        measure = self._best(signature, ROLE_MEASURE)
        if processing is None:
            return measure
        if measure is None:
            return processing
        return max((processing, measure), key=CatalogEntry.specificity)

    def is_third_party(self, signature: str) -> bool:
        return any(
            signature == p or signature.startswith(p + ".") for p in self.third_party_prefixes
        )


def _parse_entry(raw: object, index: int) -> CatalogEntry:
    if not isinstance(raw, dict):
        raise CatalogError(f"entry {index}: expected an object")
    unknown = set(raw) - _ENTRY_KEYS
    if unknown:
        raise CatalogError(f"entry {index}: unknown keys {sorted(unknown)}")
    signature = raw.get("signature")
    if not isinstance(signature, str) or not _SIGNATURE_RE.match(signature):
        raise CatalogError(f"entry {index}: bad signature {signature!r}")
    role = raw.get("role")
    if role not in _ROLES:
        raise CatalogError(f"entry {index}: bad role {role!r}")

    required = _ROLE_FIELDS[role]
    allowed = {required} | ({"purpose"} if role == ROLE_PROCESSING else set())
    populated = {k for k in ("personal_data", "processing", "measure", "purpose") if k in raw}
    if required not in populated:
        raise CatalogError(f"entry {index}: role {role!r} requires {required!r}")
    extra = populated - allowed
    if extra:
        raise CatalogError(f"entry {index}: fields {sorted(extra)} not allowed for role {role!r}")

    try:
        personal_data = PersonalData(raw["personal_data"]) if "personal_data" in raw else None
        processing = ProcessingCategory(raw["processing"]) if "processing" in raw else None
        measure = TechnicalMeasure(raw["measure"]) if "measure" in raw else None
        purpose = parse_purpose(raw["purpose"]) if "purpose" in raw else None
    except ValueError as exc:
        raise CatalogError(f"entry {index}: {exc}") from exc
    return CatalogEntry(signature, role, personal_data, processing, measure, purpose)


def load_catalog(text: str) -> Catalog:
    """Parse and validate a catalog document. Raises CatalogError on any
    unknown key, bad category, duplicate (signature, role) pair, or a
    signature claimed by both the processing and measure roles."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CatalogError("top level must be an object")
    unknown = set(doc) - {"entries", "third_party_prefixes"}
    if unknown:
        raise CatalogError(f"unknown top-level keys {sorted(unknown)}")

    raw_entries = doc.get("entries", [])
    if not isinstance(raw_entries, list):
        raise CatalogError("'entries' must be an array")
    entries = tuple(_parse_entry(raw, i) for i, raw in enumerate(raw_entries))

    seen: set[tuple[str, str]] = set()
    for e in entries:
        key = (e.signature, e.role)
        if key in seen:
            raise CatalogError(f"duplicate entry for signature {e.signature!r} role {e.role!r}")
        seen.add(key)
    for e in entries:
        if e.role == ROLE_PROCESSING and (e.signature, ROLE_MEASURE) in seen:
            raise CatalogError(
                f"signature {e.signature!r} is both a processing and a measure entry"
            )

    raw_prefixes = doc.get("third_party_prefixes", [])
    if not isinstance(raw_prefixes, list):
        raise CatalogError("'third_party_prefixes' must be an array")
    for p in raw_prefixes:
        if not isinstance(p, str) or not _PREFIX_RE.match(p):
            raise CatalogError(f"bad third-party prefix {p!r}")

    return Catalog(entries, tuple(raw_prefixes))


def default_catalog_bytes() -> bytes:
    """The catalog shipped with the package."""
    return resources.files("privslice.data").joinpath("default_catalog.json").read_bytes()


def default_catalog() -> Catalog:
    return load_catalog(default_catalog_bytes().decode("utf-8"))
