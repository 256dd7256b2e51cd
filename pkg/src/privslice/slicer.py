"""Privacy sources and forward slices over the program dependence graph."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

from . import slir
from .catalog import Catalog, CatalogEntry, ROLE_MEASURE, ROLE_PROCESSING
from .depgraph import Pdg, PdgEdge, StmtId
from .dpv import PersonalData, ProcessingCategory, TechnicalMeasure
from .errors import AnalysisInputError
from .slir import SlirProgram


class SourceHit(NamedTuple):
    stmt: StmtId
    personal_data: PersonalData
    third_party: bool
    signature: str


@dataclass(frozen=True)
class NodeTag:
    """Catalog-derived annotation for one slice node."""

    processing: ProcessingCategory | None = None
    measure: TechnicalMeasure | None = None
    purpose: str | None = None
    third_party: bool = False


@dataclass(frozen=True)
class SliceGraph:
    """Forward-reachable nodes (in program order) and the induced edges."""

    nodes: tuple[StmtId, ...]
    edges: tuple[PdgEdge, ...]


@dataclass(frozen=True)
class PrivacySlice:
    id: str
    source_stmt: StmtId
    source_signature: str
    personal_data: PersonalData
    nodes: tuple[StmtId, ...]
    edges: tuple[PdgEdge, ...]
    annotations: dict[StmtId, NodeTag] = field(default_factory=dict)


def find_sources(program: SlirProgram, catalog: Catalog) -> tuple[SourceHit, ...]:
    """Call statements matching a source entry, in program order."""
    hits: list[SourceHit] = []
    for cls in program.classes:
        for method in cls.methods:
            for i, stmt in enumerate(method.statements):
                signature = slir.call_signature(stmt)
                if signature is None:
                    continue
                entry = catalog.source_for(signature)
                if entry is None:
                    continue
                assert entry.personal_data is not None
                hits.append(
                    SourceHit(
                        StmtId(cls.name, method.name, i),
                        entry.personal_data,
                        catalog.is_third_party(signature),
                        signature,
                    )
                )
    return tuple(hits)


def forward_slice(pdg: Pdg, source: StmtId) -> SliceGraph:
    """Transitive forward closure from the source over every edge kind."""
    if source not in pdg.program_order:
        raise AnalysisInputError(f"unknown statement id: {source}")
    seen = {source}
    work = [source]
    while work:
        node = work.pop()
        for edge in pdg.successors(node):
            if edge.dst not in seen:
                seen.add(edge.dst)
                work.append(edge.dst)
    nodes = tuple(sorted(seen, key=pdg.program_order.__getitem__))
    edges = tuple(e for e in pdg.edges if e.src in seen and e.dst in seen)
    return SliceGraph(nodes, edges)


def annotate_slice(sl: PrivacySlice, catalog: Catalog, program: SlirProgram) -> PrivacySlice:
    """Tag slice call nodes from the catalog. The source call is always
    tagged Collect; a third-party flag is set on any call into a
    third-party package."""
    methods = {
        (cls.name, m.name): m for cls in program.classes for m in cls.methods
    }
    annotations: dict[StmtId, NodeTag] = {}
    for node in sl.nodes:
        method = methods.get((node.cls, node.method))
        if method is None or node.index >= len(method.statements):
            raise AnalysisInputError(f"slice node {node.text()} not present in program")
        signature = slir.call_signature(method.statements[node.index])
        if signature is None:
            continue
        entry: CatalogEntry | None = catalog.tag_for(signature)
        processing = entry.processing if entry is not None and entry.role == ROLE_PROCESSING else None
        measure = entry.measure if entry is not None and entry.role == ROLE_MEASURE else None
        purpose = entry.purpose if entry is not None else None
        if node == sl.source_stmt:
            processing = ProcessingCategory.COLLECT
        third_party = catalog.is_third_party(signature)
        if processing is not None or measure is not None or purpose is not None or third_party:
            annotations[node] = NodeTag(processing, measure, purpose, third_party)
    return replace(sl, annotations=annotations)


def build_slices(
    program: SlirProgram, pdg: Pdg, catalog: Catalog, app: str
) -> tuple[PrivacySlice, ...]:
    """find_sources + forward_slice + annotate_slice for a whole program.
    Slice ids derive from the app name and the source statement id, so
    they are stable across runs."""
    slices: list[PrivacySlice] = []
    for hit in find_sources(program, catalog):
        graph = forward_slice(pdg, hit.stmt)
        sl = PrivacySlice(
            id=f"{app}:{hit.stmt.text()}",
            source_stmt=hit.stmt,
            source_signature=hit.signature,
            personal_data=hit.personal_data,
            nodes=graph.nodes,
            edges=graph.edges,
        )
        slices.append(annotate_slice(sl, catalog, program))
    return tuple(slices)
