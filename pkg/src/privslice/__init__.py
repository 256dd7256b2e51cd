"""privslice: slice programs from privacy-related data sources, map the
slices into a privacy-vocabulary model, check GDPR-derived rules, and
render assessor views."""

from .catalog import Catalog, CatalogEntry, default_catalog, load_catalog
from .depgraph import Cfg, DepKind, Pdg, PdgEdge, StmtId, build_cfg, build_pdg, control_deps, data_deps
from .dpv import (
    DataSource,
    DpvModel,
    MeasureUse,
    PersonalData,
    ProcessingCategory,
    TechnicalMeasure,
    map_slice,
    parse_turtle_subset,
    to_turtle,
)
from .errors import (
    AnalysisInputError,
    CatalogError,
    PrivsliceError,
    SlirParseError,
    TurtleParseError,
)
from .pipeline import AppAnalysis, SliceAnalysis, analyze_program
from .rules import DpiaSummary, Finding, Severity, check, summarize_dpia
from .slicer import PrivacySlice, annotate_slice, build_slices, find_sources, forward_slice
from .slir import SlirClass, SlirMethod, SlirProgram, parse_slir, print_slir
from .views import emit_bundle, render_view1, render_view2, render_view3

__all__ = [
    "AnalysisInputError",
    "AppAnalysis",
    "Catalog",
    "CatalogEntry",
    "CatalogError",
    "Cfg",
    "DataSource",
    "DepKind",
    "DpiaSummary",
    "DpvModel",
    "Finding",
    "MeasureUse",
    "Pdg",
    "PdgEdge",
    "PersonalData",
    "PrivacySlice",
    "PrivsliceError",
    "ProcessingCategory",
    "Severity",
    "SliceAnalysis",
    "SlirClass",
    "SlirMethod",
    "SlirParseError",
    "SlirProgram",
    "StmtId",
    "TechnicalMeasure",
    "TurtleParseError",
    "analyze_program",
    "annotate_slice",
    "build_cfg",
    "build_pdg",
    "build_slices",
    "check",
    "control_deps",
    "data_deps",
    "default_catalog",
    "emit_bundle",
    "find_sources",
    "forward_slice",
    "load_catalog",
    "map_slice",
    "parse_slir",
    "parse_turtle_subset",
    "print_slir",
    "render_view1",
    "render_view2",
    "render_view3",
    "summarize_dpia",
    "to_turtle",
]
