// Pure render models: everything the DOM layer shows is computed here,
// so the rendering invariants are testable without a browser.

import type { EdgeKind, Severity } from './types.js';
import { findingById, sliceOf, type ViewerState } from './state.js';

export interface SliceListItem {
  readonly id: string;
  readonly personalData: string;
  readonly findingCount: number;
  readonly active: boolean;
}

export interface View1NodeModel {
  readonly id: string;
  readonly label: string;
  readonly stmt: string;
  readonly tags: readonly string[];
  readonly isSource: boolean;
  readonly highlighted: boolean;
  readonly selected: boolean;
}

export interface View1EdgeModel {
  readonly from: string;
  readonly to: string;
  readonly kind: EdgeKind;
  readonly provenance: string | null;
}

export interface View1Model {
  readonly nodes: readonly View1NodeModel[];
  readonly edges: readonly View1EdgeModel[];
}

export interface View2ElementModel {
  readonly key: string; // evidence key, e.g. "processing:Store"
  readonly label: string;
  readonly order: number | null; // 1-based position for processing elements
  readonly highlighted: boolean;
  readonly selected: boolean;
}

export interface View2Model {
  readonly processId: string;
  readonly turtle: string;
  readonly rows: readonly { readonly predicate: string; readonly elements: readonly View2ElementModel[] }[];
}

export interface BadgeModel {
  readonly id: string;
  readonly ruleId: string;
  readonly article: string;
  readonly severity: Severity;
  readonly message: string;
  readonly highlighted: boolean;
  readonly selected: boolean;
}

export interface View3Model {
  readonly processId: string;
  readonly personalData: string;
  readonly dataSource: string;
  readonly processing: readonly string[];
  readonly measures: readonly string[];
  readonly purpose: string | null;
  readonly badges: readonly BadgeModel[]; // already severity-filtered
  readonly hiddenBySeverity: number;
}

export function sliceList(state: ViewerState): readonly SliceListItem[] {
  return state.bundle.slices.map((s) => ({
    id: s.id,
    personalData: s.personal_data,
    findingCount: s.view3.findings.length,
    active: s.id === state.sliceId,
  }));
}

export function guidance(state: ViewerState): string | null {
  if (state.bundle.slices.length === 0) {
    return 'No privacy sources were found in this app: there is nothing to review.';
  }
  return null;
}

function isPicked(state: ViewerState, view: number, id: string): boolean {
  return state.selected !== null && state.selected.view === view && state.selected.id === id;
}

export function buildView1(state: ViewerState): View1Model {
  const record = sliceOf(state);
  if (record === null) return { nodes: [], edges: [] };
  return {
    nodes: record.view1.nodes.map((n) => ({
      id: n.id,
      label: n.label,
      stmt: n.stmt,
      tags: n.tags,
      isSource: n.id === record.source,
      highlighted: state.view === 1 && state.highlighted.has(n.id),
      selected: isPicked(state, 1, n.id),
    })),
    edges: record.view1.edges.map((e) => ({
      from: e.from,
      to: e.to,
      kind: e.kind,
      provenance: e.provenance ?? null,
    })),
  };
}

const PREDICATE_OF = [
  { prefix: 'personal_data', predicate: 'hasPersonalData' },
  { prefix: 'data_source', predicate: 'hasDataSource' },
  { prefix: 'processing:', predicate: 'hasProcessing' },
  { prefix: 'measure:', predicate: 'hasTechnicalMeasure' },
  { prefix: 'purpose', predicate: 'hasPurpose' },
];

export function buildView2(state: ViewerState): View2Model {
  const record = sliceOf(state);
  if (record === null) return { processId: '', turtle: '', rows: [] };
  const model = record.view2.model;

  const labelFor = (key: string): string => {
    if (key === 'personal_data') return `pd:${model.personal_data}`;
    if (key === 'data_source') return `dpv:${model.data_source}`;
    if (key === 'purpose') return `dpv:${model.purpose ?? ''}`;
    const [, value] = key.split(':', 2);
    return `dpv:${value ?? key}`;
  };

  const orderFor = (key: string): number | null => {
    if (!key.startsWith('processing:')) return null;
    const idx = model.processing.indexOf(key.slice('processing:'.length));
    return idx >= 0 ? idx + 1 : null;
  };

  const keys = Object.keys(record.view2.evidence);
  const rows = PREDICATE_OF.map(({ prefix, predicate }) => {
    const matching = keys
      .filter((k) => (prefix.endsWith(':') ? k.startsWith(prefix) : k === prefix))
      .map((key) => ({
        key,
        label: labelFor(key),
        order: orderFor(key),
        highlighted: state.view === 2 && state.highlighted.has(key),
        selected: isPicked(state, 2, key),
      }));
    matching.sort((a, b) => (a.order ?? 0) - (b.order ?? 0) || a.key.localeCompare(b.key));
    return { predicate, elements: matching };
  }).filter((row) => row.elements.length > 0);

  return { processId: model.process_id, turtle: record.view2.turtle, rows };
}

export function buildView3(state: ViewerState): View3Model {
  const record = sliceOf(state);
  if (record === null) {
    return {
      processId: '',
      personalData: '',
      dataSource: '',
      processing: [],
      measures: [],
      purpose: null,
      badges: [],
      hiddenBySeverity: 0,
    };
  }
  const summary = record.view3.summary;
  const all = record.view3.findings
    .map((fid) => findingById(state.bundle, fid))
    .filter((f): f is NonNullable<typeof f> => f !== undefined);
  const visible = all.filter((f) => state.severityFilter.has(f.severity));
  return {
    processId: summary.process_id,
    personalData: summary.personal_data,
    dataSource: summary.data_source,
    processing: summary.processing,
    measures: summary.measures.map((m) => m.measure),
    purpose: summary.purpose,
    badges: visible.map((f) => ({
      id: f.id,
      ruleId: f.rule_id,
      article: f.article,
      severity: f.severity,
      message: f.message,
      highlighted: state.view === 3 && state.highlighted.has(f.id),
      selected: isPicked(state, 3, f.id),
    })),
    hiddenBySeverity: all.length - visible.length,
  };
}
