// Viewer state and transitions. Everything here is pure: transitions
// return fresh state objects and never touch the loaded bundle.

import type { Bundle, Finding, Severity, SliceRecord } from './types.js';
import { SEVERITIES } from './types.js';

export type ViewNumber = 1 | 2 | 3;

export interface SelectedElement {
  // view 1: a statement node id; view 2: an evidence key such as
  // "processing:Store"; view 3: a finding id
  readonly view: ViewNumber;
  readonly id: string;
}

export interface ViewerState {
  readonly bundle: Bundle;
  readonly sliceId: string | null;
  readonly view: ViewNumber;
  readonly selected: SelectedElement | null;
  /** Element ids to emphasize in the active view. */
  readonly highlighted: ReadonlySet<string>;
  readonly severityFilter: ReadonlySet<Severity>;
}

export class BundleFormatError extends Error {}

// ---------------------------------------------------------------------------
// Validation

function fail(message: string): never {
  throw new BundleFormatError(message);
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === 'object' && value !== null && !Array.isArray(value);
}

function checkStringArray(value: unknown, what: string): readonly string[] {
  if (!Array.isArray(value) || value.some((v) => typeof v !== 'string')) {
    fail(`${what} must be an array of strings`);
  }
  return value as string[];
}

export function validateBundle(raw: unknown): Bundle {
  if (!isRecord(raw)) fail('bundle must be a JSON object');
  if (raw.bundle_version !== 1) {
    fail(`unsupported bundle_version: ${JSON.stringify(raw.bundle_version)}`);
  }
  if (typeof raw.app !== 'string') fail('missing app name');
  if (typeof raw.catalog_digest !== 'string') fail('missing catalog_digest');
  if (!Array.isArray(raw.slices)) fail('slices must be an array');
  if (!Array.isArray(raw.findings)) fail('findings must be an array');
  if (!isRecord(raw.dpia_summary) || !Array.isArray(raw.dpia_summary.rows)) {
    fail('dpia_summary.rows must be an array');
  }

  const findingIds = new Set<string>();
  for (const f of raw.findings) {
    if (!isRecord(f) || typeof f.id !== 'string') fail('finding without an id');
    if (typeof f.message !== 'string' || typeof f.article !== 'string') {
      fail(`finding ${f.id}: missing article or message`);
    }
    if (!SEVERITIES.includes(f.severity as Severity)) {
      fail(`finding ${f.id}: unknown severity ${JSON.stringify(f.severity)}`);
    }
    checkStringArray(f.evidence, `finding ${f.id} evidence`);
    findingIds.add(f.id);
  }

  for (const s of raw.slices) {
    if (!isRecord(s) || typeof s.id !== 'string') fail('slice without an id');
    if (!isRecord(s.view1) || !isRecord(s.view2) || !isRecord(s.view3)) {
      fail(`slice ${s.id}: missing views`);
    }
    const nodes = s.view1.nodes;
    const edges = s.view1.edges;
    if (!Array.isArray(nodes) || !Array.isArray(edges)) {
      fail(`slice ${s.id}: view1 nodes/edges must be arrays`);
    }
    const nodeIds = new Set<string>();
    for (const n of nodes) {
      if (!isRecord(n) || typeof n.id !== 'string' || typeof n.stmt !== 'string') {
        fail(`slice ${s.id}: malformed view1 node`);
      }
      nodeIds.add(n.id);
    }
    for (const e of edges) {
      if (!isRecord(e) || !nodeIds.has(e.from as string) || !nodeIds.has(e.to as string)) {
        fail(`slice ${s.id}: view1 edge endpoint not among nodes`);
      }
    }
    if (typeof s.view2.turtle !== 'string' || !isRecord(s.view2.model)) {
      fail(`slice ${s.id}: view2 needs turtle text and a model`);
    }
    if (!isRecord(s.view2.evidence)) fail(`slice ${s.id}: view2 evidence must be an object`);
    for (const [key, cited] of Object.entries(s.view2.evidence)) {
      for (const nodeId of checkStringArray(cited, `evidence ${key}`)) {
        if (!nodeIds.has(nodeId)) {
          fail(`slice ${s.id}: evidence ${key} cites unknown node ${nodeId}`);
        }
      }
    }
    for (const fid of checkStringArray(s.view3.findings, `slice ${s.id} view3 findings`)) {
      if (!findingIds.has(fid)) fail(`slice ${s.id}: unknown finding id ${fid}`);
    }
  }
  return raw as unknown as Bundle;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === 'object' && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

// ---------------------------------------------------------------------------
// Transitions

/** Parse + validate a bundle and open it: first slice selected, View 3
 * active (assessors start at the summary). Throws BundleFormatError on a
 * schema mismatch; no partial state escapes. */
export function loadBundle(raw: unknown): ViewerState {
  const bundle = deepFreeze(validateBundle(raw));
  const first = bundle.slices.length > 0 ? bundle.slices[0]!.id : null;
  return {
    bundle,
    sliceId: first,
    view: 3,
    selected: null,
    highlighted: new Set(),
    severityFilter: new Set(SEVERITIES),
  };
}

export function sliceOf(state: ViewerState): SliceRecord | null {
  return state.bundle.slices.find((s) => s.id === state.sliceId) ?? null;
}

export function findingById(bundle: Bundle, id: string): Finding | undefined {
  return bundle.findings.find((f) => f.id === id);
}

export function selectSlice(state: ViewerState, sliceId: string): ViewerState {
  if (!state.bundle.slices.some((s) => s.id === sliceId)) {
    return state;
  }
  if (sliceId === state.sliceId) return state;
  return { ...state, sliceId, selected: null, highlighted: new Set() };
}

function elementExists(record: SliceRecord, view: ViewNumber, id: string): boolean {
  switch (view) {
    case 1:
      return record.view1.nodes.some((n) => n.id === id);
    case 2:
      return Object.prototype.hasOwnProperty.call(record.view2.evidence, id);
    case 3:
      return record.view3.findings.includes(id);
  }
}

/** Select an element of the active view; it is highlighted in place. */
export function selectElement(state: ViewerState, id: string): ViewerState {
  const record = sliceOf(state);
  if (record === null || !elementExists(record, state.view, id)) {
    return state;
  }
  return {
    ...state,
    selected: { view: state.view, id },
    highlighted: new Set([id]),
  };
}

export function clearSelection(state: ViewerState): ViewerState {
  return { ...state, selected: null, highlighted: new Set() };
}

/** Ids in `target` linked to the selected element through evidence. */
export function counterpartIds(
  record: SliceRecord,
  bundle: Bundle,
  selected: SelectedElement,
  target: ViewNumber,
): ReadonlySet<string> {
  if (selected.view === target) return new Set([selected.id]);

  const evidence = record.view2.evidence;
  const sliceFindings = record.view3.findings
    .map((fid) => findingById(bundle, fid))
    .filter((f): f is Finding => f !== undefined);

  const nodesOf = (sel: SelectedElement): ReadonlySet<string> => {
    switch (sel.view) {
      case 1:
        return new Set([sel.id]);
      case 2:
        return new Set(evidence[sel.id] ?? []);
      case 3:
        return new Set(findingById(bundle, sel.id)?.evidence ?? []);
    }
  };

  const anchor = nodesOf(selected);
  const intersects = (nodes: readonly string[]) => nodes.some((n) => anchor.has(n));

  switch (target) {
    case 1:
      return anchor;
    case 2:
      return new Set(
        Object.entries(evidence)
          .filter(([, cited]) => intersects(cited))
          .map(([key]) => key),
      );
    case 3:
      return new Set(sliceFindings.filter((f) => intersects(f.evidence)).map((f) => f.id));
  }
}

/** Switch views; when the selection has counterparts in the target view
 * they become the highlight set (and the UI scrolls them into view). */
export function switchView(state: ViewerState, target: ViewNumber): ViewerState {
  const record = sliceOf(state);
  let highlighted: ReadonlySet<string> = new Set();
  if (record !== null && state.selected !== null) {
    highlighted = counterpartIds(record, state.bundle, state.selected, target);
  }
  return { ...state, view: target, highlighted };
}

export function setSeverityFilter(
  state: ViewerState,
  severities: Iterable<Severity>,
): ViewerState {
  return { ...state, severityFilter: new Set(severities) };
}
