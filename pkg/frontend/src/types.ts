// Shapes of the analysis bundle (bundle_version 1), as published by the
// pipeline's JSON schema. The viewer treats all of this as read-only.

export type Severity = 'PotentialViolation' | 'Adherence' | 'Suggestion' | 'Note';

export type EdgeKind = 'data' | 'control' | 'call' | 'param-in' | 'return-out';

export interface View1Node {
  readonly id: string;
  readonly label: string;
  readonly stmt: string;
  readonly tags: readonly string[];
}

export interface View1Edge {
  readonly from: string;
  readonly to: string;
  readonly kind: EdgeKind;
  readonly provenance?: string | null;
}

export interface MeasureUse {
  readonly measure: string;
  readonly position: number | null;
}

export interface DpvModel {
  readonly process_id: string;
  readonly personal_data: string;
  readonly data_source: 'FirstParty' | 'ThirdParty';
  readonly processing: readonly string[];
  readonly measures: readonly MeasureUse[];
  readonly purpose: string | null;
}

export interface SliceRecord {
  readonly id: string;
  readonly personal_data: string;
  readonly source: string;
  readonly view1: {
    readonly nodes: readonly View1Node[];
    readonly edges: readonly View1Edge[];
  };
  readonly view2: {
    readonly turtle: string;
    readonly model: DpvModel;
    readonly evidence: Readonly<Record<string, readonly string[]>>;
  };
  readonly view3: {
    readonly summary: DpvModel;
    readonly findings: readonly string[];
  };
}

export interface Finding {
  readonly id: string;
  readonly rule_id: string;
  readonly article: string;
  readonly severity: Severity;
  readonly slice: string;
  readonly evidence: readonly string[];
  readonly message: string;
}

export interface DpiaCell {
  readonly evidence: readonly string[];
  readonly note?: string;
}

export interface DpiaRow {
  readonly slice: string;
  readonly personal_data: string;
  readonly source_api: string;
  readonly data_source: string;
  readonly collection: DpiaCell;
  readonly use: DpiaCell;
  readonly storage: DpiaCell;
  readonly deletion: DpiaCell;
  readonly sharing: DpiaCell;
  readonly processing: DpiaCell;
  readonly pseudonymization: DpiaCell;
}

export interface Bundle {
  readonly bundle_version: 1;
  readonly app: string;
  readonly catalog_digest: string;
  readonly slices: readonly SliceRecord[];
  readonly findings: readonly Finding[];
  readonly dpia_summary: { readonly rows: readonly DpiaRow[] };
}

export const SEVERITIES: readonly Severity[] = [
  'PotentialViolation',
  'Adherence',
  'Suggestion',
  'Note',
];
