/** Payload shapes of the copath HTTP API. The console never recomputes any
 * number it displays; everything comes verbatim from these documents. */

export interface ResourceOption {
  id: string;
  name: string;
  effectiveness: number;
  amount: number;
}

export interface ApiNode {
  id: string;
  label: string;
  options: ResourceOption[];
}

export interface ApiEdge {
  from: string;
  to: string;
  t_min: number;
  t_max: number;
}

export interface ApiGraph {
  id: string;
  start_time: number;
  nodes: ApiNode[];
  edges: ApiEdge[];
}

export interface InstanceDoc {
  combiner: { time_window: number; amount_floor: number };
  graphs: ApiGraph[];
}

export interface RecordConflict {
  partner: string;
  partner_resource: string;
  time_distance: number;
  contribution: number;
}

export interface NodeRecord {
  node: string;
  graph: string;
  label: string;
  executed: boolean;
  resource: string | null;
  resource_name: string;
  clock: number | null;
  score: number | null;
  conflicts: RecordConflict[];
}

export interface ConflictDoc {
  node_a: string;
  node_b: string;
  resource_a: string;
  resource_b: string;
  time_distance: number;
  contribution: number;
}

export interface SolutionDoc {
  objective: number;
  effectiveness_total: number;
  interaction_total: number;
  executed: string[];
  clock: Record<string, number>;
  choice: Record<string, string>;
  conflicts: ConflictDoc[];
  records: NodeRecord[];
}

export interface HistoryEntry {
  delta: DeltaDoc;
  objective: number;
}

export interface SessionState {
  session_id: string;
  instance: InstanceDoc;
  baseline: SolutionDoc | null;
  history: HistoryEntry[];
}

export interface GraphDiffDoc {
  graph: string;
  nodes_added: string[];
  nodes_dropped: string[];
  path_changed: boolean;
  choice_changes: Record<string, [string | null, string | null]>;
  clock_changes: Record<string, [number | null, number | null]>;
}

export interface DiffDoc {
  objective_before: number | null;
  objective_after: number;
  objective_delta: number | null;
  graphs: GraphDiffDoc[];
}

export interface WhatIfResponse {
  solution: SolutionDoc;
  diff: DiffDoc;
}

export interface DeltaDoc {
  pins_true: string[];
  pins_false: string[];
  exclude_resources: string[];
  force_choice: Record<string, string>;
  start_overrides: Record<string, number>;
}

export interface ApiError {
  code: string;
  message: string;
  details?: unknown;
}
