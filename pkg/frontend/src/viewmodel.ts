/** Pure view state: everything the DOM layer draws is computed here from
 * API payloads, never recomputed arithmetic. */

import type {
  DeltaDoc,
  DiffDoc,
  NodeRecord,
  SessionState,
  SolutionDoc,
} from "./types.js";

export interface Totals {
  objective: number;
  effectiveness: number;
  interaction: number;
}

export type PinState = "none" | "true" | "false";

export interface PendingDelta {
  pins: Record<string, PinState>;
  excludeResources: string[];
  forceChoice: Record<string, string>;
  startOverrides: Record<string, number>;
}

export interface Highlights {
  added: Set<string>;
  dropped: Set<string>;
}

export interface ViewModel {
  state: SessionState;
  cards: Map<string, NodeRecord>;
  totals: Totals | null;
  selected: string | null;
  partnerHighlights: Set<string>;
  pending: PendingDelta;
  highlights: Highlights;
  banner: string | null;
}

export function emptyPending(): PendingDelta {
  return { pins: {}, excludeResources: [], forceChoice: {}, startOverrides: {} };
}

export function buildViewModel(state: SessionState, diff?: DiffDoc | null,
                               previous?: ViewModel): ViewModel {
  const cards = new Map<string, NodeRecord>();
  const solution = state.baseline;
  if (solution) {
    for (const record of solution.records) cards.set(record.node, record);
  }
  return {
    state,
    cards,
    totals: solution ? totalsOf(solution) : null,
    selected: null,
    partnerHighlights: new Set(),
    pending: previous ? previous.pending : emptyPending(),
    highlights: diffHighlights(diff ?? null),
    banner: null,
  };
}

export function totalsOf(solution: SolutionDoc): Totals {
  return {
    objective: solution.objective,
    effectiveness: solution.effectiveness_total,
    interaction: solution.interaction_total,
  };
}

export function diffHighlights(diff: DiffDoc | null): Highlights {
  const added = new Set<string>();
  const dropped = new Set<string>();
  if (diff) {
    for (const graph of diff.graphs) {
      for (const node of graph.nodes_added) added.add(node);
      for (const node of graph.nodes_dropped) dropped.add(node);
    }
  }
  return { added, dropped };
}

/** Selecting a node opens its card and highlights its conflict partners;
 * selecting nothing clears the panel. */
export function selectNode(vm: ViewModel, node: string | null): ViewModel {
  if (node === null) {
    return { ...vm, selected: null, partnerHighlights: new Set() };
  }
  const card = vm.cards.get(node);
  const partners = new Set<string>();
  if (card?.executed) {
    for (const conflict of card.conflicts) partners.add(conflict.partner);
  }
  return { ...vm, selected: node, partnerHighlights: partners };
}

export function cyclePin(pending: PendingDelta, node: string): PendingDelta {
  const order: PinState[] = ["none", "true", "false"];
  const current = pending.pins[node] ?? "none";
  const next = order[(order.indexOf(current) + 1) % order.length] ?? "none";
  const pins = { ...pending.pins };
  if (next === "none") delete pins[node];
  else pins[node] = next;
  return { ...pending, pins };
}

export function stageStartOverride(pending: PendingDelta, graph: string,
                                   value: number | null): PendingDelta {
  const startOverrides = { ...pending.startOverrides };
  if (value === null || Number.isNaN(value)) delete startOverrides[graph];
  else startOverrides[graph] = value;
  return { ...pending, startOverrides };
}

export function toggleExcluded(pending: PendingDelta, resource: string): PendingDelta {
  const excluded = pending.excludeResources.includes(resource)
    ? pending.excludeResources.filter((r) => r !== resource)
    : [...pending.excludeResources, resource];
  return { ...pending, excludeResources: excluded.sort() };
}

export function stageForcedChoice(pending: PendingDelta, node: string,
                                  resource: string | null): PendingDelta {
  const forceChoice = { ...pending.forceChoice };
  if (resource === null) delete forceChoice[node];
  else forceChoice[node] = resource;
  return { ...pending, forceChoice };
}

export function pendingIsEmpty(pending: PendingDelta): boolean {
  return Object.keys(pending.pins).length === 0
    && pending.excludeResources.length === 0
    && Object.keys(pending.forceChoice).length === 0
    && Object.keys(pending.startOverrides).length === 0;
}

/** Serialise the staged edits into the wire delta document. */
export function pendingToDelta(pending: PendingDelta): DeltaDoc {
  const pinsTrue: string[] = [];
  const pinsFalse: string[] = [];
  for (const [node, state] of Object.entries(pending.pins)) {
    if (state === "true") pinsTrue.push(node);
    if (state === "false") pinsFalse.push(node);
  }
  return {
    pins_true: pinsTrue.sort(),
    pins_false: pinsFalse.sort(),
    exclude_resources: [...pending.excludeResources].sort(),
    force_choice: pending.forceChoice,
    start_overrides: pending.startOverrides,
  };
}
