/** Layered left-to-right DAG layout, one cluster per graph.
 *
 * Layers are longest-path depths from the (single) source, so every edge
 * points to a strictly later layer. Within a layer, nodes keep a stable
 * order driven by the mean position of their parents.
 */

import type { ApiGraph } from "./types.js";

export interface PlacedNode {
  id: string;
  x: number;
  y: number;
  layer: number;
}

export interface PlacedGraph {
  id: string;
  width: number;
  height: number;
  nodes: PlacedNode[];
}

export const NODE_W = 132;
export const NODE_H = 54;
export const GAP_X = 64;
export const GAP_Y = 26;

export function layerAssignment(graph: ApiGraph): Map<string, number> {
  const layers = new Map<string, number>();
  for (const node of graph.nodes) layers.set(node.id, 0);
  // relax |V| times: longest path layering on a DAG
  for (let pass = 0; pass < graph.nodes.length; pass += 1) {
    let changed = false;
    for (const edge of graph.edges) {
      const src = layers.get(edge.from) ?? 0;
      const dst = layers.get(edge.to) ?? 0;
      if (dst < src + 1) {
        layers.set(edge.to, src + 1);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return layers;
}

export function layoutGraph(graph: ApiGraph): PlacedGraph {
  const layers = layerAssignment(graph);
  const buckets = new Map<number, string[]>();
  for (const node of graph.nodes) {
    const layer = layers.get(node.id) ?? 0;
    const bucket = buckets.get(layer);
    if (bucket) bucket.push(node.id);
    else buckets.set(layer, [node.id]);
  }
  const layerCount = Math.max(...buckets.keys()) + 1;

  const position = new Map<string, number>();
  const parents = new Map<string, string[]>();
  for (const edge of graph.edges) {
    const list = parents.get(edge.to);
    if (list) list.push(edge.from);
    else parents.set(edge.to, [edge.from]);
  }
  const placed: PlacedNode[] = [];
  let maxRows = 1;
  for (let layer = 0; layer < layerCount; layer += 1) {
    const ids = buckets.get(layer) ?? [];
    ids.sort((a, b) => {
      const mean = (id: string) => {
        const sources = parents.get(id) ?? [];
        if (!sources.length) return 0;
        return sources.reduce((acc, p) => acc + (position.get(p) ?? 0), 0)
          / sources.length;
      };
      return mean(a) - mean(b) || (a < b ? -1 : 1);
    });
    ids.forEach((id, row) => {
      position.set(id, row);
      placed.push({
        id,
        layer,
        x: layer * (NODE_W + GAP_X),
        y: row * (NODE_H + GAP_Y),
      });
    });
    maxRows = Math.max(maxRows, ids.length);
  }
  return {
    id: graph.id,
    width: layerCount * (NODE_W + GAP_X) - GAP_X,
    height: maxRows * (NODE_H + GAP_Y) - GAP_Y,
    nodes: placed,
  };
}
