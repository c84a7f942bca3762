/** DOM layer: draws the view model into the console page.
 *
 * One SVG holds all graph clusters side by side so conflict links can cross
 * clusters. Executed nodes show the picked resource and clock, everything
 * else is dimmed with "N/A". Numbers are printed exactly as the API sent
 * them.
 */

import { GAP_X, NODE_H, NODE_W, layoutGraph } from "./layout.js";
import type { ViewModel } from "./viewmodel.js";
import type { ApiGraph } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CLUSTER_GAP = 90;
const PAD = 24;

export interface Handlers {
  onSelectNode(node: string | null): void;
  onTogglePin(node: string): void;
  onSolve(): void;
  onSubmitWhatIf(): void;
  onStartOverride(graph: string, value: number | null): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, attrs: Record<string, string> = {}, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function render(vm: ViewModel, root: HTMLElement, handlers: Handlers): void {
  root.textContent = "";
  if (vm.banner) {
    root.appendChild(el("div", { class: "banner", id: "banner" }, vm.banner));
  }
  root.appendChild(renderTotals(vm));
  root.appendChild(renderGraphs(vm, handlers));
  root.appendChild(renderDetail(vm));
  root.appendChild(renderWhatIfForm(vm, handlers));
  root.appendChild(renderHistory(vm));
}

function renderTotals(vm: ViewModel): HTMLElement {
  const panel = el("div", { class: "totals", id: "totals" });
  if (!vm.totals) {
    panel.appendChild(el("span", { class: "placeholder" },
                         "No solution yet - press Solve"));
    return panel;
  }
  panel.appendChild(el("span", { id: "total-objective" },
                       `objective ${vm.totals.objective}`));
  panel.appendChild(el("span", { id: "total-effectiveness" },
                       `effectiveness ${vm.totals.effectiveness}`));
  panel.appendChild(el("span", { id: "total-interaction" },
                       `conflicts ${vm.totals.interaction}`));
  return panel;
}

function nodeClass(vm: ViewModel, nodeId: string): string {
  const classes = ["node"];
  const card = vm.cards.get(nodeId);
  if (card) classes.push(card.executed ? "executed" : "skipped");
  if (vm.selected === nodeId) classes.push("selected");
  if (vm.partnerHighlights.has(nodeId)) classes.push("partner");
  if (vm.highlights.added.has(nodeId)) classes.push("diff-added");
  if (vm.highlights.dropped.has(nodeId)) classes.push("diff-dropped");
  const pin = vm.pending.pins[nodeId];
  if (pin && pin !== "none") classes.push(`pinned-${pin}`);
  return classes.join(" ");
}

function nodeCaption(vm: ViewModel, graph: ApiGraph, nodeId: string): string {
  const card = vm.cards.get(nodeId);
  if (!card) {
    const node = graph.nodes.find((n) => n.id === nodeId);
    return node?.label ?? nodeId;
  }
  if (!card.executed) return "N/A";
  return `${card.resource_name} @ ${card.clock}`;
}

function renderGraphs(vm: ViewModel, handlers: Handlers): HTMLElement {
  const wrapper = el("div", { class: "graphs" });
  const svg = svgEl("svg", { id: "graph-canvas" });
  const centers = new Map<string, { x: number; y: number }>();
  let offsetX = PAD;
  let maxHeight = 0;

  for (const graph of vm.state.instance.graphs) {
    const placed = layoutGraph(graph);
    const cluster = svgEl("g", {
      class: "cluster",
      "data-graph": graph.id,
      transform: `translate(${offsetX}, ${PAD + 18})`,
    });
    const frame = svgEl("rect", {
      class: "cluster-frame",
      x: String(-12), y: String(-30),
      width: String(placed.width + 24),
      height: String(placed.height + 42),
    });
    cluster.appendChild(frame);
    const title = svgEl("text", { class: "cluster-title", x: "0", y: "-14" });
    title.textContent = `${graph.id} (start ${graph.start_time})`;
    cluster.appendChild(title);

    const at = new Map(placed.nodes.map((p) => [p.id, p]));
    for (const edge of graph.edges) {
      const src = at.get(edge.from);
      const dst = at.get(edge.to);
      if (!src || !dst) continue;
      const x1 = src.x + NODE_W;
      const y1 = src.y + NODE_H / 2;
      const x2 = dst.x;
      const y2 = dst.y + NODE_H / 2;
      cluster.appendChild(svgEl("line", {
        class: "edge", x1: String(x1), y1: String(y1),
        x2: String(x2), y2: String(y2),
      }));
      const label = svgEl("text", {
        class: "edge-label",
        x: String((x1 + x2) / 2),
        y: String((y1 + y2) / 2 - 4),
      });
      label.textContent = `[${edge.t_min},${edge.t_max}]`;
      cluster.appendChild(label);
    }

    for (const placedNode of placed.nodes) {
      const group = svgEl("g", {
        class: nodeClass(vm, placedNode.id),
        "data-node": placedNode.id,
        transform: `translate(${placedNode.x}, ${placedNode.y})`,
      });
      group.appendChild(svgEl("rect", {
        width: String(NODE_W), height: String(NODE_H), rx: "6",
      }));
      const name = svgEl("text", { class: "node-name", x: "8", y: "20" });
      const graphNode = graph.nodes.find((n) => n.id === placedNode.id);
      name.textContent = graphNode?.label ?? placedNode.id;
      group.appendChild(name);
      const caption = svgEl("text", { class: "node-caption", x: "8", y: "40" });
      caption.textContent = nodeCaption(vm, graph, placedNode.id);
      group.appendChild(caption);
      group.addEventListener("click", (event) => {
        event.stopPropagation();
        if ((event as MouseEvent).shiftKey) handlers.onTogglePin(placedNode.id);
        else handlers.onSelectNode(placedNode.id);
      });
      cluster.appendChild(group);
      centers.set(placedNode.id, {
        x: offsetX + placedNode.x + NODE_W / 2,
        y: PAD + 18 + placedNode.y + NODE_H / 2,
      });
    }
    svg.appendChild(cluster);
    offsetX += placed.width + CLUSTER_GAP;
    maxHeight = Math.max(maxHeight, placed.height);
  }

  // conflict links cross clusters, so they live at the top level
  const solution = vm.state.baseline;
  if (solution) {
    for (const conflict of solution.conflicts) {
      const a = centers.get(conflict.node_a);
      const b = centers.get(conflict.node_b);
      if (!a || !b) continue;
      svg.appendChild(svgEl("line", {
        class: "conflict-link",
        "data-conflict": `${conflict.node_a}~${conflict.node_b}`,
        x1: String(a.x), y1: String(a.y), x2: String(b.x), y2: String(b.y),
      }));
      const label = svgEl("text", {
        class: "conflict-label",
        x: String((a.x + b.x) / 2),
        y: String((a.y + b.y) / 2),
      });
      label.textContent = String(conflict.contribution);
      svg.appendChild(label);
    }
  }

  svg.setAttribute("width", String(offsetX + PAD));
  svg.setAttribute("height", String(maxHeight + 2 * PAD + 60));
  svg.addEventListener("click", () => handlers.onSelectNode(null));
  wrapper.appendChild(svg);
  return wrapper;
}

function renderDetail(vm: ViewModel): HTMLElement {
  const panel = el("div", { class: "detail", id: "detail" });
  if (!vm.selected) {
    panel.appendChild(el("span", { class: "placeholder" },
                         "Click a node for details; shift-click to pin"));
    return panel;
  }
  const card = vm.cards.get(vm.selected);
  panel.appendChild(el("h3", {}, vm.selected));
  if (!card || !card.executed) {
    panel.appendChild(el("div", { id: "detail-resource" }, "N/A"));
    return panel;
  }
  panel.appendChild(el("div", { id: "detail-resource" },
                       `resource: ${card.resource_name}`));
  panel.appendChild(el("div", { id: "detail-clock" }, `clock: ${card.clock}`));
  panel.appendChild(el("div", { id: "detail-score" }, `score: ${card.score}`));
  const list = el("ul", { id: "detail-conflicts" });
  for (const conflict of card.conflicts) {
    list.appendChild(el(
      "li", { "data-partner": conflict.partner },
      `${conflict.partner} (${conflict.partner_resource}) ` +
      `distance ${conflict.time_distance}: ${conflict.contribution}`));
  }
  if (!card.conflicts.length) {
    list.appendChild(el("li", { class: "placeholder" }, "no conflicts"));
  }
  panel.appendChild(list);
  return panel;
}

function renderWhatIfForm(vm: ViewModel, handlers: Handlers): HTMLElement {
  const form = el("div", { class: "whatif", id: "whatif" });
  form.appendChild(el("h3", {}, "What if"));

  const offsets = el("div", { class: "offsets" });
  for (const graph of vm.state.instance.graphs) {
    const row = el("label", {}, `start ${graph.id} at `);
    const input = el("input", {
      type: "number",
      id: `offset-${graph.id}`,
      value: String(vm.pending.startOverrides[graph.id] ?? ""),
      placeholder: String(graph.start_time),
    }) as HTMLInputElement;
    input.addEventListener("change", () => {
      const parsed = input.value.trim() === "" ? null : Number(input.value);
      handlers.onStartOverride(graph.id, parsed);
    });
    row.appendChild(input);
    offsets.appendChild(row);
  }
  form.appendChild(offsets);

  const staged = el("pre", { id: "staged-delta" },
                    JSON.stringify(stagedSummary(vm), null, 1));
  form.appendChild(staged);

  const solveButton = el("button", { id: "solve-button" },
                         vm.state.baseline ? "Re-solve" : "Solve");
  solveButton.addEventListener("click", handlers.onSolve);
  form.appendChild(solveButton);

  const submit = el("button", { id: "whatif-button" }, "Apply what-if");
  if (!vm.state.baseline) submit.setAttribute("disabled", "disabled");
  submit.addEventListener("click", handlers.onSubmitWhatIf);
  form.appendChild(submit);
  return form;
}

function stagedSummary(vm: ViewModel): unknown {
  return {
    pins: vm.pending.pins,
    exclude: vm.pending.excludeResources,
    force: vm.pending.forceChoice,
    starts: vm.pending.startOverrides,
  };
}

function renderHistory(vm: ViewModel): HTMLElement {
  const panel = el("div", { class: "history", id: "history" });
  for (const entry of vm.state.history) {
    panel.appendChild(el("div", { class: "history-entry" },
                         `objective ${entry.objective}`));
  }
  return panel;
}
