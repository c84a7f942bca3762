/** Console wiring: session lifecycle, event handling, re-rendering. */

import { ApiFailure, Client } from "./api.js";
import { render, type Handlers } from "./render.js";
import {
  buildViewModel,
  cyclePin,
  pendingIsEmpty,
  pendingToDelta,
  selectNode,
  stageStartOverride,
  type ViewModel,
} from "./viewmodel.js";
import type { DiffDoc } from "./types.js";

export class Console {
  private vm: ViewModel | null = null;
  private client: Client;
  private sessionId: string | null = null;
  private busy = false;

  constructor(private readonly root: HTMLElement, baseUrl: string) {
    this.client = new Client(baseUrl);
  }

  async start(instance: unknown): Promise<void> {
    const created = await this.client.createSession(instance);
    this.sessionId = created.session_id;
    await this.refresh(null);
  }

  async attach(sessionId: string): Promise<void> {
    this.sessionId = sessionId;
    await this.refresh(null);
  }

  private async refresh(diff: DiffDoc | null): Promise<void> {
    if (!this.sessionId) return;
    const state = await this.client.getState(this.sessionId);
    this.vm = buildViewModel(state, diff, this.vm ?? undefined);
    this.draw();
  }

  private draw(): void {
    if (!this.vm) return;
    render(this.vm, this.root, this.handlers());
  }

  private handlers(): Handlers {
    return {
      onSelectNode: (node) => {
        if (!this.vm) return;
        this.vm = selectNode(this.vm, node);
        this.draw();
      },
      onTogglePin: (node) => {
        if (!this.vm) return;
        this.vm = { ...this.vm, pending: cyclePin(this.vm.pending, node) };
        this.draw();
      },
      onStartOverride: (graph, value) => {
        if (!this.vm) return;
        this.vm = {
          ...this.vm,
          pending: stageStartOverride(this.vm.pending, graph, value),
        };
        this.draw();
      },
      onSolve: () => void this.solve(),
      onSubmitWhatIf: () => void this.submitWhatIf(),
    };
  }

  private async solve(): Promise<void> {
    if (!this.sessionId || this.busy) return;
    this.busy = true;
    try {
      await this.client.solve(this.sessionId, {});
      await this.refresh(null);
    } catch (error) {
      this.showError(error);
    } finally {
      this.busy = false;
    }
  }

  private async submitWhatIf(): Promise<void> {
    if (!this.sessionId || !this.vm || this.busy) return;
    if (pendingIsEmpty(this.vm.pending)) {
      this.vm = { ...this.vm, banner: "stage at least one edit first" };
      this.draw();
      return;
    }
    this.busy = true;
    try {
      const response = await this.client.whatif(
        this.sessionId, pendingToDelta(this.vm.pending));
      this.vm = { ...this.vm, pending: { pins: {}, excludeResources: [],
                                         forceChoice: {}, startOverrides: {} } };
      await this.refresh(response.diff);
    } catch (error) {
      this.showError(error);
    } finally {
      this.busy = false;
    }
  }

  private showError(error: unknown): void {
    if (!this.vm) return;
    const message = error instanceof ApiFailure
      ? `${error.code}: ${error.message}`
        + (error.details ? ` ${JSON.stringify(error.details)}` : "")
      : String(error);
    this.vm = { ...this.vm, banner: message };
    this.draw();
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  const form = document.getElementById("bootstrap");
  const textarea = document.getElementById("instance-json") as HTMLTextAreaElement | null;
  const baseInput = document.getElementById("api-base") as HTMLInputElement | null;
  const button = document.getElementById("create-session");
  if (!root || !form || !textarea || !baseInput || !button) return;

  button.addEventListener("click", () => {
    let parsed: unknown;
    try {
      parsed = JSON.parse(textarea.value);
    } catch (error) {
      alert(`instance JSON does not parse: ${error}`);
      return;
    }
    const console_ = new Console(root, baseInput.value.replace(/\/$/, ""));
    console_.start(parsed).then(
      () => form.setAttribute("hidden", "hidden"),
      (error) => alert(String(error)),
    );
  });
}

if (typeof document !== "undefined" && document.getElementById("bootstrap")) {
  boot();
}
