// App wiring: load committed server state, let the curator mark decisions,
// submit them (select, then iterate), and browse the four graph views.
// No optimistic updates: the page always re-renders from server responses,
// and controls stay disabled while a mutation is in flight.

import { ApiClient, ApiError } from "./api.js";
import type { Batch, GraphData, SessionSummary } from "./api.js";
import { renderGraph } from "./graph.js";
import { QueueView } from "./queue.js";

export const VIEWS = ["friend", "mention", "retweet", "colist"] as const;

export class App {
  private readonly client = new ApiClient();
  private queue: QueueView | null = null;
  private currentView: string = "friend";
  private inFlight = false;
  private readonly acceptedThisSession = new Set<string>();

  constructor(private readonly root: Document) {}

  private el<T extends HTMLElement>(id: string): T {
    const node = this.root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  async start(): Promise<void> {
    this.el<HTMLButtonElement>("submit").addEventListener("click", () => {
      void this.submitAndIterate();
    });
    this.el<HTMLButtonElement>("refresh").addEventListener("click", () => {
      void this.refresh();
    });
    const selector = this.el<HTMLSelectElement>("view-select");
    for (const view of VIEWS) {
      const option = this.root.createElement("option");
      option.value = view;
      option.textContent = view;
      selector.appendChild(option);
    }
    selector.addEventListener("change", () => {
      this.currentView = selector.value;
      void this.loadGraph();
    });
    await this.refresh();
  }

  private banner(message: string, isError: boolean): void {
    const banner = this.el("banner");
    banner.textContent = message;
    banner.className = isError ? "banner error" : "banner";
    banner.hidden = message === "";
  }

  private setBusy(busy: boolean): void {
    this.inFlight = busy;
    this.el<HTMLButtonElement>("submit").disabled = busy;
    this.el<HTMLButtonElement>("refresh").disabled = busy;
    this.queue?.setEnabled(!busy);
  }

  private renderSummary(summary: SessionSummary): void {
    this.el("iteration").textContent = String(summary.iteration);
    this.el("core-size").textContent = String(summary.core_size);
    this.el("candidate-size").textContent = String(summary.candidate_size);
  }

  private renderBatch(batch: Batch | null): void {
    const container = this.el("queue");
    if (batch === null) {
      container.textContent = "";
      const note = this.root.createElement("p");
      note.className = "empty-state";
      note.textContent = "No recommendations yet. Submit & iterate to generate the first batch.";
      container.appendChild(note);
      this.queue = null;
      this.el("batch-label").textContent = "";
      return;
    }
    this.el("batch-label").textContent = `batch ${batch.iteration}, ${batch.items.length} users`;
    this.queue = new QueueView(container, batch);
  }

  async refresh(): Promise<void> {
    try {
      const summary = await this.client.getSession();
      this.renderSummary(summary);
      let batch: Batch | null = null;
      try {
        batch = await this.client.getRecommendations();
      } catch (err) {
        if (!(err instanceof ApiError && err.status === 409)) throw err;
      }
      this.renderBatch(batch);
      await this.loadGraph();
      this.banner("", false);
    } catch (err) {
      this.banner(`Failed to load session: ${describe(err)}`, true);
    }
  }

  async submitAndIterate(): Promise<void> {
    if (this.inFlight) return; // double-click safety: one request at a time
    this.setBusy(true);
    try {
      const accepted = this.queue ? this.queue.acceptedUsers() : [];
      if (this.queue) {
        await this.client.select(accepted);
        accepted.forEach((u) => this.acceptedThisSession.add(u));
      }
      const batch = await this.client.iterate();
      const summary = await this.client.getSession();
      this.renderSummary(summary);
      this.renderBatch(batch);
      await this.loadGraph();
      this.banner(
        accepted.length > 0
          ? `Accepted ${accepted.length} user(s); iteration ${summary.iteration} complete.`
          : `Iteration ${summary.iteration} complete.`,
        false,
      );
    } catch (err) {
      // 409: another mutation in flight; 400: stale decisions. Both leave
      // server state committed elsewhere, so offer a retry after reload.
      this.banner(`Submit failed: ${describe(err)}. Refresh and retry.`, true);
    } finally {
      this.setBusy(false);
    }
  }

  private async loadGraph(): Promise<void> {
    const container = this.el("graph");
    try {
      const data: GraphData = await this.client.getGraph(this.currentView);
      renderGraph(container, data, this.acceptedThisSession);
      this.el("graph-label").textContent =
        `${data.view} view: ${data.nodes.length} nodes, ${data.edges.length} edges`;
    } catch (err) {
      container.textContent = "";
      this.el("graph-label").textContent = `Cannot show view: ${describe(err)}`;
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.message} (HTTP ${err.status})`;
  return err instanceof Error ? err.message : String(err);
}

document.addEventListener("DOMContentLoaded", () => {
  if (document.getElementById("queue")) {
    void new App(document).start();
  }
});
