// Review queue: one row per recommended user with the per-view rank
// breakdown and a pending/accepted/rejected decision toggled by the curator.

import type { Batch, CriterionName } from "./api.js";

export type Decision = "pending" | "accepted" | "rejected";

export interface QueueItem {
  user: string;
  score: number;
  ranks: Partial<Record<CriterionName, number>>;
  decision: Decision;
}

export const CRITERIA: { key: CriterionName; label: string }[] = [
  { key: "friend_nfc", label: "Friends (nfc)" },
  { key: "friend_hits", label: "Friends (HITS)" },
  { key: "colist", label: "Co-listed" },
  { key: "mention", label: "Mentions" },
  { key: "retweet", label: "Retweets" },
];

export function toQueueItems(batch: Batch): QueueItem[] {
  return batch.items.map((item) => ({
    user: item.user,
    score: item.score,
    ranks: item.ranks,
    decision: "pending" as Decision,
  }));
}

// Absent ranks render as an em dash, never as 0.
export function formatRank(rank: number | undefined): string {
  return rank === undefined ? "—" : String(rank);
}

type SortKey = "server" | "score" | CriterionName;

export class QueueView {
  readonly items: QueueItem[];
  private sortKey: SortKey = "server";
  private enabled = true;

  constructor(private readonly container: HTMLElement, batch: Batch) {
    this.items = toQueueItems(batch);
    this.render();
  }

  acceptedUsers(): string[] {
    return this.items.filter((i) => i.decision === "accepted").map((i) => i.user);
  }

  setEnabled(enabled: boolean): void {
    this.enabled = enabled;
    this.container
      .querySelectorAll("button")
      .forEach((b) => ((b as HTMLButtonElement).disabled = !enabled));
  }

  sortBy(key: SortKey): void {
    this.sortKey = key;
    this.render();
  }

  private sortedItems(): QueueItem[] {
    const items = [...this.items];
    if (this.sortKey === "server") {
      return items; // server order is the aggregate ranking
    }
    if (this.sortKey === "score") {
      items.sort((a, b) => b.score - a.score);
      return items;
    }
    const key = this.sortKey;
    // best (lowest) rank first; unranked rows sink to the bottom
    items.sort((a, b) => (a.ranks[key] ?? Infinity) - (b.ranks[key] ?? Infinity));
    return items;
  }

  render(): void {
    this.container.textContent = "";
    if (this.items.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "No recommendations in this batch. Run another iteration to explore further.";
      this.container.appendChild(empty);
      return;
    }

    const table = document.createElement("table");
    table.className = "queue";
    const thead = document.createElement("thead");
    const headRow = document.createElement("tr");
    const columns: { label: string; key: SortKey | null }[] = [
      { label: "#", key: "server" },
      { label: "User", key: null },
      { label: "Score", key: "score" },
      ...CRITERIA.map((c) => ({ label: c.label, key: c.key as SortKey })),
      { label: "Decision", key: null },
    ];
    for (const col of columns) {
      const th = document.createElement("th");
      th.textContent = col.label;
      if (col.key) {
        th.classList.add("sortable");
        if (col.key === this.sortKey) th.classList.add("sorted");
        const key = col.key;
        th.addEventListener("click", () => this.sortBy(key));
      }
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);

    const tbody = document.createElement("tbody");
    for (const [index, item] of this.sortedItems().entries()) {
      tbody.appendChild(this.renderRow(item, index + 1));
    }
    table.appendChild(tbody);
    this.container.appendChild(table);
  }

  private renderRow(item: QueueItem, position: number): HTMLTableRowElement {
    const row = document.createElement("tr");
    row.dataset.user = item.user;
    row.className = `decision-${item.decision}`;

    const cells = [
      String(position),
      item.user,
      item.score.toFixed(4),
      ...CRITERIA.map((c) => formatRank(item.ranks[c.key])),
    ];
    for (const [i, text] of cells.entries()) {
      const td = document.createElement("td");
      td.textContent = text;
      if (i >= 3) td.classList.add("rank-cell");
      row.appendChild(td);
    }

    const actions = document.createElement("td");
    for (const decision of ["accepted", "rejected"] as const) {
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = decision === "accepted" ? "Accept" : "Reject";
      button.className = `decide-${decision}`;
      button.disabled = !this.enabled;
      if (item.decision === decision) button.classList.add("active");
      button.addEventListener("click", () => {
        // idempotent: repeating a decision is a no-op, the other button switches it
        if (item.decision !== decision) {
          item.decision = decision;
          this.render();
        }
      });
      actions.appendChild(button);
    }
    row.appendChild(actions);
    return row;
  }
}
