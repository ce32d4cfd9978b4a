// Typed client for the curation service API. Every number shown in the UI
// comes from one of these responses; nothing is computed client-side.

export interface SessionSummary {
  session_id: string;
  iteration: number;
  core_size: number;
  candidate_size: number;
  budgets: Record<string, number>;
}

export type CriterionName = "friend_nfc" | "friend_hits" | "colist" | "mention" | "retweet";

export interface BatchItem {
  user: string;
  score: number;
  ranks: Partial<Record<CriterionName, number>>;
}

export interface Batch {
  iteration: number;
  items: BatchItem[];
}

export interface GraphNode {
  id: string;
  core: boolean;
  recommended: boolean;
}

export interface GraphEdge {
  source: string;
  target: string;
  weight: number;
}

export interface GraphData {
  view: string;
  directed: boolean;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(base + path, init);
  if (!res.ok) {
    let message = `${res.status} ${res.statusText}`;
    try {
      const body = await res.json();
      if (body && typeof body.error === "string") {
        message = body.error;
        if (Array.isArray(body.invalid) && body.invalid.length) {
          message += `: ${body.invalid.join(", ")}`;
        }
      }
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(res.status, message);
  }
  return (await res.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  getSession(): Promise<SessionSummary> {
    return request(this.base, "/api/session");
  }

  getRecommendations(): Promise<Batch> {
    return request(this.base, "/api/recommendations");
  }

  select(accepted: string[]): Promise<SessionSummary> {
    return request(this.base, "/api/select", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ accepted }),
    });
  }

  iterate(): Promise<Batch> {
    return request(this.base, "/api/iterate", { method: "POST" });
  }

  getGraph(view: string): Promise<GraphData> {
    return request(this.base, `/api/graph?view=${encodeURIComponent(view)}`);
  }
}
