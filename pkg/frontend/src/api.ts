import type {
  ExamplesPage,
  Health,
  Histogram,
  PendingCategory,
  SearchMode,
  SearchResult,
  SortKey,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function parseDetail(res: Response): Promise<string> {
  try {
    const body = await res.json();
    if (typeof body.detail === "string") return body.detail;
    if (body.detail !== undefined) return JSON.stringify(body.detail);
  } catch {
    // fall through to the status text
  }
  return res.statusText || `HTTP ${res.status}`;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) throw new ApiError(res.status, await parseDetail(res));
    return res.json() as Promise<T>;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<Health> {
    return this.request("/api/health");
  }

  examples(params: { offset?: number; limit?: number; entityId?: number }): Promise<ExamplesPage> {
    const query = new URLSearchParams();
    if (params.offset !== undefined) query.set("offset", String(params.offset));
    if (params.limit !== undefined) query.set("limit", String(params.limit));
    if (params.entityId !== undefined) query.set("entity_id", String(params.entityId));
    const suffix = query.toString();
    return this.request(`/api/examples${suffix ? "?" + suffix : ""}`);
  }

  histograms(sort: SortKey = "total"): Promise<Histogram[]> {
    return this.request(`/api/histograms?sort=${sort}`);
  }

  search(query: string, mode: SearchMode): Promise<SearchResult[]> {
    return this.post("/api/search", { query, mode });
  }

  createCategory(category: string): Promise<PendingCategory> {
    return this.post("/api/categories", { category });
  }

  createHistogram(pendingId: string, label: string, entityIds: number[]): Promise<Histogram> {
    return this.post("/api/histograms", {
      pending_id: pendingId,
      label,
      entity_ids: entityIds,
    });
  }
}
