// Wire types mirroring the service's response models.

export interface Bucket {
  entity_id: number;
  surface: string;
  count: number;
}

export interface Histogram {
  id: string;
  label: string;
  source: "auto" | "user";
  total_count: number;
  entropy: number;
  buckets: Bucket[];
}

export interface SearchResult {
  histogram_id: string;
  score: number;
  match_kind: "exact" | "semantic";
}

export interface Suggestion {
  entity_id: number;
  surface: string;
  similarity: number;
}

export interface PendingCategory {
  id: string;
  category: string;
  llm_examples: string[];
  suggestions: Suggestion[];
}

export interface Example {
  id: number;
  text: string;
}

export interface ExamplesPage {
  examples: Example[];
  total: number;
  offset: number;
  limit: number;
}

export interface Health {
  status: string;
  artifact_digest: string;
  histogram_counts: Record<string, number>;
}

export type SortKey = "total" | "entropy";
export type SearchMode = "exact" | "semantic";
