// Payload shapes of the workbench HTTP API (schema version 1).

export interface KeywordEntry {
  word: string;
  weight: number;
}

export interface TopicCardPayload {
  topic_id: number;
  keywords: KeywordEntry[];
  senses: string[];
  manual_description: string | null;
  description_skipped: boolean;
  implication: string;
  k: number;
}

export interface TopicListPayload {
  total: number;
  items: TopicCardPayload[];
}

export interface KwicLine {
  doc_id: string;
  node_index: number;
  left: string[];
  right: string[];
  node: string;
}

export interface KwicPayload {
  node: string;
  frequency: number;
  total: number;
  items: KwicLine[];
}

export interface CollocatePayload {
  total: number;
  items: { form: string; stat: number; freq: number }[];
}

export interface PatternListPayload {
  items: { name: string; source: string }[];
}

export interface PatternMatchItem {
  match_id: string;
  doc_id: string;
  span: [number, number];
  fillers: Record<string, string[]>;
}

export interface MatchesPayload {
  total: number;
  items: PatternMatchItem[];
}

export type ProsodyLabel = "positive" | "neutral" | "negative";

export interface ProsodySummaryPayload {
  counts: Record<ProsodyLabel, number>;
  proportions: Record<ProsodyLabel, number>;
  unannotated: number;
  per_annotator: Record<string, Record<ProsodyLabel, number>>;
  n_matches: number;
}

export interface AnnotationResponse {
  match_id: string;
  label: string;
  annotator: string;
  timestamp: number;
}

export interface JobPayload {
  id: string;
  kind: string;
  status: "running" | "done" | "failed";
  exit_code?: number;
  message?: string;
}
