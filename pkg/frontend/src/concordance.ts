// Concordance explorer: KWIC table around a node word, with an optional
// pattern filter that narrows rows to slot-pattern matches. All counts come
// straight from API payloads.

import { ApiClient } from "./api.js";
import type { KwicPayload, MatchesPayload } from "./types.js";

export interface KwicRow {
  docId: string;
  left: string;
  node: string;
  right: string;
}

export type ConcordanceState =
  | { kind: "no-occurrences"; node: string }
  | { kind: "kwic"; node: string; frequency: number; total: number; rows: KwicRow[] }
  | {
      kind: "filtered";
      node: string;
      pattern: string;
      total: number;
      rows: { matchId: string; docId: string; fillers: Record<string, string[]> }[];
    };

export function kwicState(payload: KwicPayload): ConcordanceState {
  if (payload.frequency === 0) {
    return { kind: "no-occurrences", node: payload.node };
  }
  return {
    kind: "kwic",
    node: payload.node,
    frequency: payload.frequency,
    total: payload.total,
    rows: payload.items.map((l) => ({
      docId: l.doc_id,
      left: l.left.join(" "),
      node: l.node,
      right: l.right.join(" "),
    })),
  };
}

export function filteredState(
  node: string,
  pattern: string,
  payload: MatchesPayload,
): ConcordanceState {
  return {
    kind: "filtered",
    node,
    pattern,
    total: payload.total,
    rows: payload.items.map((m) => ({
      matchId: m.match_id,
      docId: m.doc_id,
      fillers: m.fillers,
    })),
  };
}

export class ConcordanceExplorer {
  /** Node choice persists for the session so panel switches keep context. */
  node: string | null = null;
  patternFilter: string | null = null;

  constructor(private api: ApiClient) {}

  async show(node: string, window = 5): Promise<ConcordanceState> {
    this.node = node;
    this.patternFilter = null;
    return kwicState(await this.api.kwic(node, window));
  }

  async applyPatternFilter(pattern: string): Promise<ConcordanceState> {
    if (this.node === null) {
      throw new Error("select a node word before filtering by pattern");
    }
    this.patternFilter = pattern;
    return filteredState(this.node, pattern, await this.api.patternMatches(pattern, this.node));
  }
}
