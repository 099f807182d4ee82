// Prosody tagging: annotation queue with optimistic submission and a summary
// panel that always re-renders from the server's summary payload.

import { ApiClient, ConnectionError } from "./api.js";
import type { MatchesPayload, ProsodyLabel, ProsodySummaryPayload } from "./types.js";

export interface QueueItem {
  matchId: string;
  docId: string;
  fillers: Record<string, string[]>;
  currentLabel: ProsodyLabel | null;
  pending: boolean; // submitted but not yet confirmed by the server
}

export interface SummaryView {
  counts: Record<ProsodyLabel, number>;
  proportions: Record<ProsodyLabel, number>;
  unannotated: number;
  nMatches: number;
}

export function summaryView(payload: ProsodySummaryPayload): SummaryView {
  return {
    counts: payload.counts,
    proportions: payload.proportions,
    unannotated: payload.unannotated,
    nMatches: payload.n_matches,
  };
}

export class AnnotationQueue {
  items: QueueItem[] = [];
  summary: SummaryView | null = null;
  retryQueue: { matchId: string; label: ProsodyLabel }[] = [];

  constructor(
    private api: ApiClient,
    readonly annotator: string,
    readonly pattern: string,
  ) {}

  loadMatches(payload: MatchesPayload): void {
    this.items = payload.items.map((m) => ({
      matchId: m.match_id,
      docId: m.doc_id,
      fillers: m.fillers,
      currentLabel: null,
      pending: false,
    }));
  }

  private item(matchId: string): QueueItem {
    const found = this.items.find((i) => i.matchId === matchId);
    if (!found) {
      throw new Error(`match ${matchId} is not in the queue`);
    }
    return found;
  }

  /** Optimistic update, then reconcile the summary from the server. Offline
   * submissions are queued with a retry indicator instead of being lost. */
  async submit(matchId: string, label: ProsodyLabel): Promise<void> {
    const item = this.item(matchId);
    item.currentLabel = label;
    item.pending = true;
    try {
      await this.api.annotate(matchId, label, this.annotator);
      this.summary = summaryView(await this.api.prosody(this.pattern));
      item.pending = false;
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.retryQueue.push({ matchId, label });
        return;
      }
      item.currentLabel = null;
      item.pending = false;
      throw err;
    }
  }

  async flushRetries(): Promise<void> {
    const queued = this.retryQueue;
    this.retryQueue = [];
    for (const entry of queued) {
      await this.submit(entry.matchId, entry.label);
    }
  }
}
