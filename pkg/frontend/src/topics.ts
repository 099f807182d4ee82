// Topic-list view model: renders cards exactly as served and enforces the
// description gate (no label action until the description is saved or the
// topic is explicitly skipped).

import { ApiClient, ConnectionError } from "./api.js";
import type { TopicCardPayload, TopicListPayload } from "./types.js";

export interface TopicRow {
  topicId: number;
  keywords: { word: string; weight: number }[];
  description: string | null;
  descriptionSkipped: boolean;
  implicationStatus: "pending" | "generated";
  implication: string;
  labelEnabled: boolean;
}

export function labelEnabled(card: TopicCardPayload): boolean {
  return card.manual_description !== null || card.description_skipped;
}

export function toRow(card: TopicCardPayload): TopicRow {
  return {
    topicId: card.topic_id,
    keywords: card.keywords.map((k) => ({ word: k.word, weight: k.weight })),
    description: card.manual_description,
    descriptionSkipped: card.description_skipped,
    implicationStatus: card.implication ? "generated" : "pending",
    implication: card.implication,
    labelEnabled: labelEnabled(card),
  };
}

export type TopicListState =
  | { kind: "empty" }
  | { kind: "loaded"; rows: TopicRow[]; stale: boolean }
  | { kind: "error"; banner: string; cached: TopicRow[] };

export class TopicList {
  private rows: TopicRow[] = [];
  private banner: string | null = null;

  constructor(private api: ApiClient) {}

  state(): TopicListState {
    if (this.banner !== null) {
      return { kind: "error", banner: this.banner, cached: this.rows };
    }
    if (this.rows.length === 0) {
      return { kind: "empty" };
    }
    return { kind: "loaded", rows: this.rows, stale: false };
  }

  applyPayload(payload: TopicListPayload): void {
    this.rows = payload.items.map(toRow);
    this.banner = null;
  }

  /** Refetch; on connection failure the cached rows stay visible behind a
   * non-blocking banner. */
  async refresh(): Promise<TopicListState> {
    try {
      this.applyPayload(await this.api.topics());
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.banner = "API unreachable - showing cached data";
      } else {
        throw err;
      }
    }
    return this.state();
  }
}

/** Client-side mirror of the server's 422: an empty description cannot be
 * saved unless the topic is being skipped. */
export function validateDescription(text: string, skipped: boolean): string | null {
  if (!skipped && text.trim() === "") {
    return "Description text is required unless the topic is skipped";
  }
  return null;
}

export class DescriptionEditor {
  draft = "";
  skipped = false;
  validationMessage: string | null = null;

  constructor(
    private api: ApiClient,
    readonly topicId: number,
  ) {}

  async save(): Promise<TopicCardPayload | null> {
    this.validationMessage = validateDescription(this.draft, this.skipped);
    if (this.validationMessage !== null) {
      return null;
    }
    return this.api.saveDescription(this.topicId, this.draft, this.skipped);
  }
}
