// Thin typed client over the workbench API. The UI never computes statistics
// itself: every number rendered comes out of one of these calls.

import type {
  AnnotationResponse,
  CollocatePayload,
  JobPayload,
  KwicPayload,
  MatchesPayload,
  PatternListPayload,
  ProsodyLabel,
  ProsodySummaryPayload,
  TopicCardPayload,
  TopicListPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Non-2xx API response, with the server's error payload when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly detail?: unknown,
  ) {
    super(message);
  }
}

/** Network-level failure (server unreachable); the UI shows a banner and
 * keeps its cached view. */
export class ConnectionError extends Error {}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ConnectionError(`API unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail: unknown;
      try {
        detail = await response.json();
      } catch {
        detail = undefined;
      }
      throw new ApiError(response.status, `${init?.method ?? "GET"} ${path} -> ${response.status}`, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  topics(offset = 0, limit = 100): Promise<TopicListPayload> {
    return this.request(`/topics?offset=${offset}&limit=${limit}`);
  }

  topic(topicId: number): Promise<TopicCardPayload> {
    return this.request(`/topics/${topicId}`);
  }

  saveDescription(topicId: number, text: string, skipped = false): Promise<TopicCardPayload> {
    return this.post(`/topics/${topicId}/description`, { text, skipped });
  }

  labelTopic(topicId: number): Promise<TopicCardPayload> {
    return this.post(`/label/${topicId}`, {});
  }

  kwic(node: string, window = 5, offset = 0, limit = 50): Promise<KwicPayload> {
    const q = new URLSearchParams({
      node,
      window: String(window),
      offset: String(offset),
      limit: String(limit),
    });
    return this.request(`/kwic?${q}`);
  }

  collocates(node: string, window = 5, measure = "raw"): Promise<CollocatePayload> {
    const q = new URLSearchParams({ node, window: String(window), measure });
    return this.request(`/collocates?${q}`);
  }

  patterns(): Promise<PatternListPayload> {
    return this.request(`/patterns`);
  }

  patternMatches(name: string, node: string): Promise<MatchesPayload> {
    const q = new URLSearchParams({ node });
    return this.request(`/patterns/${encodeURIComponent(name)}/matches?${q}`);
  }

  annotate(
    matchId: string,
    label: ProsodyLabel,
    annotator: string,
    note = "",
  ): Promise<AnnotationResponse> {
    return this.post(`/annotations`, { match_id: matchId, label, annotator, note });
  }

  prosody(pattern?: string, node?: string): Promise<ProsodySummaryPayload> {
    const q = new URLSearchParams();
    if (pattern) q.set("pattern", pattern);
    if (node) q.set("node", node);
    const suffix = q.size ? `?${q}` : "";
    return this.request(`/prosody${suffix}`);
  }

  startJob(kind: "train" | "sweep"): Promise<JobPayload> {
    return this.post(`/jobs`, { kind });
  }

  jobStatus(jobId: string): Promise<JobPayload> {
    return this.request(`/jobs/${jobId}`);
  }
}
