export { ApiClient, ApiError, ConnectionError } from "./api.js";
export type { FetchLike } from "./api.js";
export * from "./types.js";
export {
  DescriptionEditor,
  TopicList,
  labelEnabled,
  toRow,
  validateDescription,
} from "./topics.js";
export type { TopicListState, TopicRow } from "./topics.js";
export { ConcordanceExplorer, filteredState, kwicState } from "./concordance.js";
export type { ConcordanceState, KwicRow } from "./concordance.js";
export { AnnotationQueue, summaryView } from "./prosody.js";
export type { QueueItem, SummaryView } from "./prosody.js";
