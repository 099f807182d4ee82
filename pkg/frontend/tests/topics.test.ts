import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  DescriptionEditor,
  TopicList,
  labelEnabled,
  toRow,
  validateDescription,
} from "../src/topics.js";
import type { TopicCardPayload, TopicListPayload } from "../src/types.js";
import { failingFetch, fixture, stubFetch } from "./helpers.js";

const topicsFixture = fixture<TopicListPayload>("topics.json");
const savedCard = fixture<TopicCardPayload>("description_saved.json");

describe("topic list", () => {
  it("renders one card per API topic (7-topic workspace)", async () => {
    const { fetch } = stubFetch([{ method: "GET", path: /^\/topics\?/, response: topicsFixture }]);
    const list = new TopicList(new ApiClient("http://api", fetch));
    const state = await list.refresh();
    expect(state.kind).toBe("loaded");
    if (state.kind === "loaded") {
      expect(state.rows).toHaveLength(7);
      expect(state.rows.map((r) => r.topicId)).toEqual(
        topicsFixture.items.map((c) => c.topic_id),
      );
    }
  });

  it("shows every keyword and weight exactly as served", () => {
    for (const card of topicsFixture.items) {
      const row = toRow(card);
      expect(row.keywords).toEqual(card.keywords.map((k) => ({ word: k.word, weight: k.weight })));
      expect(row.keywords).toHaveLength(card.k);
    }
  });

  it("keeps server-side weight ordering (descending)", () => {
    for (const card of topicsFixture.items) {
      const weights = toRow(card).keywords.map((k) => k.weight);
      const sorted = [...weights].sort((a, b) => b - a);
      expect(weights).toEqual(sorted);
    }
  });

  it("shows the empty state for a fresh workspace", async () => {
    const { fetch } = stubFetch([
      { method: "GET", path: /^\/topics\?/, response: { total: 0, items: [] } },
    ]);
    const list = new TopicList(new ApiClient("http://api", fetch));
    expect((await list.refresh()).kind).toBe("empty");
  });

  it("keeps the cached view behind a banner when the API is down", async () => {
    const good = stubFetch([{ method: "GET", path: /^\/topics\?/, response: topicsFixture }]);
    let down = false;
    const flaky: typeof good.fetch = (url, init) =>
      down ? failingFetch(url, init) : good.fetch(url, init);
    const list = new TopicList(new ApiClient("http://api", flaky));
    await list.refresh();
    down = true;
    const state = await list.refresh();
    expect(state.kind).toBe("error");
    if (state.kind === "error") {
      expect(state.banner).toMatch(/unreachable/i);
      expect(state.cached).toHaveLength(7);
    }
  });
});

describe("description gate", () => {
  it("label is disabled for every freshly merged topic", () => {
    for (const card of topicsFixture.items) {
      expect(card.manual_description).toBeNull();
      expect(labelEnabled(card)).toBe(false);
      expect(toRow(card).labelEnabled).toBe(false);
    }
  });

  it("label becomes enabled once a description is saved", () => {
    expect(savedCard.manual_description).toBe("athlete performance");
    expect(labelEnabled(savedCard)).toBe(true);
  });

  it("label becomes enabled when the topic is explicitly skipped", () => {
    const skipped = { ...topicsFixture.items[0], description_skipped: true };
    expect(labelEnabled(skipped)).toBe(true);
  });

  it("rejects an empty non-skipped description before hitting the API", async () => {
    const { fetch, requests } = stubFetch([]);
    const editor = new DescriptionEditor(new ApiClient("http://api", fetch), 0);
    editor.draft = "   ";
    expect(await editor.save()).toBeNull();
    expect(editor.validationMessage).toMatch(/required/);
    expect(requests).toHaveLength(0);
    expect(validateDescription("", true)).toBeNull();
  });

  it("saving posts the description to the topic endpoint", async () => {
    const { fetch, requests } = stubFetch([
      { method: "POST", path: /^\/topics\/3\/description$/, response: savedCard },
    ]);
    const editor = new DescriptionEditor(new ApiClient("http://api", fetch), 3);
    editor.draft = "athlete performance";
    const card = await editor.save();
    expect(card?.manual_description).toBe("athlete performance");
    expect(requests[0]).toEqual({
      method: "POST",
      path: "/topics/3/description",
      body: { text: "athlete performance", skipped: false },
    });
  });
});
