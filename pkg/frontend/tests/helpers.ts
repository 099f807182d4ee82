import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixturesDir, name), "utf-8")) as T;
}

export interface RecordedRequest {
  method: string;
  path: string;
  body?: unknown;
}

export interface Route {
  method: string;
  path: RegExp;
  response: unknown | ((req: RecordedRequest) => unknown);
  status?: number;
}

/** fetch stub backed by recorded fixture payloads; captures every request. */
export function stubFetch(routes: Route[]): { fetch: FetchLike; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const req: RecordedRequest = {
      method: init?.method ?? "GET",
      path,
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    requests.push(req);
    for (const route of routes) {
      if (route.method === req.method && route.path.test(path)) {
        const payload =
          typeof route.response === "function" ? route.response(req) : route.response;
        return new Response(JSON.stringify(payload), {
          status: route.status ?? 200,
          headers: { "Content-Type": "application/json", "X-Schema-Version": "1" },
        });
      }
    }
    return new Response(JSON.stringify({ detail: `no route for ${req.method} ${path}` }), {
      status: 404,
    });
  };
  return { fetch: fetchImpl, requests };
}

export const failingFetch: FetchLike = async () => {
  throw new TypeError("fetch failed: connection refused");
};
