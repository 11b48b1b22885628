/** Talking to the search API: query spec, multipart body, one in-flight search.
 *
 * The query travels as a JSON `query` part; recorded or uploaded audio as a
 * WAV `audio` part. A new submit aborts the pending request, so at most one
 * search is in flight and responses can never arrive out of order.
 */

import { QueryFormState, SearchResponse, TEXT_FIELDS } from "./types.js";
import { normalizeDate } from "./validate.js";

/** The JSON object for the `query` multipart part (only what's filled in). */
export function buildQuerySpec(form: QueryFormState): Record<string, unknown> {
  const spec: Record<string, unknown> = {};
  for (const field of TEXT_FIELDS) {
    const value = form[field].trim();
    if (value) spec[field] = value;
  }
  const before = normalizeDate(form.before);
  const after = normalizeDate(form.after);
  if (before) spec.before = before;
  if (after) spec.after = after;
  spec.limit = form.limit;
  if (form.weights && Object.keys(form.weights).length > 0) {
    spec.weights = { ...form.weights };
  }
  return spec;
}

export function buildSearchBody(form: QueryFormState): FormData {
  const body = new FormData();
  body.append("query", JSON.stringify(buildQuerySpec(form)));
  if (form.audio) {
    body.append("audio", form.audio, "query.wav");
  }
  return body;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SearchClient {
  private inflight: AbortController | null = null;

  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** POST /search; a new call aborts the previous one. */
  async search(form: QueryFormState): Promise<SearchResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await this.fetchFn(`${this.baseUrl}/search`, {
        method: "POST",
        body: buildSearchBody(form),
        signal: controller.signal,
      });
      if (!response.ok) {
        throw new ApiError(response.status, await extractDetail(response));
      }
      return (await response.json()) as SearchResponse;
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  async song(id: number): Promise<Record<string, unknown>> {
    const response = await this.fetchFn(`${this.baseUrl}/songs/${id}`);
    if (!response.ok) throw new ApiError(response.status, await extractDetail(response));
    return (await response.json()) as Record<string, unknown>;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchFn(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}

async function extractDetail(response: Response): Promise<string> {
  try {
    const payload = (await response.json()) as { detail?: unknown };
    if (typeof payload.detail === "string") return payload.detail;
    return JSON.stringify(payload);
  } catch {
    return `request failed with status ${response.status}`;
  }
}
