/** Request building and the one-in-flight search client. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { ApiError, buildQuerySpec, buildSearchBody, SearchClient } from "../src/api.js";
import { emptyForm } from "../src/types.js";

const fixturePath = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "search_response.json");
const fixtureText = readFileSync(fixturePath, "utf-8");

describe("buildQuerySpec", () => {
  it("includes only filled fields, trimmed", () => {
    const form = { ...emptyForm(), lyrics: "  golden river  ", artist: "Ada" };
    expect(buildQuerySpec(form)).toEqual({ lyrics: "golden river", artist: "Ada", limit: 20 });
  });

  it("normalizes dates", () => {
    const form = { ...emptyForm(), lyrics: "x", before: "2000", after: "1990-06" };
    expect(buildQuerySpec(form)).toMatchObject({ before: "2000-01-01", after: "1990-06-01" });
  });

  it("carries weight overrides", () => {
    const form = { ...emptyForm(), lyrics: "x", weights: { lyrics: 2, audio: 4 } };
    expect(buildQuerySpec(form)).toMatchObject({ weights: { lyrics: 2, audio: 4 } });
  });
});

describe("buildSearchBody", () => {
  it("puts the query JSON in the query part", () => {
    const form = { ...emptyForm(), title: "Comet" };
    const body = buildSearchBody(form);
    expect(JSON.parse(body.get("query") as string)).toEqual({ title: "Comet", limit: 20 });
    expect(body.get("audio")).toBeNull();
  });

  it("attaches the audio blob as query.wav", () => {
    const form = { ...emptyForm(), audio: new Blob([new Uint8Array([1, 2, 3])]) };
    const body = buildSearchBody(form);
    const part = body.get("audio") as File;
    expect(part).not.toBeNull();
    expect(part.name).toBe("query.wav");
    expect(part.size).toBe(3);
  });
});

describe("SearchClient", () => {
  it("returns the parsed response on success", async () => {
    const client = new SearchClient("", async () => new Response(fixtureText, { status: 200 }));
    const response = await client.search({ ...emptyForm(), lyrics: "x" });
    expect(response.results.length).toBeGreaterThan(0);
    expect(response.results[0].song.id).toBe(JSON.parse(fixtureText).results[0].song.id);
  });

  it("maps API errors to ApiError with the detail text", async () => {
    const client = new SearchClient(
      "",
      async () => new Response(JSON.stringify({ detail: "no searchable field" }), { status: 400 }),
    );
    await expect(client.search({ ...emptyForm(), lyrics: "x" })).rejects.toThrowError(ApiError);
    await expect(client.search({ ...emptyForm(), lyrics: "x" })).rejects.toThrow("no searchable field");
  });

  it("a new search aborts the pending one", async () => {
    const signals: AbortSignal[] = [];
    let calls = 0;
    const client = new SearchClient("", (_url, init) => {
      calls += 1;
      const signal = init!.signal as AbortSignal;
      signals.push(signal);
      if (calls === 1) {
        // Hang until aborted, like a slow request.
        return new Promise<Response>((_resolve, reject) => {
          signal.addEventListener("abort", () =>
            reject(Object.assign(new Error("aborted"), { name: "AbortError" })),
          );
        });
      }
      return Promise.resolve(new Response(fixtureText, { status: 200 }));
    });

    const first = client.search({ ...emptyForm(), lyrics: "slow" });
    const second = client.search({ ...emptyForm(), lyrics: "fast" });
    await expect(first).rejects.toThrow("aborted");
    expect((await second).results.length).toBeGreaterThan(0);
    expect(signals[0].aborted).toBe(true);
    expect(signals[1].aborted).toBe(false);
  });

  it("health swallows network failures", async () => {
    const client = new SearchClient("", async () => {
      throw new Error("connection refused");
    });
    expect(await client.health()).toBe(false);
  });
});
