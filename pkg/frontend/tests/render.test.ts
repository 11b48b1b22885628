/** UI pass-through contract: rendering preserves API order and scores.
 *
 * Runs against a frozen response fixture, no backend needed.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { escapeHtml, formatScore, renderErrorBanner, renderResults } from "../src/render.js";
import { SearchResponse } from "../src/types.js";

const fixturePath = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "search_response.json");
const fixture = JSON.parse(readFileSync(fixturePath, "utf-8")) as SearchResponse;

function extractAll(pattern: RegExp, html: string): string[] {
  return [...html.matchAll(pattern)].map((m) => m[1]);
}

describe("renderResults pass-through", () => {
  const html = renderResults(fixture);

  it("preserves the API row order exactly", () => {
    const rendered = extractAll(/data-song-id="(\d+)"/g, html).map(Number);
    expect(rendered).toEqual(fixture.results.map((hit) => hit.song.id));
  });

  it("displays every final score to exactly three decimals of the API value", () => {
    const rendered = extractAll(/<td class="score">([\d.]+)<\/td>/g, html);
    expect(rendered).toEqual(fixture.results.map((hit) => hit.final_score.toFixed(3)));
  });

  it("renders a breakdown bar per weighted field with the API value", () => {
    const fields = Object.keys(fixture.applied_weights);
    for (const hit of fixture.results) {
      for (const field of fields) {
        const value = hit.breakdown[field] ?? 0;
        expect(html).toContain(`data-field="${field}" data-value="${value.toFixed(3)}"`);
      }
    }
  });

  it("weighted sum of the rendered breakdown reproduces the rendered final score", () => {
    const rows = html.split("<tr data-song-id=").slice(1);
    fixture.results.forEach((hit, i) => {
      const row = rows[i];
      let weighted = 0;
      for (const [field, weight] of Object.entries(fixture.applied_weights)) {
        const match = new RegExp(`data-field="${field}" data-value="([\\d.]+)"`).exec(row);
        expect(match).not.toBeNull();
        weighted += weight * Number(match![1]);
      }
      const score = /<td class="score">([\d.]+)<\/td>/.exec(row)![1];
      expect(Math.abs(weighted - Number(score))).toBeLessThan(2e-3);
      expect(formatScore(hit.final_score)).toBe(score);
    });
  });

  it("shows the applied weights line", () => {
    for (const [field, weight] of Object.entries(fixture.applied_weights)) {
      expect(html).toContain(`${field} ${weight.toFixed(3)}`);
    }
  });

  it("never rescales: bar widths are the clamped values in percent", () => {
    const widths = extractAll(/width:(\d+)%/g, html).map(Number);
    const expected = fixture.results.flatMap((hit) =>
      Object.keys(fixture.applied_weights).map((field) =>
        Math.round(Math.max(0, Math.min(1, hit.breakdown[field] ?? 0)) * 100),
      ),
    );
    expect(widths).toEqual(expected);
  });
});

describe("renderResults edges", () => {
  it("empty result list", () => {
    expect(renderResults({ results: [], applied_weights: {} })).toContain("no results");
  });

  it("escapes song metadata", () => {
    const response: SearchResponse = {
      results: [
        {
          song: {
            id: 1,
            title: `<b>"R&B" bop</b>`,
            artist: "a'<script>",
            album: null,
            genre: null,
            release_date: "1999-01-01",
          },
          final_score: 0.5,
          breakdown: { lyrics: 0.5 },
        },
      ],
      applied_weights: { lyrics: 1.0 },
    };
    const html = renderResults(response);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;b&gt;&quot;R&amp;B&quot; bop&lt;/b&gt;");
  });
});

describe("banner and escaping helpers", () => {
  it("error banner escapes the message", () => {
    expect(renderErrorBanner("<nope> & stuff")).toContain("&lt;nope&gt; &amp; stuff");
  });

  it("escapeHtml covers the five specials", () => {
    expect(escapeHtml(`&<>"'`)).toBe("&amp;&lt;&gt;&quot;&#39;");
  });
});
