/** HTML rendering for results and errors.
 *
 * Rendering is pass-through by contract: rows appear exactly in API order,
 * never re-sorted or rescaled, and every displayed score is the API value
 * to three decimals. Pure string builders keep this testable without a DOM.
 */

import { SearchHit, SearchResponse } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function formatScore(value: number): string {
  return value.toFixed(3);
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderHint(message: string): string {
  return `<span class="hint">${escapeHtml(message)}</span>`;
}

export function renderWeightsLine(weights: Record<string, number>): string {
  const parts = Object.entries(weights)
    .map(([field, w]) => `${escapeHtml(field)} ${formatScore(w)}`)
    .join(" · ");
  return `<p class="weights">applied weights: ${parts}</p>`;
}

function renderBreakdown(hit: SearchHit, fields: string[]): string {
  const bars = fields.map((field) => {
    const value = hit.breakdown[field] ?? 0;
    const width = Math.round(Math.max(0, Math.min(1, value)) * 100);
    return (
      `<div class="bar" data-field="${escapeHtml(field)}" data-value="${formatScore(value)}">` +
      `<span class="bar-label">${escapeHtml(field)}</span>` +
      `<span class="bar-track"><span class="bar-fill" style="width:${width}%"></span></span>` +
      `<span class="bar-value">${formatScore(value)}</span>` +
      `</div>`
    );
  });
  return bars.join("");
}

export function renderResults(response: SearchResponse): string {
  if (response.results.length === 0) {
    return `<p class="empty">no results</p>`;
  }
  const fields = Object.keys(response.applied_weights);
  const rows = response.results.map((hit, position) => {
    const song = hit.song;
    const released = escapeHtml(song.release_date);
    const subtitle = [song.artist, song.album, song.genre]
      .filter((part): part is string => !!part)
      .map(escapeHtml)
      .join(" · ");
    return (
      `<tr data-song-id="${song.id}">` +
      `<td class="pos">${position + 1}</td>` +
      `<td class="song"><strong>${escapeHtml(song.title)}</strong><span class="sub">${subtitle}</span></td>` +
      `<td class="released">${released}</td>` +
      `<td class="score">${formatScore(hit.final_score)}</td>` +
      `<td class="breakdown">${renderBreakdown(hit, fields)}</td>` +
      `</tr>`
    );
  });
  return (
    renderWeightsLine(response.applied_weights) +
    `<table class="results"><thead><tr>` +
    `<th>#</th><th>song</th><th>released</th><th>score</th><th>per-field breakdown</th>` +
    `</tr></thead><tbody>${rows.join("")}</tbody></table>`
  );
}
