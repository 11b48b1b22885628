/** Client-side mirror of the server's query validation rules.
 *
 * Submit stays disabled until the form maps to a query the server would
 * accept: at least one searchable field (text or audio; date bounds alone
 * are not searchable), parseable dates, after strictly before before, and
 * non-negative weights.
 */

import { QueryFormState, TEXT_FIELDS } from "./types.js";

export interface ValidationResult {
  ok: boolean;
  problems: string[];
}

/** Accepts YYYY, YYYY-MM, or YYYY-MM-DD; returns a normalized ISO date or null. */
export function normalizeDate(input: string): string | null {
  const text = input.trim();
  if (!text) return null;
  const match = /^(\d{4})(?:-(\d{1,2})(?:-(\d{1,2}))?)?$/.exec(text);
  if (!match) return null;
  const year = Number(match[1]);
  const month = match[2] ? Number(match[2]) : 1;
  const day = match[3] ? Number(match[3]) : 1;
  if (month < 1 || month > 12 || day < 1 || day > 31) return null;
  // Reject impossible dates like Feb 30 by round-tripping through Date.
  const date = new Date(Date.UTC(year, month - 1, day));
  if (date.getUTCFullYear() !== year || date.getUTCMonth() !== month - 1 || date.getUTCDate() !== day) {
    return null;
  }
  const pad = (n: number) => String(n).padStart(2, "0");
  return `${year}-${pad(month)}-${pad(day)}`;
}

export function hasSearchableField(form: QueryFormState): boolean {
  return TEXT_FIELDS.some((f) => form[f].trim() !== "") || form.audio !== null;
}

export function validateForm(form: QueryFormState): ValidationResult {
  const problems: string[] = [];
  if (!hasSearchableField(form)) {
    problems.push("add a searchable field (some text or an audio clip); date bounds alone cannot be searched");
  }
  const before = form.before.trim() ? normalizeDate(form.before) : null;
  const after = form.after.trim() ? normalizeDate(form.after) : null;
  if (form.before.trim() && before === null) {
    problems.push(`"before" is not a date (use YYYY, YYYY-MM, or YYYY-MM-DD)`);
  }
  if (form.after.trim() && after === null) {
    problems.push(`"after" is not a date (use YYYY, YYYY-MM, or YYYY-MM-DD)`);
  }
  if (before !== null && after !== null && !(after < before)) {
    problems.push(`date bounds are inverted: "after" must precede "before"`);
  }
  if (!Number.isInteger(form.limit) || form.limit < 1) {
    problems.push("result limit must be a positive integer");
  }
  if (form.weights) {
    for (const [field, value] of Object.entries(form.weights)) {
      if (value === undefined || value < 0 || Number.isNaN(value)) {
        problems.push(`weight for ${field} must be non-negative`);
      }
    }
  }
  return { ok: problems.length === 0, problems };
}

export function canSubmit(form: QueryFormState): boolean {
  return validateForm(form).ok;
}
