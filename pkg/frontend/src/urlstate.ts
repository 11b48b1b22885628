/** Shareable query-string state: the text parts of the form round-trip
 * through the URL, so a pasted link reproduces the same request (audio
 * blobs are not shareable and stay out).
 */

import { QueryFormState, TEXT_FIELDS, FieldName, emptyForm } from "./types.js";

const WEIGHT_PREFIX = "w.";
const WEIGHT_FIELDS: FieldName[] = [...TEXT_FIELDS, "audio"];

export function formToQueryString(form: QueryFormState): string {
  const params = new URLSearchParams();
  for (const field of TEXT_FIELDS) {
    if (form[field].trim()) params.set(field, form[field].trim());
  }
  if (form.before.trim()) params.set("before", form.before.trim());
  if (form.after.trim()) params.set("after", form.after.trim());
  if (form.limit !== 20) params.set("limit", String(form.limit));
  if (form.weights) {
    for (const [field, value] of Object.entries(form.weights)) {
      if (value !== undefined) params.set(WEIGHT_PREFIX + field, String(value));
    }
  }
  return params.toString();
}

export function formFromQueryString(query: string): QueryFormState {
  const params = new URLSearchParams(query.startsWith("?") ? query.slice(1) : query);
  const form = emptyForm();
  for (const field of TEXT_FIELDS) {
    const value = params.get(field);
    if (value !== null) form[field] = value;
  }
  form.before = params.get("before") ?? "";
  form.after = params.get("after") ?? "";
  const limit = params.get("limit");
  if (limit !== null && Number.isInteger(Number(limit)) && Number(limit) >= 1) {
    form.limit = Number(limit);
  }
  const weights: Partial<Record<FieldName, number>> = {};
  for (const field of WEIGHT_FIELDS) {
    const raw = params.get(WEIGHT_PREFIX + field);
    if (raw !== null && !Number.isNaN(Number(raw))) {
      weights[field] = Number(raw);
    }
  }
  if (Object.keys(weights).length > 0) form.weights = weights;
  return form;
}
