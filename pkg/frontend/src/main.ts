/** Page wiring: form state, recording controls, submit, results rendering.
 *
 * Prior results stay on screen until a newer response replaces them;
 * errors land in the banner without touching the form or the results. A
 * new submit aborts the in-flight search (SearchClient guarantees one at
 * a time). The form populates itself from the URL query string, and every
 * submit writes the shareable state back with history.replaceState.
 */

import { ApiError, SearchClient } from "./api.js";
import { Recorder, browserCaptureStarter } from "./recorder.js";
import { renderErrorBanner, renderHint, renderResults } from "./render.js";
import { QueryFormState, TEXT_FIELDS, FieldName, emptyForm } from "./types.js";
import { formFromQueryString, formToQueryString } from "./urlstate.js";
import { canSubmit, validateForm } from "./validate.js";

const WEIGHTED_FIELDS: FieldName[] = [...TEXT_FIELDS, "audio"];

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function readForm(): QueryFormState {
  const form = emptyForm();
  for (const field of TEXT_FIELDS) {
    form[field] = element<HTMLInputElement>(`field-${field}`).value;
  }
  form.before = element<HTMLInputElement>("field-before").value;
  form.after = element<HTMLInputElement>("field-after").value;
  form.limit = Number(element<HTMLInputElement>("field-limit").value) || 20;
  if (element<HTMLInputElement>("weights-enabled").checked) {
    const weights: Partial<Record<FieldName, number>> = {};
    for (const field of WEIGHTED_FIELDS) {
      weights[field] = Number(element<HTMLInputElement>(`weight-${field}`).value);
    }
    form.weights = weights;
  }
  form.audio = currentAudio;
  form.recording = recorder.state;
  return form;
}

function writeForm(form: QueryFormState): void {
  for (const field of TEXT_FIELDS) {
    element<HTMLInputElement>(`field-${field}`).value = form[field];
  }
  element<HTMLInputElement>("field-before").value = form.before;
  element<HTMLInputElement>("field-after").value = form.after;
  element<HTMLInputElement>("field-limit").value = String(form.limit);
  if (form.weights) {
    element<HTMLInputElement>("weights-enabled").checked = true;
    for (const field of WEIGHTED_FIELDS) {
      const value = form.weights[field];
      if (value !== undefined) {
        element<HTMLInputElement>(`weight-${field}`).value = String(value);
      }
    }
  }
  refreshWeightLabels();
}

function refreshSubmitState(): void {
  const form = readForm();
  const result = validateForm(form);
  element<HTMLButtonElement>("submit").disabled = !result.ok;
  element<HTMLElement>("form-hint").innerHTML = result.ok
    ? ""
    : renderHint(result.problems[0]);
}

function refreshWeightLabels(): void {
  for (const field of WEIGHTED_FIELDS) {
    const value = element<HTMLInputElement>(`weight-${field}`).value;
    element<HTMLElement>(`weight-${field}-value`).textContent = value;
  }
  const enabled = element<HTMLInputElement>("weights-enabled").checked;
  element<HTMLElement>("weights-body").classList.toggle("disabled", !enabled);
}

function setBanner(message: string | null): void {
  element<HTMLElement>("banner").innerHTML = message ? renderErrorBanner(message) : "";
}

function setAudioStatus(text: string): void {
  element<HTMLElement>("audio-status").textContent = text;
}

const client = new SearchClient("");
let currentAudio: Blob | null = null;

const recorder = new Recorder(browserCaptureStarter(), (event) => {
  if (event.kind === "elapsed") {
    setAudioStatus(`recording… ${event.seconds.toFixed(1)} s`);
  } else if (event.kind === "state") {
    if (event.state === "recorded") {
      currentAudio = recorder.blob;
      setAudioStatus(`recorded ${recorder.elapsedSeconds.toFixed(1)} s clip`);
    } else if (event.state === "idle") {
      setAudioStatus("no audio selected");
    }
    refreshSubmitState();
  } else {
    setBanner(event.message);
    if (event.reason === "unsupported") {
      element<HTMLButtonElement>("record-start").disabled = true;
      element<HTMLButtonElement>("record-stop").disabled = true;
      setAudioStatus("recording unsupported; upload a WAV file");
    }
  }
});

async function submit(event: Event): Promise<void> {
  event.preventDefault();
  const form = readForm();
  if (!canSubmit(form)) return;
  history.replaceState(null, "", `?${formToQueryString(form)}`);
  setBanner(null);
  element<HTMLButtonElement>("submit").textContent = "searching…";
  try {
    const response = await client.search(form);
    element<HTMLElement>("results").innerHTML = renderResults(response);
  } catch (error) {
    if (error instanceof Error && error.name === "AbortError") return; // superseded
    const message =
      error instanceof ApiError ? error.message : `search failed: ${String(error)}`;
    setBanner(message); // form state and prior results stay untouched
  } finally {
    element<HTMLButtonElement>("submit").textContent = "search";
  }
}

function init(): void {
  writeForm(formFromQueryString(location.search));

  document.querySelectorAll("input").forEach((input) => {
    input.addEventListener("input", () => {
      refreshWeightLabels();
      refreshSubmitState();
    });
  });

  element<HTMLInputElement>("audio-file").addEventListener("change", (event) => {
    const files = (event.target as HTMLInputElement).files;
    recorder.reset();
    currentAudio = files && files.length > 0 ? files[0] : null;
    setAudioStatus(currentAudio ? `file: ${(files![0] as File).name}` : "no audio selected");
    refreshSubmitState();
  });

  element<HTMLButtonElement>("record-start").addEventListener("click", () => {
    element<HTMLInputElement>("audio-file").value = "";
    void recorder.start();
  });
  element<HTMLButtonElement>("record-stop").addEventListener("click", () => {
    recorder.stop();
  });
  element<HTMLButtonElement>("audio-clear").addEventListener("click", () => {
    recorder.reset();
    currentAudio = null;
    element<HTMLInputElement>("audio-file").value = "";
    refreshSubmitState();
  });

  element<HTMLFormElement>("query-form").addEventListener("submit", (e) => void submit(e));
  refreshSubmitState();
  refreshWeightLabels();
}

document.addEventListener("DOMContentLoaded", init);
