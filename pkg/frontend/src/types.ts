/** Shapes of the search API responses and of the query form state. */

export const TEXT_FIELDS = ["lyrics", "title", "artist", "album", "genre"] as const;
export type TextField = (typeof TEXT_FIELDS)[number];
export type FieldName = TextField | "audio";

export interface SongSummary {
  id: number;
  title: string;
  artist: string;
  album: string | null;
  genre: string | null;
  release_date: string;
}

export interface SearchHit {
  song: SongSummary;
  final_score: number;
  breakdown: Record<string, number>;
}

export interface SearchResponse {
  results: SearchHit[];
  applied_weights: Record<string, number>;
  timing?: {
    per_field_ms: Record<string, number>;
    total_ms: number;
  };
}

export type RecordingState = "idle" | "recording" | "recorded";

/** Everything the form tracks; audio is a Blob so uploads and recordings look alike. */
export interface QueryFormState {
  lyrics: string;
  title: string;
  artist: string;
  album: string;
  genre: string;
  before: string;
  after: string;
  limit: number;
  /** Per-field weight overrides from the sliders; null means server defaults. */
  weights: Partial<Record<FieldName, number>> | null;
  audio: Blob | null;
  recording: RecordingState;
}

export function emptyForm(): QueryFormState {
  return {
    lyrics: "",
    title: "",
    artist: "",
    album: "",
    genre: "",
    before: "",
    after: "",
    limit: 20,
    weights: null,
    audio: null,
    recording: "idle",
  };
}
