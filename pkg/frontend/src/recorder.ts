/** Microphone capture producing a 16-bit mono WAV blob at the captured rate.
 *
 * The Web Audio plumbing is isolated behind a CaptureStarter so the state
 * machine (idle -> recording -> recorded, elapsed ticks, max duration,
 * permission and support failures) is testable without a browser. When the
 * browser lacks capture APIs the starter factory returns null and the UI
 * falls back to file upload only.
 */

import { RecordingState } from "./types.js";
import { encodeWav16Mono, mergeChunks } from "./wav.js";

export interface CaptureHandle {
  sampleRate: number;
  stop(): void;
}

export type CaptureStarter = (onChunk: (chunk: Float32Array) => void) => Promise<CaptureHandle>;

export type RecorderEvent =
  | { kind: "state"; state: RecordingState }
  | { kind: "elapsed"; seconds: number }
  | { kind: "error"; reason: "permission-denied" | "unsupported" | "failed"; message: string };

export class Recorder {
  private chunks: Float32Array[] = [];
  private handle: CaptureHandle | null = null;
  private sampleRate = 0;
  private samples = 0;
  private state_: RecordingState = "idle";
  private blob_: Blob | null = null;

  constructor(
    private starter: CaptureStarter | null,
    private onEvent: (event: RecorderEvent) => void,
    private maxSeconds = 15,
  ) {}

  get state(): RecordingState {
    return this.state_;
  }

  /** The finished WAV blob, once state is "recorded". */
  get blob(): Blob | null {
    return this.blob_;
  }

  get elapsedSeconds(): number {
    return this.sampleRate > 0 ? this.samples / this.sampleRate : 0;
  }

  async start(): Promise<void> {
    if (this.state_ === "recording") return;
    if (!this.starter) {
      this.onEvent({
        kind: "error",
        reason: "unsupported",
        message: "recording is not supported here; upload a WAV file instead",
      });
      return;
    }
    this.chunks = [];
    this.samples = 0;
    this.blob_ = null;
    try {
      this.handle = await this.starter((chunk) => this.receive(chunk));
    } catch (error) {
      const denied = error instanceof Error && error.name === "NotAllowedError";
      this.onEvent({
        kind: "error",
        reason: denied ? "permission-denied" : "failed",
        message: denied
          ? "microphone access was denied; allow it in the browser, or upload a WAV file"
          : `could not start recording: ${error instanceof Error ? error.message : error}`,
      });
      return;
    }
    this.sampleRate = this.handle.sampleRate;
    this.setState("recording");
  }

  private receive(chunk: Float32Array): void {
    if (this.state_ !== "recording") return;
    this.chunks.push(chunk);
    this.samples += chunk.length;
    this.onEvent({ kind: "elapsed", seconds: this.elapsedSeconds });
    if (this.elapsedSeconds >= this.maxSeconds) {
      this.stop();
    }
  }

  /** Stop capturing and encode what was captured; returns the WAV blob. */
  stop(): Blob | null {
    if (this.state_ !== "recording") return this.blob_;
    this.handle?.stop();
    this.handle = null;
    const wav = encodeWav16Mono(mergeChunks(this.chunks), this.sampleRate);
    this.blob_ = new Blob([wav], { type: "audio/wav" });
    this.chunks = [];
    this.setState("recorded");
    return this.blob_;
  }

  reset(): void {
    this.handle?.stop();
    this.handle = null;
    this.chunks = [];
    this.samples = 0;
    this.blob_ = null;
    this.setState("idle");
  }

  private setState(state: RecordingState): void {
    this.state_ = state;
    this.onEvent({ kind: "state", state });
  }
}

/** Real browser capture via getUserMedia + Web Audio; null when unsupported. */
export function browserCaptureStarter(): CaptureStarter | null {
  if (typeof navigator === "undefined" || !navigator.mediaDevices?.getUserMedia) return null;
  const Ctx =
    (globalThis as { AudioContext?: typeof AudioContext }).AudioContext ??
    (globalThis as { webkitAudioContext?: typeof AudioContext }).webkitAudioContext;
  if (!Ctx) return null;
  return async (onChunk) => {
    const stream = await navigator.mediaDevices.getUserMedia({
      audio: { channelCount: 1, echoCancellation: true, noiseSuppression: true },
    });
    const context = new Ctx();
    const source = context.createMediaStreamSource(stream);
    const processor = context.createScriptProcessor(4096, 1, 1);
    processor.onaudioprocess = (event: AudioProcessingEvent) => {
      onChunk(new Float32Array(event.inputBuffer.getChannelData(0)));
    };
    source.connect(processor);
    processor.connect(context.destination);
    return {
      sampleRate: context.sampleRate,
      stop() {
        processor.disconnect();
        source.disconnect();
        for (const track of stream.getTracks()) track.stop();
        void context.close();
      },
    };
  };
}
