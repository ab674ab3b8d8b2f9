import { ApiError, TrainerApi } from "./api.js";
import {
  isAdvanceResponse,
  isScoreReport,
  isSnapshot,
} from "./types.js";
import type {
  AdvanceResults,
  ControlMsg,
  ScoreReport,
  Snapshot,
  Visibility,
} from "./types.js";

// Locally queued user actions. Timestamps are assigned when the batch is
// sent: every control goes out at the clock of the advance that carries it.
export type PendingControl =
  | { kind: "present"; element: number }
  | { kind: "probe"; element: number }
  | { kind: "set_auto_rate"; rate: number }
  | { kind: "pause_auto" };

export interface ControllerEvents {
  onState?(snapshot: Snapshot): void;
  onResults?(results: AdvanceResults): void;
  onReport?(report: ScoreReport): void;
  onError?(message: string): void;
  onNetwork?(down: boolean): void;
}

export interface ControllerOptions {
  tickMs?: number;
  timers?: {
    setInterval(cb: () => void, ms: number): unknown;
    clearInterval(handle: unknown): void;
  };
}

const BACKOFF_BASE_MS = 500;
const BACKOFF_CAP_MS = 8000;

// Steers one live session: batches queued controls into advance calls at the
// chosen pacing. At most one advance is in flight; ticks that land while a
// call is pending are skipped rather than piled up.
export class SessionController {
  snapshot: Snapshot | null = null;
  report: ScoreReport | null = null;
  pending: PendingControl[] = [];
  playing = false;
  uevPerSecond = 1;

  private id: string | null = null;
  private inFlight = false;
  private failures = 0;
  private retryAt = 0;
  private timer: unknown = null;
  private readonly tickMs: number;
  private readonly timers: Required<ControllerOptions>["timers"];

  constructor(
    private readonly api: TrainerApi,
    private readonly events: ControllerEvents = {},
    options: ControllerOptions = {},
  ) {
    this.tickMs = options.tickMs ?? 250;
    this.timers = options.timers ?? {
      setInterval: (cb, ms) => setInterval(cb, ms),
      clearInterval: (handle) => clearInterval(handle as never),
    };
  }

  async create(
    config: Record<string, unknown>,
    visibility: Visibility,
  ): Promise<void> {
    this.id = await this.api.createSession(config, visibility);
    const snap = await this.api.state(this.id);
    this.acceptSnapshot(snap);
  }

  get sessionId(): string | null {
    return this.id;
  }

  get finished(): boolean {
    return this.snapshot !== null && this.snapshot.status === "finished";
  }

  isBusy(): boolean {
    const s = this.snapshot;
    return s !== null && s.busy_until !== null && s.busy_until > s.clock;
  }

  queuePresent(element: number): void {
    if (this.finished) return;
    this.pending.push({ kind: "present", element });
  }

  queueProbe(element: number): void {
    if (this.finished) return;
    this.pending.push({ kind: "probe", element });
  }

  // The slider may move many times between ticks; only the latest value is
  // sent, as a single control.
  setAutoRate(rate: number): void {
    if (this.finished) return;
    this.pending = this.pending.filter(
      (p) => p.kind !== "set_auto_rate" && p.kind !== "pause_auto",
    );
    this.pending.push({ kind: "set_auto_rate", rate });
  }

  pauseAuto(): void {
    if (this.finished) return;
    this.pending = this.pending.filter(
      (p) => p.kind !== "set_auto_rate" && p.kind !== "pause_auto",
    );
    this.pending.push({ kind: "pause_auto" });
  }

  async step(duration: number): Promise<boolean> {
    if (this.id === null || this.snapshot === null) return false;
    if (this.inFlight || this.finished) return false;

    const at = this.snapshot.clock;
    const batch = this.pending;
    this.pending = [];
    const controls: ControlMsg[] = batch.map((p) => {
      switch (p.kind) {
        case "present":
          return { type: "present", at, element: p.element };
        case "probe":
          return { type: "probe", at, element: p.element };
        case "set_auto_rate":
          return { type: "set_auto_rate", at, rate: p.rate };
        case "pause_auto":
          return { type: "pause_auto", at };
      }
    });

    this.inFlight = true;
    try {
      const resp = await this.api.advance(this.id, duration, controls);
      if (!isAdvanceResponse(resp)) {
        this.events.onError?.("malformed advance response");
        return false;
      }
      this.noteSuccess();
      this.acceptSnapshot(resp);
      this.events.onResults?.(resp.results);
      if (this.finished) this.pause();
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        // the service refused the batch; replaying it would refuse again
        this.events.onError?.(err.message);
        return false;
      }
      // network failure: keep the batch, back off, let pacing retry
      this.pending = batch.concat(this.pending);
      this.noteFailure();
      return false;
    } finally {
      this.inFlight = false;
    }
  }

  play(uevPerSecond?: number): void {
    if (uevPerSecond !== undefined) this.uevPerSecond = uevPerSecond;
    if (this.playing) return;
    this.playing = true;
    this.timer = this.timers.setInterval(() => void this.tick(), this.tickMs);
  }

  pause(): void {
    this.playing = false;
    if (this.timer !== null) {
      this.timers.clearInterval(this.timer);
      this.timer = null;
    }
  }

  // One pacing beat: advance by the simulated time the beat covers.
  async tick(): Promise<void> {
    if (!this.playing || this.inFlight) return;
    if (Date.now() < this.retryAt) return;
    await this.step((this.uevPerSecond * this.tickMs) / 1000);
  }

  async finish(): Promise<void> {
    if (this.id === null) return;
    this.pause();
    const snap = await this.api.finish(this.id);
    this.acceptSnapshot(snap);
    const report = await this.api.score(this.id);
    if (!isScoreReport(report)) {
      this.events.onError?.("malformed score report");
      return;
    }
    this.report = report;
    this.events.onReport?.(report);
  }

  private acceptSnapshot(snap: unknown): void {
    if (!isSnapshot(snap)) {
      this.events.onError?.("malformed snapshot from the service");
      return;
    }
    this.snapshot = snap;
    this.events.onState?.(snap);
  }

  private noteSuccess(): void {
    if (this.failures > 0) this.events.onNetwork?.(false);
    this.failures = 0;
    this.retryAt = 0;
  }

  private noteFailure(): void {
    this.failures += 1;
    const backoff = Math.min(
      BACKOFF_BASE_MS * 2 ** (this.failures - 1),
      BACKOFF_CAP_MS,
    );
    this.retryAt = Date.now() + backoff;
    this.events.onNetwork?.(true);
  }
}
