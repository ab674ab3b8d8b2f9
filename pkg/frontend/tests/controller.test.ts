import { describe, expect, it, vi } from "vitest";

import { ApiError, TrainerApi } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import type { ControllerEvents } from "../src/controller.js";
import type {
  AdvanceResponse,
  ControlMsg,
  Snapshot,
} from "../src/types.js";

function snapshot(patch: Partial<Snapshot> = {}): Snapshot {
  return {
    id: "s1",
    status: "running",
    visibility: "instructor",
    clock: 0,
    t_start: 0,
    t_end: 64,
    dt: 0.015625,
    n: 3,
    windows: [[0, 64]],
    in_lesson: true,
    busy_until: null,
    active: 0,
    auto_rate: 0,
    elements: [
      { index: 1, s: 0, z: 0 },
      { index: 2, s: 0, z: 0 },
      { index: 3, s: 0, z: 0 },
    ],
    z_total: 0,
    ...patch,
  };
}

function advanceResponse(patch: Partial<Snapshot> = {}): AdvanceResponse {
  return {
    ...snapshot(patch),
    results: { presented: [], rejected: [], probes: [] },
  };
}

// In-memory stand-in for the HTTP client; records every advance payload.
class FakeApi extends TrainerApi {
  calls: { duration: number; controls: ControlMsg[] }[] = [];
  clock = 0;
  failNext: Error | null = null;

  constructor() {
    super("http://fake");
  }

  override async createSession(): Promise<string> {
    return "s1";
  }

  override async state(): Promise<Snapshot> {
    return snapshot({ clock: this.clock });
  }

  override async advance(
    _id: string,
    duration: number,
    controls: ControlMsg[],
  ): Promise<AdvanceResponse> {
    if (this.failNext) {
      const err = this.failNext;
      this.failNext = null;
      throw err;
    }
    this.calls.push({ duration, controls });
    this.clock += duration;
    return advanceResponse({ clock: this.clock });
  }
}

async function makeController(events: ControllerEvents = {}) {
  const api = new FakeApi();
  const controller = new SessionController(api, events, {
    tickMs: 500,
    timers: { setInterval: () => 0, clearInterval: () => {} },
  });
  await controller.create({}, "instructor");
  return { api, controller };
}

describe("control batching", () => {
  it("a queued present appears in the next advance payload at the batch clock", async () => {
    const { api, controller } = await makeController();
    controller.queuePresent(2);
    await controller.step(1.0);
    expect(api.calls).toHaveLength(1);
    expect(api.calls[0].controls).toEqual([
      { type: "present", at: 0, element: 2 },
    ]);
    expect(controller.pending).toHaveLength(0);
  });

  it("slider movement collapses to a single set_auto_rate", async () => {
    const { api, controller } = await makeController();
    controller.setAutoRate(0.3);
    controller.setAutoRate(0.7);
    controller.setAutoRate(1.1);
    await controller.step(1.0);
    const rates = api.calls[0].controls.filter(
      (c) => c.type === "set_auto_rate",
    );
    expect(rates).toEqual([{ type: "set_auto_rate", at: 0, rate: 1.1 }]);
  });

  it("pause overrides a queued rate", async () => {
    const { api, controller } = await makeController();
    controller.setAutoRate(0.5);
    controller.pauseAuto();
    await controller.step(1.0);
    expect(api.calls[0].controls).toEqual([{ type: "pause_auto", at: 0 }]);
  });

  it("timestamps follow the moving clock", async () => {
    const { api, controller } = await makeController();
    await controller.step(2.5);
    controller.queueProbe(1);
    await controller.step(1.0);
    expect(api.calls[1].controls).toEqual([
      { type: "probe", at: 2.5, element: 1 },
    ]);
  });
});

describe("pacing", () => {
  it("a tick advances by speed * tick length", async () => {
    const { api, controller } = await makeController();
    controller.play(2); // 2 UEV per real second, ticks of 500 ms
    await controller.tick();
    expect(api.calls[0].duration).toBe(1.0);
  });

  it("ticks while paused do nothing", async () => {
    const { api, controller } = await makeController();
    await controller.tick();
    expect(api.calls).toHaveLength(0);
  });

  it("at most one advance is in flight", async () => {
    const { api, controller } = await makeController();
    const first = controller.step(1.0);
    const second = controller.step(1.0); // rejected: first still pending
    expect(await Promise.all([first, second])).toEqual([true, false]);
    expect(api.calls).toHaveLength(1);
  });
});

describe("failure handling", () => {
  it("network failure preserves the batch and backs off", async () => {
    const onNetwork = vi.fn();
    const { api, controller } = await makeController({ onNetwork });
    api.failNext = new TypeError("fetch failed");
    controller.queuePresent(1);
    expect(await controller.step(1.0)).toBe(false);
    expect(onNetwork).toHaveBeenCalledWith(true);
    expect(controller.pending).toEqual([{ kind: "present", element: 1 }]);

    // backoff: the next paced tick is suppressed
    controller.play(1);
    await controller.tick();
    expect(api.calls).toHaveLength(0);

    // a manual step retries immediately and clears the failure state
    expect(await controller.step(1.0)).toBe(true);
    expect(api.calls[0].controls).toEqual([
      { type: "present", at: 0, element: 1 },
    ]);
    expect(onNetwork).toHaveBeenLastCalledWith(false);
  });

  it("a service rejection surfaces as an error and drops the batch", async () => {
    const onError = vi.fn();
    const { api, controller } = await makeController({ onError });
    api.failNext = new ApiError(400, "invalid_control", "bad timestamp");
    controller.queuePresent(1);
    expect(await controller.step(1.0)).toBe(false);
    expect(onError).toHaveBeenCalledWith("invalid_control: bad timestamp");
    expect(controller.pending).toHaveLength(0); // replay would fail again
  });

  it("malformed snapshots raise the error event instead of rendering", async () => {
    const onError = vi.fn();
    const api = new FakeApi();
    api.state = async () => ({ nonsense: true }) as unknown as Snapshot;
    const controller = new SessionController(api, { onError });
    await controller.create({}, "instructor");
    expect(onError).toHaveBeenCalledWith("malformed snapshot from the service");
    expect(controller.snapshot).toBeNull();
  });
});

describe("busy state", () => {
  it("reflects busy_until from the latest snapshot", async () => {
    const { api, controller } = await makeController();
    expect(controller.isBusy()).toBe(false);
    api.advance = async () => advanceResponse({ clock: 1, busy_until: 2.2 });
    await controller.step(1.0);
    expect(controller.isBusy()).toBe(true);
    api.advance = async () => advanceResponse({ clock: 3, busy_until: null });
    await controller.step(2.0);
    expect(controller.isBusy()).toBe(false);
  });
});
