// @vitest-environment jsdom
//
// End-to-end: a blind session driven through the UI's control loop against
// the live service. Scripted browser actions present each of five elements
// twice; Present buttons must be disabled throughout every effort interval,
// and the report's Z_total must equal the score endpoint's value exactly.
import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TrainerApi } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { emptyView, render } from "../src/render.js";
import type { Handlers, ViewModel } from "../src/render.js";
import type { ScoreReport } from "../src/types.js";

const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

let service: ChildProcess;

async function serviceUp(): Promise<boolean> {
  try {
    const res = await fetch(`${BASE}/sessions/probe/state`);
    return res.status === 404;
  } catch {
    return false;
  }
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "forgetsim.cli", "serve", "--port", String(PORT)],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  for (let i = 0; i < 100; i++) {
    if (await serviceUp()) return;
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not come up");
});

afterAll(() => {
  service?.kill();
});

describe("blind session through the UI control loop", () => {
  it("presents 5 elements twice, stays disabled while busy, and reports the exact score", async () => {
    document.body.innerHTML = `<div id="app"></div>`;
    const root = document.getElementById("app")!;

    const api = new TrainerApi(BASE);
    const view: ViewModel = emptyView();
    let rejectedCount = 0;

    const controller = new SessionController(api, {
      onState: () => redraw(),
      onResults: (results) => {
        rejectedCount += results.rejected.length;
      },
      onReport: () => redraw(),
    });

    const handlers: Handlers = {
      onPresent: (element) => {
        controller.queuePresent(element);
        redraw();
      },
      onProbe: (element) => controller.queueProbe(element),
      onAutoRate: (rate) => controller.setAutoRate(rate),
      onPauseAuto: () => controller.pauseAuto(),
      onStep: () => void controller.step(1.0),
      onPlayToggle: () => {},
      onSpeed: () => {},
      onFinish: () => void controller.finish(),
    };

    function redraw() {
      view.snapshot = controller.snapshot;
      view.report = controller.report;
      view.pendingCount = controller.pending.length;
      render(root, view, handlers);
    }

    function presentButtons(): HTMLButtonElement[] {
      return Array.from(
        root.querySelectorAll<HTMLButtonElement>("button.present"),
      );
    }

    await controller.create(
      {
        n: 5,
        dt: 0.015625,
        t_start: 0.0,
        t_end: 64.0,
        forgetting: { gamma0: 0.01, beta: 2.0 },
        effort: { tau_inf: 0.5, a: 1.0, b: 3.0 },
        windows: [[0.0, 64.0]],
        busy: "freeze_active",
        seed: 11,
      },
      "blind",
    );
    redraw();
    expect(presentButtons()).toHaveLength(5);
    expect(root.querySelectorAll(".bar")).toHaveLength(0); // blind: no levels

    // the scripted teacher: each of the five elements, twice over
    let busyObservations = 0;
    for (let round = 0; round < 2; round++) {
      for (let element = 1; element <= 5; element++) {
        while (controller.isBusy()) {
          // every mid-effort snapshot must render all Present buttons inert
          presentButtons().forEach((b) => expect(b.disabled).toBe(true));
          busyObservations += 1;
          await controller.step(0.5);
          redraw();
        }
        const button = root.querySelector<HTMLButtonElement>(
          `button.present[data-element="${element}"]`,
        )!;
        expect(button.disabled).toBe(false);
        button.click(); // queues the control
        await controller.step(0.5); // carries it; effort starts
        redraw();
        expect(controller.isBusy()).toBe(true);
        presentButtons().forEach((b) => expect(b.disabled).toBe(true));
        busyObservations += 1;
      }
    }
    expect(busyObservations).toBeGreaterThanOrEqual(10);
    expect(rejectedCount).toBe(0); // clicks only ever happened while idle

    await controller.finish();
    redraw();

    const panel = root.querySelector<HTMLElement>("#report")!;
    expect(panel).not.toBeNull();
    const reportedZ = Number(panel.dataset.zTotal);

    // the report must match an independent read of the score endpoint
    const direct = (await (
      await fetch(`${BASE}/sessions/${controller.sessionId}/score`)
    ).json()) as ScoreReport;
    expect(reportedZ).toBe(direct.z_total); // exact, not approximate
    expect(direct.s).toEqual([2, 2, 2, 2, 2]);
    expect(direct.n_presentations).toBe(10);
  });
});
