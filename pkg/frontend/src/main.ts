import { ApiError, TrainerApi } from "./api.js";
import { SessionController } from "./controller.js";
import { emptyView, render } from "./render.js";
import type { Handlers } from "./render.js";
import type { Visibility } from "./types.js";

const form = document.getElementById("setup") as HTMLFormElement;
const app = document.getElementById("app") as HTMLElement;

const api = new TrainerApi("");
const view = emptyView();
let controller: SessionController | null = null;

function redraw(): void {
  if (controller) {
    view.snapshot = controller.snapshot;
    view.report = controller.report;
    view.playing = controller.playing;
    view.pendingCount = controller.pending.length;
  }
  render(app, view, handlers);
}

const handlers: Handlers = {
  onPresent: (element) => {
    controller?.queuePresent(element);
    redraw();
  },
  onProbe: (element) => {
    controller?.queueProbe(element);
    redraw();
  },
  onAutoRate: (rate) => {
    controller?.setAutoRate(rate);
    redraw();
  },
  onPauseAuto: () => {
    controller?.pauseAuto();
    redraw();
  },
  onStep: () => void controller?.step(1.0),
  onPlayToggle: () => {
    if (!controller) return;
    if (controller.playing) controller.pause();
    else controller.play(view.uevPerSecond);
    redraw();
  },
  onSpeed: (uevPerSecond) => {
    view.uevPerSecond = uevPerSecond;
    if (controller) controller.uevPerSecond = uevPerSecond;
    redraw();
  },
  onFinish: () => {
    void controller?.finish().catch((err) => {
      view.error = err instanceof Error ? err.message : String(err);
      redraw();
    });
  },
};

function startSession(): void {
  const f = new FormData(form);
  const num = (key: string) => Number(f.get(key));
  const config = {
    n: num("n"),
    dt: num("dt"),
    t_start: 0.0,
    t_end: num("t_end"),
    forgetting: { gamma0: num("gamma0"), beta: num("beta") },
    effort: { tau_inf: num("tau_inf"), a: num("a"), b: num("b") },
    windows: [[0.0, num("lesson_end")]],
    busy: String(f.get("busy")),
    seed: num("seed"),
  };
  const visibility = String(f.get("visibility")) as Visibility;

  controller = new SessionController(api, {
    onState: (snap) => {
      view.error = null;
      if (snap.z_total !== undefined) {
        const h = view.history;
        if (h.t.length === 0 || snap.clock > h.t[h.t.length - 1]) {
          h.t.push(snap.clock);
          h.z.push(snap.z_total);
        }
      }
      redraw();
    },
    onResults: (results) => {
      view.rejections.push(...results.rejected);
      for (const probe of results.probes) view.probes.set(probe.element, probe);
      if (results.rejected.length > 0 || results.probes.length > 0) redraw();
    },
    onReport: () => redraw(),
    onError: (message) => {
      view.error = message;
      redraw();
    },
    onNetwork: (down) => {
      view.networkDown = down;
      redraw();
    },
  });

  controller
    .create(config, visibility)
    .then(() => {
      form.hidden = true;
    })
    .catch((err) => {
      view.error =
        err instanceof ApiError ? err.reason : "service unreachable";
      redraw();
    });
}

form.addEventListener("submit", (e) => {
  e.preventDefault();
  startSession();
});
