import { drawChart } from "./chart.js";
import type {
  ProbeResult,
  RejectedControl,
  ScoreReport,
  Snapshot,
} from "./types.js";

export interface ViewModel {
  snapshot: Snapshot | null;
  playing: boolean;
  uevPerSecond: number;
  pendingCount: number;
  report: ScoreReport | null;
  rejections: RejectedControl[];
  probes: Map<number, ProbeResult>; // latest probe per element
  history: { t: number[]; z: number[] };
  networkDown: boolean;
  error: string | null;
}

export interface Handlers {
  onPresent(element: number): void;
  onProbe(element: number): void;
  onAutoRate(rate: number): void;
  onPauseAuto(): void;
  onStep(): void;
  onPlayToggle(): void;
  onSpeed(uevPerSecond: number): void;
  onFinish(): void;
}

export function emptyView(): ViewModel {
  return {
    snapshot: null,
    playing: false,
    uevPerSecond: 1,
    pendingCount: 0,
    report: null,
    rejections: [],
    probes: new Map(),
    history: { t: [], z: [] },
    networkDown: false,
    error: null,
  };
}

// Present is inactive exactly when the latest snapshot says the learner is
// inside an effort interval, and once the session is over.
export function presentDisabled(snapshot: Snapshot): boolean {
  return (
    snapshot.status === "finished" ||
    (snapshot.busy_until !== null && snapshot.busy_until > snapshot.clock)
  );
}

function gradeOf(k: number): string {
  if (k >= 0.9) return "A";
  if (k >= 0.75) return "B";
  if (k >= 0.6) return "C";
  if (k >= 0.4) return "D";
  return "E";
}

function chip(id: string, cls: string, text: string): string {
  return `<span id="${id}" class="chip ${cls}">${text}</span>`;
}

function headerHtml(view: ViewModel, snap: Snapshot): string {
  const busy = snap.busy_until !== null && snap.busy_until > snap.clock;
  return `
    <div class="status-row">
      <span id="clock" class="clock">t = ${snap.clock.toFixed(2)} / ${snap.t_end.toFixed(0)} UEV</span>
      ${chip("status-chip", snap.status, snap.status)}
      ${chip("lesson-chip", snap.in_lesson ? "on" : "off", snap.in_lesson ? "lesson" : "break")}
      ${busy ? chip("busy-chip", "busy", `busy until ${snap.busy_until!.toFixed(2)}`) : ""}
      ${snap.auto_rate > 0 ? chip("auto-chip", "on", `auto ${snap.auto_rate.toFixed(2)}/UEV`) : ""}
      ${view.pendingCount > 0 ? chip("pending-chip", "queued", `${view.pendingCount} queued`) : ""}
    </div>`;
}

function elementsHtml(view: ViewModel, snap: Snapshot): string {
  const blind = snap.visibility === "blind";
  const disabled = presentDisabled(snap) ? "disabled" : "";
  const cells = snap.elements
    .map((el) => {
      const probe = view.probes.get(el.index);
      const level = blind
        ? probe
          ? `<div class="probe-value">probe: ${probe.z.toFixed(3)} <small>at t=${probe.t.toFixed(1)}</small></div>`
          : `<div class="probe-value dim">hidden</div>`
        : `<div class="bar-track"><div class="bar" style="height:${((el.z ?? 0) * 100).toFixed(1)}%"></div></div>
           <div class="z-label">${(el.z ?? 0).toFixed(3)}</div>`;
      const active = snap.active === el.index ? " active" : "";
      return `
        <div class="element-cell${active}" data-element="${el.index}">
          <div class="element-name">#${el.index}</div>
          ${level}
          <div class="tally">${el.s}×</div>
          <button class="present" data-element="${el.index}" ${disabled}>Present</button>
          ${blind ? `<button class="probe" data-element="${el.index}">Probe</button>` : ""}
        </div>`;
    })
    .join("");
  return `<div id="elements" class="element-grid">${cells}</div>`;
}

function controlsHtml(view: ViewModel, snap: Snapshot): string {
  const over = snap.status === "finished";
  const dis = over ? "disabled" : "";
  return `
    <div class="controls-row">
      <label>auto rate
        <input id="auto-rate" type="range" min="0" max="2" step="0.05"
               value="${snap.auto_rate}" ${dis}>
        <span id="auto-rate-value">${snap.auto_rate.toFixed(2)}</span>
      </label>
      <button id="pause-auto" ${snap.auto_rate > 0 && !over ? "" : "disabled"}>Pause auto</button>
      <span class="spacer"></span>
      <button id="step-btn" ${dis}>Step 1 UEV</button>
      <button id="play-btn" ${dis}>${view.playing ? "Pause" : "Play"}</button>
      <label>speed
        <select id="speed" ${dis}>
          ${[0.5, 1, 2, 5, 10]
            .map(
              (v) =>
                `<option value="${v}" ${v === view.uevPerSecond ? "selected" : ""}>${v} UEV/s</option>`,
            )
            .join("")}
        </select>
      </label>
      <button id="finish-btn" ${dis}>Finish</button>
    </div>`;
}

function rejectionsHtml(view: ViewModel): string {
  if (view.rejections.length === 0) return "";
  const items = view.rejections
    .slice(-6)
    .map(
      (r) =>
        `<li>${r.type}${r.element !== undefined ? ` #${r.element}` : ""} at t=${r.at.toFixed(2)}: ${r.reason}</li>`,
    )
    .join("");
  return `<ul id="rejections" class="rejections">${items}</ul>`;
}

function reportHtml(report: ScoreReport): string {
  return `
    <div id="report" class="report" data-z-total="${String(report.z_total)}">
      <h2>Session report</h2>
      <div class="report-stats">
        <div><b>Z_total</b> ${report.z_total.toFixed(4)}</div>
        <div><b>K</b> ${report.k.toFixed(4)}</div>
        <div><b>grade</b> ${gradeOf(report.k)}</div>
        <div><b>presentations</b> ${report.n_presentations}</div>
      </div>
      <canvas id="report-chart" width="640" height="240"></canvas>
    </div>`;
}

export function render(
  root: HTMLElement,
  view: ViewModel,
  handlers: Handlers,
): void {
  const snap = view.snapshot;
  const banners = `
    ${view.error ? `<div id="banner" class="banner error">${view.error}</div>` : ""}
    ${view.networkDown ? `<div id="net-banner" class="banner network">service unreachable, retrying with queued controls kept</div>` : ""}`;

  if (snap === null) {
    root.innerHTML = banners;
    return;
  }

  root.innerHTML = `
    ${banners}
    ${headerHtml(view, snap)}
    ${elementsHtml(view, snap)}
    ${controlsHtml(view, snap)}
    ${view.snapshot?.visibility === "instructor" ? `<canvas id="spark" width="640" height="60"></canvas>` : ""}
    ${rejectionsHtml(view)}
    ${view.report ? reportHtml(view.report) : ""}
  `;

  root.querySelectorAll<HTMLButtonElement>("button.present").forEach((btn) =>
    btn.addEventListener("click", () =>
      handlers.onPresent(Number(btn.dataset.element)),
    ),
  );
  root.querySelectorAll<HTMLButtonElement>("button.probe").forEach((btn) =>
    btn.addEventListener("click", () =>
      handlers.onProbe(Number(btn.dataset.element)),
    ),
  );

  const rate = root.querySelector<HTMLInputElement>("#auto-rate");
  rate?.addEventListener("change", () => handlers.onAutoRate(Number(rate.value)));
  root
    .querySelector("#pause-auto")
    ?.addEventListener("click", () => handlers.onPauseAuto());
  root
    .querySelector("#step-btn")
    ?.addEventListener("click", () => handlers.onStep());
  root
    .querySelector("#play-btn")
    ?.addEventListener("click", () => handlers.onPlayToggle());
  const speed = root.querySelector<HTMLSelectElement>("#speed");
  speed?.addEventListener("change", () => handlers.onSpeed(Number(speed.value)));
  root
    .querySelector("#finish-btn")
    ?.addEventListener("click", () => handlers.onFinish());

  const spark = root.querySelector<HTMLCanvasElement>("#spark");
  if (spark && view.history.t.length > 1) {
    drawChart(spark, view.history.t, view.history.z, {
      axes: false,
      yMax: snap.n,
      spans: snap.windows,
    });
  }
  const reportChart = root.querySelector<HTMLCanvasElement>("#report-chart");
  if (reportChart && view.report) {
    drawChart(
      reportChart,
      view.report.trajectory.map((p) => p.t),
      view.report.trajectory.map((p) => p.z_total),
      { spans: snap.windows, yMax: snap.n },
    );
  }
}
