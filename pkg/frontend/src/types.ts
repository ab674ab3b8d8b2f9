// Wire shapes of the trainer service. Field names mirror the JSON payloads
// exactly; the fixture files under tests/fixtures pin them on both sides.

export type SessionStatus = "running" | "finished";
export type Visibility = "instructor" | "blind";

export interface ElementView {
  index: number;
  s: number;
  z?: number; // omitted in blind sessions
}

export interface Snapshot {
  id: string;
  status: SessionStatus;
  visibility: Visibility;
  clock: number;
  t_start: number;
  t_end: number;
  dt: number;
  n: number;
  windows: [number, number][];
  in_lesson: boolean;
  busy_until: number | null;
  active: number;
  auto_rate: number;
  elements: ElementView[];
  z_total?: number; // omitted in blind sessions
}

export interface PresentedEvent {
  t: number;
  element: number;
  s: number;
}

export interface RejectedControl {
  index: number;
  at: number;
  type: string;
  element?: number;
  rate?: number;
  code: string;
  reason: string;
}

export interface ProbeResult {
  index: number;
  at: number;
  t: number;
  element: number;
  z: number;
}

export interface AdvanceResults {
  presented: PresentedEvent[];
  rejected: RejectedControl[];
  probes: ProbeResult[];
}

export interface AdvanceResponse extends Snapshot {
  results: AdvanceResults;
}

export interface TrajectorySample {
  t: number;
  z_total: number;
  mean_tau: number;
  mean_gamma: number;
  active: number | null;
}

export interface ScoreReport {
  z_total: number;
  k: number;
  s: number[];
  n_presentations: number;
  trajectory: TrajectorySample[];
}

export interface ApiErrorBody {
  code: string;
  reason: string;
}

export type ControlMsg =
  | { type: "present"; at: number; element: number }
  | { type: "set_auto_rate"; at: number; rate: number }
  | { type: "pause_auto"; at: number }
  | { type: "probe"; at: number; element: number };

function isNum(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

export function isSnapshot(v: unknown): v is Snapshot {
  if (typeof v !== "object" || v === null) return false;
  const s = v as Record<string, unknown>;
  return (
    typeof s.id === "string" &&
    (s.status === "running" || s.status === "finished") &&
    (s.visibility === "instructor" || s.visibility === "blind") &&
    isNum(s.clock) &&
    isNum(s.t_end) &&
    isNum(s.n) &&
    typeof s.in_lesson === "boolean" &&
    (s.busy_until === null || isNum(s.busy_until)) &&
    Array.isArray(s.windows) &&
    Array.isArray(s.elements) &&
    (s.elements as unknown[]).every(
      (e) =>
        typeof e === "object" &&
        e !== null &&
        isNum((e as ElementView).index) &&
        isNum((e as ElementView).s),
    )
  );
}

export function isAdvanceResponse(v: unknown): v is AdvanceResponse {
  if (!isSnapshot(v)) return false;
  const r = (v as AdvanceResponse).results;
  return (
    typeof r === "object" &&
    r !== null &&
    Array.isArray(r.presented) &&
    Array.isArray(r.rejected) &&
    Array.isArray(r.probes)
  );
}

export function isScoreReport(v: unknown): v is ScoreReport {
  if (typeof v !== "object" || v === null) return false;
  const r = v as Record<string, unknown>;
  return (
    isNum(r.z_total) &&
    isNum(r.k) &&
    Array.isArray(r.s) &&
    isNum(r.n_presentations) &&
    Array.isArray(r.trajectory)
  );
}
