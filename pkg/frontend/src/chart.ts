// Minimal canvas line chart: one series, optional shaded spans on the x
// axis (lesson windows) and a handful of ticks. No dependencies.

export interface ChartOptions {
  spans?: [number, number][];
  yMax?: number;
  color?: string;
  axes?: boolean; // false gives a bare sparkline
}

const PAD = { left: 44, right: 10, top: 10, bottom: 22 };

export function drawChart(
  canvas: HTMLCanvasElement,
  xs: number[],
  ys: number[],
  options: ChartOptions = {},
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx || xs.length === 0 || xs.length !== ys.length) return;

  const axes = options.axes !== false;
  const w = canvas.width;
  const h = canvas.height;
  const left = axes ? PAD.left : 2;
  const right = w - (axes ? PAD.right : 2);
  const top = axes ? PAD.top : 2;
  const bottom = h - (axes ? PAD.bottom : 2);

  const x0 = xs[0];
  const x1 = xs[xs.length - 1];
  const xSpan = x1 - x0 || 1;
  const yMax = options.yMax ?? (Math.max(...ys) * 1.05 || 1);
  const toX = (x: number) => left + ((x - x0) / xSpan) * (right - left);
  const toY = (y: number) => bottom - (y / yMax) * (bottom - top);

  ctx.clearRect(0, 0, w, h);

  for (const [a, b] of options.spans ?? []) {
    ctx.fillStyle = "rgba(90, 140, 220, 0.12)";
    const xa = Math.max(toX(a), left);
    const xb = Math.min(toX(b), right);
    if (xb > xa) ctx.fillRect(xa, top, xb - xa, bottom - top);
  }

  if (axes) {
    ctx.strokeStyle = "#99a";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(left, top);
    ctx.lineTo(left, bottom);
    ctx.lineTo(right, bottom);
    ctx.stroke();

    ctx.fillStyle = "#667";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "right";
    for (let i = 0; i <= 4; i++) {
      const y = (yMax * i) / 4;
      ctx.fillText(y.toFixed(y >= 10 ? 0 : 2), left - 4, toY(y) + 3);
    }
    ctx.textAlign = "center";
    for (let i = 0; i <= 4; i++) {
      const x = x0 + (xSpan * i) / 4;
      ctx.fillText(x.toFixed(0), toX(x), bottom + 14);
    }
  }

  // decimate long series to roughly one point per pixel
  const stride = Math.max(1, Math.floor(xs.length / (right - left)));
  ctx.strokeStyle = options.color ?? "#2a6fdb";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.moveTo(toX(xs[0]), toY(ys[0]));
  for (let i = stride; i < xs.length; i += stride) {
    ctx.lineTo(toX(xs[i]), toY(ys[i]));
  }
  ctx.lineTo(toX(xs[xs.length - 1]), toY(ys[ys.length - 1]));
  ctx.stroke();
}
