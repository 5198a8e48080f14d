import { CurveResponse } from "./types.js";

export interface Extent {
  min: number;
  max: number;
}

export function seriesExtent(values: readonly number[]): Extent {
  if (values.length === 0) {
    throw new Error("cannot take the extent of an empty series");
  }
  let min = values[0];
  let max = values[0];
  for (const value of values) {
    if (value < min) {
      min = value;
    }
    if (value > max) {
      max = value;
    }
  }
  return { min, max };
}

export interface CurveExtents {
  voltage: Extent;
  current: Extent;
  power: Extent;
}

// Axis bounds are the exact data extrema, no "nice number" rounding:
// every number on screen comes verbatim from the service response.
export function curveExtents(curve: CurveResponse): CurveExtents {
  return {
    voltage: seriesExtent(curve.voltage_v),
    current: seriesExtent(curve.current_a),
    power: seriesExtent(curve.power_w),
  };
}

export function scaleLinear(
  domain: Extent,
  range: Extent,
): (value: number) => number {
  const span = domain.max - domain.min;
  const slope = span === 0 ? 0 : (range.max - range.min) / span;
  return (value) => range.min + (value - domain.min) * slope;
}

export interface ChartOptions {
  xLabel: string;
  yLabel: string;
  stroke: string;
}

const MARGIN = { top: 14, right: 14, bottom: 40, left: 58 };
const TICKS = 5;

/**
 * Minimal canvas line chart: axes, a handful of ticks, the polyline,
 * and an optional marker with dashed guides (used for the MPP).
 */
export class LineChart {
  private readonly ctx: CanvasRenderingContext2D;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly options: ChartOptions,
  ) {
    const ctx = canvas.getContext("2d");
    if (ctx === null) {
      throw new Error("canvas 2d context unavailable");
    }
    this.ctx = ctx;
  }

  render(
    xs: readonly number[],
    ys: readonly number[],
    xExtent: Extent,
    yExtent: Extent,
    marker?: { x: number; y: number },
  ): void {
    const { width, height } = this.canvas;
    const left = MARGIN.left;
    const right = width - MARGIN.right;
    const top = MARGIN.top;
    const bottom = height - MARGIN.bottom;
    const toPx = scaleLinear(xExtent, { min: left, max: right });
    const toPy = scaleLinear(yExtent, { min: bottom, max: top });
    const ctx = this.ctx;

    ctx.clearRect(0, 0, width, height);
    ctx.font = "11px system-ui, sans-serif";

    ctx.strokeStyle = "#d4d4d8";
    ctx.fillStyle = "#52525b";
    ctx.lineWidth = 1;
    for (let i = 0; i <= TICKS; i++) {
      const frac = i / TICKS;
      const xVal = xExtent.min + frac * (xExtent.max - xExtent.min);
      const yVal = yExtent.min + frac * (yExtent.max - yExtent.min);
      const px = toPx(xVal);
      const py = toPy(yVal);
      ctx.beginPath();
      ctx.moveTo(px, top);
      ctx.lineTo(px, bottom);
      ctx.moveTo(left, py);
      ctx.lineTo(right, py);
      ctx.stroke();
      ctx.textAlign = "center";
      ctx.fillText(formatTick(xVal), px, bottom + 14);
      ctx.textAlign = "right";
      ctx.fillText(formatTick(yVal), left - 6, py + 4);
    }

    ctx.strokeStyle = "#3f3f46";
    ctx.beginPath();
    ctx.moveTo(left, top);
    ctx.lineTo(left, bottom);
    ctx.lineTo(right, bottom);
    ctx.stroke();

    ctx.fillStyle = "#18181b";
    ctx.textAlign = "center";
    ctx.fillText(this.options.xLabel, (left + right) / 2, height - 6);
    ctx.save();
    ctx.translate(12, (top + bottom) / 2);
    ctx.rotate(-Math.PI / 2);
    ctx.fillText(this.options.yLabel, 0, 0);
    ctx.restore();

    ctx.strokeStyle = this.options.stroke;
    ctx.lineWidth = 2;
    ctx.beginPath();
    for (let i = 0; i < xs.length; i++) {
      const px = toPx(xs[i]);
      const py = toPy(ys[i]);
      if (i === 0) {
        ctx.moveTo(px, py);
      } else {
        ctx.lineTo(px, py);
      }
    }
    ctx.stroke();

    if (marker !== undefined) {
      const mx = toPx(marker.x);
      const my = toPy(marker.y);
      ctx.setLineDash([4, 4]);
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.moveTo(mx, bottom);
      ctx.lineTo(mx, my);
      ctx.lineTo(left, my);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = this.options.stroke;
      ctx.beginPath();
      ctx.arc(mx, my, 4, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

function formatTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 100) {
    return value.toFixed(0);
  }
  if (magnitude >= 1) {
    return String(Number(value.toFixed(2)));
  }
  return value.toPrecision(3);
}
