import { Column, SchemaError, sliceWindow, Table } from "./csv.js";
import { Raster, RGB } from "./raster.js";

export const NE_COLOR: RGB = [31, 119, 180];
export const WOOLSEY_COLOR: RGB = [214, 39, 40];
const SURGE_COLOR: RGB = [120, 120, 120];
const GRID: RGB = [225, 225, 225];
const FRAME: RGB = [40, 40, 40];

/** The five state panels plus the applied forces, top to bottom. */
export const PANELS: ReadonlyArray<{ channel: Column; label: string }> = [
  { channel: "z", label: "z [m]" },
  { channel: "theta", label: "θ [rad]" },
  { channel: "u", label: "u [m/s]" },
  { channel: "q", label: "q [rad/s]" },
  { channel: "x_p", label: "x_p [m]" },
  { channel: "tau_Xp", label: "τ [N]" },
];

const WIDTH = 960;
const LEFT = 88;
const RIGHT = 20;
const TOP = 18;
const PANEL_H = 120;
const VGAP = 16;
const BOTTOM = 44;

export function imageSize(): { width: number; height: number } {
  return {
    width: WIDTH,
    height: TOP + PANELS.length * (PANEL_H + VGAP) - VGAP + BOTTOM,
  };
}

export function niceTicks(lo: number, hi: number, target = 4):
    { ticks: number[]; step: number } {
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = 10 * mag;
  for (const m of [1, 2, 5]) {
    if (raw <= m * mag) { step = m * mag; break; }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9;
       v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return { ticks, step };
}

export function formatTick(v: number, step: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(1);
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step)));
  return v.toFixed(Math.min(decimals, 6));
}

interface Range { lo: number; hi: number }

function paddedRange(values: Float64Array[]): Range {
  let lo = Infinity, hi = -Infinity;
  for (const column of values) {
    for (const v of column) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo === hi) {
    const pad = Math.max(1e-6, Math.abs(lo) * 0.1);
    return { lo: lo - pad, hi: hi + pad };
  }
  const pad = (hi - lo) * 0.06;
  return { lo: lo - pad, hi: hi + pad };
}

export function plotComparison(ne: Table, woolsey: Table,
                               window?: [number, number]): Raster {
  if (window) {
    const [t0, t1] = window;
    if (!(t0 < t1)) {
      throw new SchemaError(`window must satisfy t0 < t1, got [${t0}, ${t1}]`);
    }
    ne = sliceWindow(ne, t0, t1);
    woolsey = sliceWindow(woolsey, t0, t1);
  }

  const { width, height } = imageSize();
  const img = new Raster(width, height);
  const plotW = width - LEFT - RIGHT;

  const tNe = ne.col("t");
  const tW = woolsey.col("t");
  const tRange = paddedRange([tNe, tW]);
  const toX = (t: number) =>
    LEFT + ((t - tRange.lo) / (tRange.hi - tRange.lo)) * plotW;

  const xTicks = niceTicks(tRange.lo, tRange.hi, 8);

  PANELS.forEach((panel, index) => {
    const top = TOP + index * (PANEL_H + VGAP);
    const bottom = top + PANEL_H;

    const series: { table: Table; t: Float64Array; color: RGB }[] = [
      { table: ne, t: tNe, color: NE_COLOR },
      { table: woolsey, t: tW, color: WOOLSEY_COLOR },
    ];
    const columns = series.map((s) => s.table.col(panel.channel));
    // the force panel also carries the constant surge trace for context
    if (panel.channel === "tau_Xp") {
      series.push({ table: ne, t: tNe, color: SURGE_COLOR });
      columns.push(ne.col("tau_X"));
    }
    const range = paddedRange(columns);
    const toY = (v: number) =>
      bottom - ((v - range.lo) / (range.hi - range.lo)) * PANEL_H;

    // grid and tick labels
    const yTicks = niceTicks(range.lo, range.hi, 3);
    for (const v of yTicks.ticks) {
      const y = Math.round(toY(v));
      img.line(LEFT, y, LEFT + plotW, y, GRID);
      const label = formatTick(v, yTicks.step);
      img.text(LEFT - 8 - Raster.textWidth(label), y - 3, label, FRAME);
    }
    for (const v of xTicks.ticks) {
      const x = Math.round(toX(v));
      img.line(x, top, x, bottom, GRID);
      if (index === PANELS.length - 1) {
        const label = formatTick(v, xTicks.step);
        img.text(x - Raster.textWidth(label) / 2, bottom + 8, label, FRAME);
      }
    }

    for (let s = 0; s < series.length; s++) {
      const xs = new Float64Array(columns[s].length);
      const ys = new Float64Array(columns[s].length);
      for (let i = 0; i < columns[s].length; i++) {
        xs[i] = toX(series[s].t[i]);
        ys[i] = toY(columns[s][i]);
      }
      img.polyline(xs, ys, series[s].color);
    }

    // frame on top of the data so panel edges stay crisp
    img.line(LEFT, top, LEFT + plotW, top, FRAME);
    img.line(LEFT, bottom, LEFT + plotW, bottom, FRAME);
    img.line(LEFT, top, LEFT, bottom, FRAME);
    img.line(LEFT + plotW, top, LEFT + plotW, bottom, FRAME);

    img.text(LEFT + 10, top + 6, panel.label, FRAME, 2);

    if (index === 0) {
      // legend in the first panel, right-aligned
      const entries: [string, RGB][] = [["NE", NE_COLOR],
                                        ["Woolsey", WOOLSEY_COLOR]];
      let x = LEFT + plotW - 14;
      for (const [name, color] of entries.reverse()) {
        x -= Raster.textWidth(name, 2);
        img.text(x, top + 6, name, color, 2);
        x -= 34;
        img.fillRect(x + 4, top + 12, 24, 3, color);
        x -= 18;
      }
    }
  });

  const axis = "t [s]";
  img.text(LEFT + (plotW - Raster.textWidth(axis, 2)) / 2,
           height - 20, axis, FRAME, 2);
  return img;
}
