import { FONT, GLYPH_H, GLYPH_W, MISSING } from "./font.js";

export type RGB = readonly [number, number, number];

/** RGBA pixel buffer with the handful of drawing ops the plots need. */
export class Raster {
  readonly data: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, color: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = color[0];
    this.data[i + 1] = color[1];
    this.data[i + 2] = color[2];
    this.data[i + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, color: RGB): void {
    for (let yy = y; yy < y + h; yy++) {
      for (let xx = x; xx < x + w; xx++) this.set(xx, yy, color);
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: RGB): void {
    // Bresenham on rounded endpoints; plots never need subpixel accuracy
    let xa = Math.round(x0), ya = Math.round(y0);
    const xb = Math.round(x1), yb = Math.round(y1);
    const dx = Math.abs(xb - xa), dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1, sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, color);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; xa += sx; }
      if (e2 <= dx) { err += dx; ya += sy; }
    }
  }

  polyline(xs: ArrayLike<number>, ys: ArrayLike<number>, color: RGB): void {
    for (let i = 1; i < xs.length; i++) {
      this.line(xs[i - 1], ys[i - 1], xs[i], ys[i], color);
    }
  }

  text(x: number, y: number, s: string, color: RGB, scale = 1): void {
    let cx = x;
    for (const ch of s) {
      const glyph = FONT[ch] ?? MISSING;
      for (let row = 0; row < GLYPH_H; row++) {
        for (let col = 0; col < GLYPH_W; col++) {
          if ((glyph[row] >> (GLYPH_W - 1 - col)) & 1) {
            this.fillRect(cx + col * scale, y + row * scale,
                          scale, scale, color);
          }
        }
      }
      cx += (GLYPH_W + 1) * scale;
    }
  }

  static textWidth(s: string, scale = 1): number {
    return [...s].length * (GLYPH_W + 1) * scale;
  }

  /** Number of pixels exactly matching color (tests use this). */
  countColor(color: RGB): number {
    let n = 0;
    for (let i = 0; i < this.data.length; i += 4) {
      if (this.data[i] === color[0] && this.data[i + 1] === color[1]
          && this.data[i + 2] === color[2]) n++;
    }
    return n;
  }
}
