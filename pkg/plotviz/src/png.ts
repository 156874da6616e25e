import { writeFileSync } from "node:fs";
import { PNG } from "pngjs";
import { Raster } from "./raster.js";

export function encodePng(img: Raster): Buffer {
  const png = new PNG({ width: img.width, height: img.height });
  png.data.set(img.data);
  return PNG.sync.write(png);
}

export function writePng(img: Raster, path: string): void {
  writeFileSync(path, encodePng(img));
}
