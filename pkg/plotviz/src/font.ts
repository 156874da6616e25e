/** 5x7 bitmap font, one number per row, bit 4 is the left pixel.
 *
 * Only the characters used by the panel labels, legend, and tick text
 * are defined; unknown characters render as a filled box so a missing
 * glyph is visible instead of silent.
 */
export const GLYPH_W = 5;
export const GLYPH_H = 7;

export const FONT: Record<string, number[]> = {
  " ": [0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00],
  "-": [0x00, 0x00, 0x00, 0x0e, 0x00, 0x00, 0x00],
  "+": [0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00],
  ".": [0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c],
  "[": [0x0e, 0x08, 0x08, 0x08, 0x08, 0x08, 0x0e],
  "]": [0x0e, 0x02, 0x02, 0x02, 0x02, 0x02, 0x0e],
  "/": [0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10],
  "_": [0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f],
  "(": [0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02],
  ")": [0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08],
  "0": [0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e],
  "1": [0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e],
  "2": [0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f],
  "3": [0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e],
  "4": [0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02],
  "5": [0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e],
  "6": [0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e],
  "7": [0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
  "8": [0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e],
  "9": [0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c],
  "E": [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f],
  "N": [0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11],
  "W": [0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0a],
  "a": [0x00, 0x00, 0x0e, 0x01, 0x0f, 0x11, 0x0f],
  "d": [0x01, 0x01, 0x0d, 0x13, 0x11, 0x13, 0x0d],
  "e": [0x00, 0x00, 0x0e, 0x11, 0x1f, 0x10, 0x0e],
  "l": [0x0c, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e],
  "m": [0x00, 0x00, 0x1a, 0x15, 0x15, 0x15, 0x15],
  "o": [0x00, 0x00, 0x0e, 0x11, 0x11, 0x11, 0x0e],
  "p": [0x00, 0x00, 0x1e, 0x11, 0x1e, 0x10, 0x10],
  "q": [0x00, 0x00, 0x0d, 0x13, 0x0f, 0x01, 0x01],
  "r": [0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10],
  "s": [0x00, 0x00, 0x0f, 0x10, 0x0e, 0x01, 0x1e],
  "t": [0x08, 0x08, 0x1c, 0x08, 0x08, 0x09, 0x06],
  "u": [0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0d],
  "x": [0x00, 0x00, 0x11, 0x0a, 0x04, 0x0a, 0x11],
  "y": [0x00, 0x00, 0x11, 0x11, 0x0f, 0x01, 0x0e],
  "z": [0x00, 0x00, 0x1f, 0x02, 0x04, 0x08, 0x1f],
  "θ": [0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x0e],
  "τ": [0x00, 0x00, 0x1f, 0x04, 0x04, 0x05, 0x02],
};

export const MISSING = [0x1f, 0x1f, 0x1f, 0x1f, 0x1f, 0x1f, 0x1f];
