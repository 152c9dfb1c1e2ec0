/**
 * Transfer function: maps an 8-bit code to colour and opacity.
 *
 * Stored as a 256-entry RGBA lookup table so it uploads directly as a
 * 256x1 texture.  The default ramps opacity linearly from 0 at code 0 (so
 * fill/padding pixels are invisible) up to a configurable maximum at 255,
 * with a greyscale-to-blue colour ramp.
 */

export interface TransferFunction {
  /** RGBA8 lookup, 256 entries. Alpha is per-sample opacity in [0,255]. */
  table: Uint8Array;
}

export function defaultTransferFunction(maxOpacity = 0.35): TransferFunction {
  if (maxOpacity < 0 || maxOpacity > 1) {
    throw new RangeError(`maxOpacity must be in [0,1], got ${maxOpacity}`);
  }
  const table = new Uint8Array(256 * 4);
  for (let code = 0; code < 256; code++) {
    const t = code / 255;
    // grey at low codes drifting to a cold blue-white at high codes
    const r = Math.round(255 * (0.25 + 0.75 * t) * (0.6 + 0.4 * t));
    const g = Math.round(255 * (0.3 + 0.7 * t) * (0.7 + 0.3 * t));
    const b = Math.round(255 * (0.45 + 0.55 * t));
    const a = Math.round(255 * maxOpacity * t); // exactly 0 at code 0
    table.set([r, g, b, a], code * 4);
  }
  return { table };
}

export function opacityAt(tf: TransferFunction, code: number): number {
  const idx = Math.max(0, Math.min(255, Math.round(code)));
  return tf.table[idx * 4 + 3] / 255;
}

export function colourAt(tf: TransferFunction, code: number): [number, number, number] {
  const idx = Math.max(0, Math.min(255, Math.round(code)));
  return [tf.table[idx * 4] / 255, tf.table[idx * 4 + 1] / 255, tf.table[idx * 4 + 2] / 255];
}
