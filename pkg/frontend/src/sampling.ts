/**
 * Volume sampling: a CPU reference and an emulation of the fragment-shader
 * arithmetic.
 *
 * Both map normalized (u,v,w) coordinates to fractional voxel coordinates,
 * bilinearly filter within the two nearest z-slices and blend linearly
 * across them.  The CPU reference reads the code volume directly in double
 * precision; the shader emulation reads the packed mosaic exactly the way
 * the GLSL does (texelFetch through the tile arithmetic, float32 rounding
 * via Math.fround), so the two sides bound the error a real GPU can add.
 */

import { MosaicLayout } from "./layout.js";

/** Code volume: z-major, then y, then x (matches the wire layout). */
export interface CodeVolume {
  z: number;
  y: number;
  x: number;
  codes: Uint8Array; // length z*y*x
}

/** Packed mosaic pixels: row-major (py, px, rgb[a]). */
export interface MosaicPixels {
  width: number;
  height: number;
  channels: 3 | 4; // RGB (decoded PNG) or RGBA (canvas readback)
  data: Uint8Array | Uint8ClampedArray;
}

export function volumeCode(volume: CodeVolume, zi: number, yi: number, xi: number): number {
  return volume.codes[(zi * volume.y + yi) * volume.x + xi];
}

function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

/** Normalized [0,1] sample via trilinear interpolation over voxel codes. */
export function sampleVolumeCpu(
  u: number,
  v: number,
  w: number,
  volume: CodeVolume,
): number {
  const xf = clamp01(u) * (volume.x - 1);
  const yf = clamp01(v) * (volume.y - 1);
  const zf = clamp01(w) * (volume.z - 1);
  const x0 = Math.floor(xf);
  const y0 = Math.floor(yf);
  const z0 = Math.floor(zf);
  const x1 = Math.min(x0 + 1, volume.x - 1);
  const y1 = Math.min(y0 + 1, volume.y - 1);
  const z1 = Math.min(z0 + 1, volume.z - 1);
  const tx = xf - x0;
  const ty = yf - y0;
  const tz = zf - z0;

  const slice = (zi: number): number => {
    const c00 = volumeCode(volume, zi, y0, x0);
    const c10 = volumeCode(volume, zi, y0, x1);
    const c01 = volumeCode(volume, zi, y1, x0);
    const c11 = volumeCode(volume, zi, y1, x1);
    const top = c00 + (c10 - c00) * tx;
    const bottom = c01 + (c11 - c01) * tx;
    return top + (bottom - top) * ty;
  };

  const near = slice(z0);
  const far = slice(z1);
  return (near + (far - near) * tz) / 255;
}

const f = Math.fround;

/** texelFetch + channel select, exactly as the GLSL fetchCode() does. */
export function shaderFetchCode(
  zi: number,
  yi: number,
  xi: number,
  layout: MosaicLayout,
  mosaic: MosaicPixels,
): number {
  const channel = Math.trunc(zi / layout.slicesPerChannel);
  const s = zi - channel * layout.slicesPerChannel;
  const tileRow = Math.trunc(s / layout.gridCols);
  const tileCol = s - tileRow * layout.gridCols;
  const px = tileCol * layout.x + xi;
  const py = tileRow * layout.y + yi;
  const base = (py * mosaic.width + px) * mosaic.channels;
  return f(mosaic.data[base + channel] / 255); // unorm texel -> [0,1] float
}

/** The fragment shader's sampleVolume(), transliterated with float32 ops. */
export function sampleVolumeShader(
  u: number,
  v: number,
  w: number,
  layout: MosaicLayout,
  mosaic: MosaicPixels,
): number {
  const xf = f(f(clamp01(u)) * f(layout.x - 1));
  const yf = f(f(clamp01(v)) * f(layout.y - 1));
  const zf = f(f(clamp01(w)) * f(layout.z - 1));
  const x0 = Math.floor(xf);
  const y0 = Math.floor(yf);
  const z0 = Math.floor(zf);
  const x1 = Math.min(x0 + 1, layout.x - 1);
  const y1 = Math.min(y0 + 1, layout.y - 1);
  const z1 = Math.min(z0 + 1, layout.z - 1);
  const tx = f(xf - x0);
  const ty = f(yf - y0);
  const tz = f(zf - z0);

  const mix = (a: number, b: number, t: number): number => f(a + f(f(b - a) * t));

  const slice = (zi: number): number => {
    const c00 = shaderFetchCode(zi, y0, x0, layout, mosaic);
    const c10 = shaderFetchCode(zi, y0, x1, layout, mosaic);
    const c01 = shaderFetchCode(zi, y1, x0, layout, mosaic);
    const c11 = shaderFetchCode(zi, y1, x1, layout, mosaic);
    return mix(mix(c00, c10, tx), mix(c01, c11, tx), ty);
  };

  return mix(slice(z0), slice(z1), tz);
}
