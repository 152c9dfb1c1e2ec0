/**
 * Mosaic layout arithmetic.
 *
 * This is the same formula family the encoder uses; the fixture test under
 * tests/layout.test.ts pins the two implementations together, so any edit
 * here must keep the exported JSON mappings green.
 */

export const CHANNELS = 3;

export interface MosaicLayout {
  z: number;
  y: number;
  x: number;
  slicesPerChannel: number;
  gridCols: number;
  gridRows: number;
  frameWidth: number;
  frameHeight: number;
  fillCode: number;
}

export interface PixelRef {
  channel: number; // R=0, G=1, B=2
  px: number;
  py: number;
}

function ceilSqrt(n: number): number {
  let root = Math.floor(Math.sqrt(n));
  while (root * root > n) root -= 1;
  while ((root + 1) * (root + 1) <= n) root += 1;
  return root * root === n ? root : root + 1;
}

function roundUpEven(n: number): number {
  return n % 2 === 0 ? n : n + 1;
}

export function computeLayout(z: number, y: number, x: number, fillCode = 0): MosaicLayout {
  if (z < 1 || y < 1 || x < 1) {
    throw new RangeError(`dimensions must be >= 1, got z=${z} y=${y} x=${x}`);
  }
  if (fillCode < 0 || fillCode > 255) {
    throw new RangeError(`fillCode must be an 8-bit value, got ${fillCode}`);
  }
  const slicesPerChannel = Math.ceil(z / CHANNELS);
  const gridCols = ceilSqrt(slicesPerChannel);
  const gridRows = Math.ceil(slicesPerChannel / gridCols);
  return {
    z,
    y,
    x,
    slicesPerChannel,
    gridCols,
    gridRows,
    frameWidth: roundUpEven(gridCols * x),
    frameHeight: roundUpEven(gridRows * y),
    fillCode,
  };
}

export function voxelToPixel(zi: number, yi: number, xi: number, layout: MosaicLayout): PixelRef {
  if (zi < 0 || zi >= layout.z || yi < 0 || yi >= layout.y || xi < 0 || xi >= layout.x) {
    throw new RangeError(`voxel (${zi},${yi},${xi}) outside volume`);
  }
  const channel = Math.floor(zi / layout.slicesPerChannel);
  const s = zi - channel * layout.slicesPerChannel;
  const tileRow = Math.floor(s / layout.gridCols);
  const tileCol = s - tileRow * layout.gridCols;
  return { channel, px: tileCol * layout.x + xi, py: tileRow * layout.y + yi };
}

export function pixelToVoxel(
  channel: number,
  px: number,
  py: number,
  layout: MosaicLayout,
): { zi: number; yi: number; xi: number } | null {
  if (channel < 0 || channel >= CHANNELS) {
    throw new RangeError(`channel ${channel} outside [0, ${CHANNELS})`);
  }
  if (px < 0 || px >= layout.frameWidth || py < 0 || py >= layout.frameHeight) {
    throw new RangeError(`pixel (${px},${py}) outside frame`);
  }
  if (px >= layout.gridCols * layout.x || py >= layout.gridRows * layout.y) {
    return null; // even-dimension padding
  }
  const tileCol = Math.floor(px / layout.x);
  const tileRow = Math.floor(py / layout.y);
  const s = tileRow * layout.gridCols + tileCol;
  if (s >= layout.slicesPerChannel) return null; // unused tile cell
  const zi = channel * layout.slicesPerChannel + s;
  if (zi >= layout.z) return null; // slot past the last real slice
  return { zi, yi: py - tileRow * layout.y, xi: px - tileCol * layout.x };
}
