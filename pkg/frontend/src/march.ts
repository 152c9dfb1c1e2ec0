/**
 * CPU reference of the shader's front-to-back compositing loop.
 *
 * Used by the tests to pin the rendering semantics (monotone opacity
 * accumulation, early termination, empty-volume behaviour) without a GPU;
 * the fragment shader in shaders.ts runs the same recurrence.
 */

import { TransferFunction } from "./transfer.js";

export const EARLY_TERMINATION_ALPHA = 0.99;

export interface MarchResult {
  color: [number, number, number];
  alpha: number;
  /** accumulated alpha after each executed step (instrumentation) */
  alphaTrace: number[];
  stepsTaken: number;
}

/**
 * March `steps` samples of `sampleAt` (normalized code in [0,1]) across the
 * ray parameter interval [tNear, tFar], compositing through the transfer
 * function.
 */
export function marchRayCpu(
  sampleAt: (t: number) => number,
  tNear: number,
  tFar: number,
  steps: number,
  tf: TransferFunction,
  density: number,
  background: [number, number, number] = [0.03, 0.03, 0.05],
): MarchResult {
  const dt = (tFar - tNear) / steps;
  let accR = 0;
  let accG = 0;
  let accB = 0;
  let accA = 0;
  const alphaTrace: number[] = [];
  let stepsTaken = 0;
  for (let i = 0; i < steps; i++) {
    if (accA >= EARLY_TERMINATION_ALPHA) break;
    stepsTaken += 1;
    const code = sampleAt(tNear + (i + 0.5) * dt);
    const index = Math.max(0, Math.min(255, Math.round(code * 255)));
    const r = tf.table[index * 4] / 255;
    const g = tf.table[index * 4 + 1] / 255;
    const b = tf.table[index * 4 + 2] / 255;
    const a = tf.table[index * 4 + 3] / 255;
    const alpha = 1 - Math.pow(1 - a, dt * density);
    accR += (1 - accA) * r * alpha;
    accG += (1 - accA) * g * alpha;
    accB += (1 - accA) * b * alpha;
    accA += (1 - accA) * alpha;
    alphaTrace.push(accA);
  }
  return {
    color: [
      accR + (1 - accA) * background[0],
      accG + (1 - accA) * background[1],
      accB + (1 - accA) * background[2],
    ],
    alpha: accA,
    alphaTrace,
    stepsTaken,
  };
}
