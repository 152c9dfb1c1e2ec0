/**
 * Viewer state and playback transitions.
 *
 * All transitions are pure: the UI holds one state object and replaces it,
 * so seek(i)-then-render never depends on navigation history.
 */

import { DatasetManifest } from "./manifest.js";
import { TransferFunction, defaultTransferFunction } from "./transfer.js";

export interface OrbitCamera {
  azimuth: number; // radians around the vertical axis
  elevation: number; // radians above the horizon, clamped short of the poles
  distance: number; // > 0, in volume diagonals
}

export interface ViewerState {
  manifest: DatasetManifest;
  currentTime: number; // integer in [0, t-1]
  playing: boolean;
  playbackRate: number; // time steps per second
  camera: OrbitCamera;
  transferFunction: TransferFunction;
}

const MAX_ELEVATION = Math.PI / 2 - 0.01;

export function initialState(manifest: DatasetManifest): ViewerState {
  return {
    manifest,
    currentTime: 0,
    playing: false,
    playbackRate: manifest.fps,
    camera: { azimuth: Math.PI / 4, elevation: Math.PI / 8, distance: 2.5 },
    transferFunction: defaultTransferFunction(),
  };
}

export function clampTime(manifest: DatasetManifest, t: number): number {
  const last = manifest.dims.t - 1;
  const rounded = Math.round(t);
  return rounded < 0 ? 0 : rounded > last ? last : rounded;
}

export function seek(state: ViewerState, t: number): ViewerState {
  return { ...state, currentTime: clampTime(state.manifest, t) };
}

export function play(state: ViewerState): ViewerState {
  return { ...state, playing: true };
}

export function pause(state: ViewerState): ViewerState {
  return { ...state, playing: false };
}

export function setTransferFunction(state: ViewerState, tf: TransferFunction): ViewerState {
  return { ...state, transferFunction: tf };
}

export function orbitCamera(
  state: ViewerState,
  dAzimuth: number,
  dElevation: number,
  dDistance = 0,
): ViewerState {
  const camera = state.camera;
  const elevation = Math.max(-MAX_ELEVATION, Math.min(MAX_ELEVATION, camera.elevation + dElevation));
  const distance = Math.max(0.2, camera.distance + dDistance);
  return { ...state, camera: { azimuth: camera.azimuth + dAzimuth, elevation, distance } };
}

/**
 * Advance playback by dt seconds, wrapping at the end of the sequence.
 * Fractional progress is carried by the caller (see main.ts) so state keeps
 * integer frame indices only.
 */
export function advance(state: ViewerState, wholeSteps: number): ViewerState {
  if (!state.playing || wholeSteps <= 0) return state;
  const t = state.manifest.dims.t;
  return { ...state, currentTime: (state.currentTime + wholeSteps) % t };
}
