/**
 * Orbit camera -> ray basis for the shader.  The volume occupies the unit
 * box; w (the z slice axis, altitude in atmospheric data) points up.
 */

import { OrbitCamera } from "./state.js";

export type Vec3 = [number, number, number];

export interface CameraBasis {
  eye: Vec3;
  right: Vec3;
  up: Vec3;
  forward: Vec3;
  tanHalfFov: number;
}

const CENTER: Vec3 = [0.5, 0.5, 0.5];
const FOV_DEGREES = 45;

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  return [v[0] / n, v[1] / n, v[2] / n];
}

export function cameraBasis(camera: OrbitCamera): CameraBasis {
  const { azimuth, elevation, distance } = camera;
  const eye: Vec3 = [
    CENTER[0] + distance * Math.cos(elevation) * Math.cos(azimuth),
    CENTER[1] + distance * Math.cos(elevation) * Math.sin(azimuth),
    CENTER[2] + distance * Math.sin(elevation),
  ];
  const forward = normalize(sub(CENTER, eye));
  const worldUp: Vec3 = [0, 0, 1];
  const right = normalize(cross(forward, worldUp));
  const up = cross(right, forward);
  return {
    eye,
    right,
    up,
    forward,
    tanHalfFov: Math.tan(((FOV_DEGREES / 2) * Math.PI) / 180),
  };
}
