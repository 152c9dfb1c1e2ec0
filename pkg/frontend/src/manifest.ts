/**
 * Dataset manifest types and validation.
 *
 * The viewer enforces the same invariants as the encoder: a manifest that
 * fails here would also have been rejected server-side, so any mismatch
 * points at transport corruption or version skew.
 */

import { computeLayout, MosaicLayout } from "./layout.js";

export interface Dims4 {
  t: number;
  z: number;
  y: number;
  x: number;
}

export interface FramesMedia {
  kind: "frames";
  files: string[];
}

export interface VideoMedia {
  kind: "video";
  file: string;
  codecLabel: string;
}

export interface DatasetManifest {
  version: number;
  name: string;
  dims: Dims4;
  vmin: number;
  vmax: number;
  layout: MosaicLayout;
  fps: number;
  media: FramesMedia | VideoMedia;
  nanCount: number;
}

export class ManifestError extends Error {}

function requireNumber(doc: Record<string, unknown>, key: string): number {
  const value = doc[key];
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new ManifestError(`manifest field ${key} must be a finite number`);
  }
  return value;
}

function requireInt(doc: Record<string, unknown>, key: string): number {
  const value = requireNumber(doc, key);
  if (!Number.isInteger(value)) {
    throw new ManifestError(`manifest field ${key} must be an integer`);
  }
  return value;
}

export function validateManifest(raw: unknown): DatasetManifest {
  if (typeof raw !== "object" || raw === null) {
    throw new ManifestError("manifest must be a JSON object");
  }
  const doc = raw as Record<string, unknown>;

  const version = requireInt(doc, "version");
  if (version !== 1) {
    throw new ManifestError(`unsupported manifest version ${version}`);
  }

  const dimsDoc = doc.dims as Record<string, unknown>;
  if (typeof dimsDoc !== "object" || dimsDoc === null) {
    throw new ManifestError("manifest dims must be an object");
  }
  const dims: Dims4 = {
    t: requireInt(dimsDoc, "t"),
    z: requireInt(dimsDoc, "z"),
    y: requireInt(dimsDoc, "y"),
    x: requireInt(dimsDoc, "x"),
  };
  for (const [key, value] of Object.entries(dims)) {
    if (value < 1) throw new ManifestError(`dims.${key} must be >= 1, got ${value}`);
  }

  const vmin = requireNumber(doc, "vmin");
  const vmax = requireNumber(doc, "vmax");
  if (vmin > vmax) throw new ManifestError(`vmin ${vmin} exceeds vmax ${vmax}`);

  const fps = requireNumber(doc, "fps");
  if (fps <= 0) throw new ManifestError(`fps must be positive, got ${fps}`);

  const nanCount = requireInt(doc, "nanCount");
  if (nanCount < 0) throw new ManifestError(`nanCount must be >= 0, got ${nanCount}`);

  const echoDoc = doc.layout as Record<string, unknown>;
  if (typeof echoDoc !== "object" || echoDoc === null) {
    throw new ManifestError("manifest layout must be an object");
  }
  const fillCode = requireInt(echoDoc, "fillCode");
  const layout = computeLayout(dims.z, dims.y, dims.x, fillCode);
  const expected: Record<string, number> = {
    slicesPerChannel: layout.slicesPerChannel,
    gridCols: layout.gridCols,
    gridRows: layout.gridRows,
    frameWidth: layout.frameWidth,
    frameHeight: layout.frameHeight,
    fillCode: layout.fillCode,
  };
  for (const [key, value] of Object.entries(expected)) {
    if (requireInt(echoDoc, key) !== value) {
      throw new ManifestError(
        `layout field ${key}=${echoDoc[key]} disagrees with value ${value} recomputed from dims`,
      );
    }
  }

  const mediaDoc = doc.media as Record<string, unknown>;
  if (typeof mediaDoc !== "object" || mediaDoc === null) {
    throw new ManifestError("manifest media must be an object");
  }
  let media: FramesMedia | VideoMedia;
  if (mediaDoc.kind === "frames") {
    const files = mediaDoc.files;
    if (!Array.isArray(files) || files.some((f) => typeof f !== "string")) {
      throw new ManifestError("frames media must list file names");
    }
    if (files.length !== dims.t) {
      throw new ManifestError(`manifest lists ${files.length} frame files for t=${dims.t}`);
    }
    media = { kind: "frames", files: files as string[] };
  } else if (mediaDoc.kind === "video") {
    if (typeof mediaDoc.file !== "string" || typeof mediaDoc.codecLabel !== "string") {
      throw new ManifestError("video media must carry file and codecLabel");
    }
    media = { kind: "video", file: mediaDoc.file, codecLabel: mediaDoc.codecLabel };
  } else {
    throw new ManifestError(`unknown media kind ${String(mediaDoc.kind)}`);
  }

  return {
    version,
    name: String(doc.name ?? ""),
    dims,
    vmin,
    vmax,
    layout,
    fps,
    media,
    nanCount,
  };
}
