/** Fixture loading for the node test environment. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { DatasetManifest, validateManifest } from "../src/manifest.js";
import { MosaicPixels } from "../src/sampling.js";
import { decodePng } from "./png.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export interface MappingFixture {
  layouts: Array<{
    dims: { z: number; y: number; x: number };
    layout: {
      slicesPerChannel: number;
      gridCols: number;
      gridRows: number;
      frameWidth: number;
      frameHeight: number;
      fillCode: number;
    };
    mappings: Array<{
      zi: number;
      yi: number;
      xi: number;
      channel: number;
      px: number;
      py: number;
    }>;
  }>;
}

export function loadMappingFixture(): MappingFixture {
  return JSON.parse(readFileSync(join(FIXTURES, "mappings.json"), "utf-8"));
}

export function loadDatasetManifest(): DatasetManifest {
  const raw = JSON.parse(readFileSync(join(FIXTURES, "dataset", "manifest.json"), "utf-8"));
  return validateManifest(raw);
}

export function loadDatasetFrame(file: string): MosaicPixels {
  const png = decodePng(readFileSync(join(FIXTURES, "dataset", file)));
  return { width: png.width, height: png.height, channels: 3, data: png.data };
}
