/** Manifest validation mirrors the encoder's invariants. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { ManifestError, validateManifest } from "../src/manifest.js";

const FIXTURE = join(
  dirname(fileURLToPath(import.meta.url)),
  "fixtures",
  "dataset",
  "manifest.json",
);

function fixtureDoc(): Record<string, any> {
  return JSON.parse(readFileSync(FIXTURE, "utf-8"));
}

describe("validateManifest", () => {
  it("accepts the encoder's manifest", () => {
    const manifest = validateManifest(fixtureDoc());
    expect(manifest.version).toBe(1);
    expect(manifest.dims.t).toBeGreaterThan(0);
    expect(manifest.media.kind).toBe("frames");
  });

  it("rejects t=0", () => {
    const doc = fixtureDoc();
    doc.dims.t = 0;
    expect(() => validateManifest(doc)).toThrow(ManifestError);
  });

  it("rejects a layout echo that disagrees with dims", () => {
    const doc = fixtureDoc();
    doc.layout.frameWidth += 2;
    expect(() => validateManifest(doc)).toThrow(/frameWidth/);
  });

  it("rejects frame list length mismatch", () => {
    const doc = fixtureDoc();
    doc.media.files = doc.media.files.slice(0, -1);
    expect(() => validateManifest(doc)).toThrow(/frame files/);
  });

  it("rejects inverted value range", () => {
    const doc = fixtureDoc();
    doc.vmin = doc.vmax + 1;
    expect(() => validateManifest(doc)).toThrow(/vmin/);
  });

  it("rejects unknown media kinds", () => {
    const doc = fixtureDoc();
    doc.media = { kind: "carrier-pigeon" };
    expect(() => validateManifest(doc)).toThrow(/media kind/);
  });

  it("rejects unsupported versions", () => {
    const doc = fixtureDoc();
    doc.version = 2;
    expect(() => validateManifest(doc)).toThrow(/version/);
  });
});
