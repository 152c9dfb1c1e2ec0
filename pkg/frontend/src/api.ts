/**
 * Client for the dataset server's three endpoints.
 */

import { DatasetManifest, validateManifest } from "./manifest.js";

export class FetchError extends Error {
  constructor(
    message: string,
    public readonly status?: number,
  ) {
    super(message);
  }
}

function joinUrl(base: string, path: string): string {
  return base.replace(/\/+$/, "") + path;
}

export async function listDatasets(baseUrl: string): Promise<string[]> {
  const response = await fetch(joinUrl(baseUrl, "/datasets"));
  if (!response.ok) {
    throw new FetchError(`listing datasets failed: HTTP ${response.status}`, response.status);
  }
  const ids = (await response.json()) as unknown;
  if (!Array.isArray(ids) || ids.some((id) => typeof id !== "string")) {
    throw new FetchError("dataset listing is not an array of ids");
  }
  return ids as string[];
}

export async function fetchManifest(baseUrl: string, id: string): Promise<DatasetManifest> {
  const response = await fetch(joinUrl(baseUrl, `/datasets/${encodeURIComponent(id)}/manifest.json`));
  if (response.status === 404) {
    throw new FetchError(`dataset ${id} not found (404)`, 404);
  }
  if (!response.ok) {
    throw new FetchError(`fetching manifest for ${id}: HTTP ${response.status}`, response.status);
  }
  return validateManifest(await response.json());
}

export function mediaUrl(baseUrl: string, id: string, file: string): string {
  return joinUrl(baseUrl, `/datasets/${encodeURIComponent(id)}/media/${encodeURIComponent(file)}`);
}
