/**
 * Frame extraction: turn dataset media into per-time-step mosaic pixels.
 *
 * PNG-frame datasets fetch and decode one image per time step.  Video
 * datasets seek an off-screen <video> element to the middle of the wanted
 * frame interval and read the pixels back through a canvas; browsers only
 * expose time-based seeking, hence the half-frame offset.
 */

import { mediaUrl } from "./api.js";
import { DatasetManifest } from "./manifest.js";
import { MosaicPixels } from "./sampling.js";

/** Seek target for frame `index`: its interval midpoint. */
export function videoSeekTime(index: number, fps: number): number {
  return (index + 0.5) / fps;
}

/** Which frame a video element at `time` is showing. */
export function frameIndexAtTime(time: number, fps: number): number {
  return Math.floor(time * fps);
}

/** Debug-counter readback: bottom-right pixel, RGB little-endian. */
export function readFrameCounter(pixels: MosaicPixels): number {
  const base = (pixels.height * pixels.width - 1) * pixels.channels;
  return pixels.data[base] | (pixels.data[base + 1] << 8) | (pixels.data[base + 2] << 16);
}

export interface FrameSource {
  getFrame(index: number): Promise<MosaicPixels>;
}

export class DimensionMismatchError extends Error {}

function checkDims(pixels: MosaicPixels, manifest: DatasetManifest): MosaicPixels {
  const { frameWidth, frameHeight } = manifest.layout;
  if (pixels.width !== frameWidth || pixels.height !== frameHeight) {
    throw new DimensionMismatchError(
      `frame is ${pixels.width}x${pixels.height}, manifest layout says ${frameWidth}x${frameHeight}`,
    );
  }
  return pixels;
}

/** PNG frame list; frames are fetched lazily and cached. */
export class PngFrameSource implements FrameSource {
  private cache = new Map<number, MosaicPixels>();

  constructor(
    private readonly baseUrl: string,
    private readonly datasetId: string,
    private readonly manifest: DatasetManifest,
  ) {
    if (manifest.media.kind !== "frames") {
      throw new Error("PngFrameSource requires a frames dataset");
    }
  }

  async getFrame(index: number): Promise<MosaicPixels> {
    const cached = this.cache.get(index);
    if (cached) return cached;
    const files = (this.manifest.media as { files: string[] }).files;
    const url = mediaUrl(this.baseUrl, this.datasetId, files[index]);
    const response = await fetch(url);
    if (!response.ok) {
      throw new Error(`fetching frame ${index}: HTTP ${response.status}`);
    }
    const bitmap = await createImageBitmap(await response.blob());
    const canvas = new OffscreenCanvas(bitmap.width, bitmap.height);
    const ctx = canvas.getContext("2d", { willReadFrequently: true })!;
    ctx.drawImage(bitmap, 0, 0);
    const image = ctx.getImageData(0, 0, bitmap.width, bitmap.height);
    const pixels = checkDims(
      { width: image.width, height: image.height, channels: 4, data: image.data },
      this.manifest,
    );
    this.cache.set(index, pixels);
    return pixels;
  }
}

/** HTML video element + canvas readback. */
export class VideoFrameSource implements FrameSource {
  private readonly video: HTMLVideoElement;
  private readonly canvas: HTMLCanvasElement;
  private ready: Promise<void>;

  constructor(
    baseUrl: string,
    datasetId: string,
    private readonly manifest: DatasetManifest,
  ) {
    if (manifest.media.kind !== "video") {
      throw new Error("VideoFrameSource requires a video dataset");
    }
    this.video = document.createElement("video");
    this.video.crossOrigin = "anonymous";
    this.video.muted = true;
    this.video.preload = "auto";
    this.video.src = mediaUrl(baseUrl, datasetId, manifest.media.file);
    this.canvas = document.createElement("canvas");
    this.canvas.width = manifest.layout.frameWidth;
    this.canvas.height = manifest.layout.frameHeight;
    this.ready = new Promise((resolve, reject) => {
      this.video.addEventListener("loadeddata", () => resolve(), { once: true });
      this.video.addEventListener(
        "error",
        () => reject(new Error(`cannot load video ${this.video.src}`)),
        { once: true },
      );
    });
  }

  private seekTo(time: number): Promise<void> {
    return new Promise((resolve) => {
      if (Math.abs(this.video.currentTime - time) < 1e-4 && this.video.readyState >= 2) {
        resolve();
        return;
      }
      this.video.addEventListener("seeked", () => resolve(), { once: true });
      this.video.currentTime = time;
    });
  }

  async getFrame(index: number): Promise<MosaicPixels> {
    await this.ready;
    await this.seekTo(videoSeekTime(index, this.manifest.fps));
    const ctx = this.canvas.getContext("2d", { willReadFrequently: true })!;
    ctx.drawImage(this.video, 0, 0);
    const image = ctx.getImageData(0, 0, this.canvas.width, this.canvas.height);
    return checkDims(
      { width: image.width, height: image.height, channels: 4, data: image.data },
      this.manifest,
    );
  }
}

export function frameSourceFor(
  baseUrl: string,
  datasetId: string,
  manifest: DatasetManifest,
): FrameSource {
  return manifest.media.kind === "frames"
    ? new PngFrameSource(baseUrl, datasetId, manifest)
    : new VideoFrameSource(baseUrl, datasetId, manifest);
}
