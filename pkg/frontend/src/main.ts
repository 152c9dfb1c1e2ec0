/**
 * Application bootstrap: dataset picker, playback controls, orbit input,
 * transfer-function slider, render loop.
 */

import { fetchManifest, listDatasets } from "./api.js";
import { VolumeRenderer } from "./renderer.js";
import {
  ViewerState,
  advance,
  initialState,
  orbitCamera,
  pause,
  play,
  seek,
  setTransferFunction,
} from "./state.js";
import { defaultTransferFunction } from "./transfer.js";
import { FrameSource, frameSourceFor } from "./video.js";

const DEFAULT_SERVER = `${location.protocol}//${location.hostname}:8000`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class App {
  private state: ViewerState | null = null;
  private renderer: VolumeRenderer;
  private source: FrameSource | null = null;
  private uploadedTime = -1;
  private playhead = 0; // fractional playback accumulator
  private lastTick = performance.now();

  private canvas = el<HTMLCanvasElement>("view");
  private status = el<HTMLElement>("status");
  private datasetSelect = el<HTMLSelectElement>("dataset");
  private playButton = el<HTMLButtonElement>("play");
  private timeSlider = el<HTMLInputElement>("time");
  private timeLabel = el<HTMLElement>("time-label");
  private opacitySlider = el<HTMLInputElement>("opacity");
  private serverInput = el<HTMLInputElement>("server");

  constructor() {
    this.renderer = new VolumeRenderer(this.canvas);
    this.renderer.onContextLost(() =>
      this.showError("graphics context lost — reload the page to recover"),
    );
    this.wireControls();
    this.serverInput.value = DEFAULT_SERVER;
    void this.refreshDatasets();
    requestAnimationFrame(() => this.tick());
  }

  private showError(message: string): void {
    this.status.textContent = message;
    this.status.classList.add("error");
  }

  private showInfo(message: string): void {
    this.status.textContent = message;
    this.status.classList.remove("error");
  }

  private get baseUrl(): string {
    return this.serverInput.value.trim() || DEFAULT_SERVER;
  }

  private wireControls(): void {
    el<HTMLButtonElement>("refresh").addEventListener("click", () => void this.refreshDatasets());
    this.datasetSelect.addEventListener("change", () => void this.loadSelected());
    this.playButton.addEventListener("click", () => {
      if (!this.state) return;
      this.state = this.state.playing ? pause(this.state) : play(this.state);
      this.playButton.textContent = this.state.playing ? "pause" : "play";
    });
    this.timeSlider.addEventListener("input", () => {
      if (!this.state) return;
      this.state = seek(this.state, Number(this.timeSlider.value));
    });
    this.opacitySlider.addEventListener("input", () => {
      if (!this.state) return;
      const tf = defaultTransferFunction(Number(this.opacitySlider.value));
      this.state = setTransferFunction(this.state, tf);
      this.renderer.uploadTransferFunction(tf);
    });

    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.canvas.addEventListener("pointerdown", (e) => {
      dragging = true;
      lastX = e.clientX;
      lastY = e.clientY;
      this.canvas.setPointerCapture(e.pointerId);
    });
    this.canvas.addEventListener("pointermove", (e) => {
      if (!dragging || !this.state) return;
      this.state = orbitCamera(
        this.state,
        (e.clientX - lastX) * 0.01,
        (e.clientY - lastY) * 0.01,
      );
      lastX = e.clientX;
      lastY = e.clientY;
    });
    this.canvas.addEventListener("pointerup", () => (dragging = false));
    this.canvas.addEventListener("wheel", (e) => {
      if (!this.state) return;
      e.preventDefault();
      this.state = orbitCamera(this.state, 0, 0, Math.sign(e.deltaY) * 0.15);
    });
  }

  private async refreshDatasets(): Promise<void> {
    try {
      this.showInfo("listing datasets…");
      const ids = await listDatasets(this.baseUrl);
      this.datasetSelect.innerHTML = "";
      for (const id of ids) {
        const option = document.createElement("option");
        option.value = id;
        option.textContent = id;
        this.datasetSelect.append(option);
      }
      if (ids.length === 0) {
        this.showInfo("server reachable, no datasets published");
        return;
      }
      await this.loadSelected();
    } catch (error) {
      this.showError(`${error} — check the server address and retry`);
    }
  }

  private async loadSelected(): Promise<void> {
    const id = this.datasetSelect.value;
    if (!id) return;
    try {
      this.showInfo(`loading ${id}…`);
      const manifest = await fetchManifest(this.baseUrl, id);
      this.state = initialState(manifest);
      this.source = frameSourceFor(this.baseUrl, id, manifest);
      this.uploadedTime = -1;
      this.playhead = 0;
      this.timeSlider.max = String(manifest.dims.t - 1);
      this.timeSlider.value = "0";
      this.playButton.textContent = "play";
      this.renderer.uploadTransferFunction(this.state.transferFunction);
      const d = manifest.dims;
      this.showInfo(
        `${id}: ${d.t}×${d.z}×${d.y}×${d.x} ` +
          `(${manifest.media.kind}), range [${manifest.vmin.toPrecision(4)}, ` +
          `${manifest.vmax.toPrecision(4)}]`,
      );
    } catch (error) {
      this.showError(`loading ${id}: ${error} — retry with the refresh button`);
    }
  }

  private tick(): void {
    requestAnimationFrame(() => this.tick());
    const now = performance.now();
    const dt = (now - this.lastTick) / 1000;
    this.lastTick = now;
    if (!this.state || !this.source) return;

    if (this.state.playing) {
      this.playhead += dt * this.state.playbackRate;
      const whole = Math.floor(this.playhead);
      if (whole > 0) {
        this.playhead -= whole;
        this.state = advance(this.state, whole);
      }
    }
    this.timeSlider.value = String(this.state.currentTime);
    this.timeLabel.textContent = `t=${this.state.currentTime}`;

    const wanted = this.state.currentTime;
    if (wanted !== this.uploadedTime) {
      const requested = wanted;
      void this.source.getFrame(requested).then((pixels) => {
        if (!this.state || this.state.currentTime !== requested) return;
        this.renderer.frameToTexture(pixels, this.state.manifest.layout);
        this.uploadedTime = requested;
      }).catch((error) => this.showError(String(error)));
    }
    if (this.uploadedTime >= 0) {
      this.renderer.render(this.state);
    }
  }
}

new App();
