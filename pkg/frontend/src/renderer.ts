/**
 * WebGL2 ray-marching renderer.
 *
 * One fullscreen triangle; the fragment shader (shaders.ts) samples the
 * current mosaic texture through the tile arithmetic and composites
 * front-to-back.  Mosaic uploads are nearest-texel and colourspace-neutral
 * so the texture holds the frame's bytes exactly.
 */

import { cameraBasis } from "./camera.js";
import { MosaicLayout } from "./layout.js";
import { MosaicPixels } from "./sampling.js";
import { FRAGMENT_SHADER, VERTEX_SHADER } from "./shaders.js";
import { ViewerState } from "./state.js";
import { TransferFunction } from "./transfer.js";

export const DEFAULT_STEPS = 256;

export class RenderError extends Error {}

function compile(gl: WebGL2RenderingContext, type: number, source: string): WebGLShader {
  const shader = gl.createShader(type)!;
  gl.shaderSource(shader, source);
  gl.compileShader(shader);
  if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
    throw new RenderError(`shader compile failed: ${gl.getShaderInfoLog(shader)}`);
  }
  return shader;
}

export class VolumeRenderer {
  private gl: WebGL2RenderingContext;
  private program: WebGLProgram;
  private mosaicTexture: WebGLTexture;
  private transferTexture: WebGLTexture;
  private uniforms: Record<string, WebGLUniformLocation | null> = {};
  steps = DEFAULT_STEPS;
  density = 80;

  constructor(private readonly canvas: HTMLCanvasElement) {
    const gl = canvas.getContext("webgl2", { antialias: false });
    if (!gl) throw new RenderError("WebGL2 is not available in this browser");
    this.gl = gl;

    const program = gl.createProgram()!;
    gl.attachShader(program, compile(gl, gl.VERTEX_SHADER, VERTEX_SHADER));
    gl.attachShader(program, compile(gl, gl.FRAGMENT_SHADER, FRAGMENT_SHADER));
    gl.linkProgram(program);
    if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
      throw new RenderError(`program link failed: ${gl.getProgramInfoLog(program)}`);
    }
    this.program = program;

    for (const name of [
      "uMosaic", "uTransfer", "uDimX", "uDimY", "uDimZ", "uSlicesPerChannel",
      "uGridCols", "uSteps", "uDensity", "uEye", "uRight", "uUp", "uForward",
      "uTanHalfFov", "uAspect",
    ]) {
      this.uniforms[name] = gl.getUniformLocation(program, name);
    }

    const buffer = gl.createBuffer();
    gl.bindBuffer(gl.ARRAY_BUFFER, buffer);
    gl.bufferData(
      gl.ARRAY_BUFFER,
      new Float32Array([-1, -1, 3, -1, -1, 3]), // fullscreen triangle
      gl.STATIC_DRAW,
    );
    gl.enableVertexAttribArray(0);
    gl.vertexAttribPointer(0, 2, gl.FLOAT, false, 0, 0);

    this.mosaicTexture = this.makeTexture();
    this.transferTexture = this.makeTexture();
  }

  private makeTexture(): WebGLTexture {
    const gl = this.gl;
    const texture = gl.createTexture()!;
    gl.bindTexture(gl.TEXTURE_2D, texture);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MIN_FILTER, gl.NEAREST);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MAG_FILTER, gl.NEAREST);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_WRAP_S, gl.CLAMP_TO_EDGE);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_WRAP_T, gl.CLAMP_TO_EDGE);
    return texture;
  }

  /** Nearest-texel mosaic upload: texel (px,py) == frame pixel (px,py). */
  frameToTexture(pixels: MosaicPixels, layout: MosaicLayout): void {
    if (pixels.width !== layout.frameWidth || pixels.height !== layout.frameHeight) {
      throw new RenderError(
        `frame ${pixels.width}x${pixels.height} does not match layout ` +
          `${layout.frameWidth}x${layout.frameHeight}`,
      );
    }
    const gl = this.gl;
    gl.bindTexture(gl.TEXTURE_2D, this.mosaicTexture);
    gl.pixelStorei(gl.UNPACK_PREMULTIPLY_ALPHA_WEBGL, false);
    gl.pixelStorei(gl.UNPACK_COLORSPACE_CONVERSION_WEBGL, gl.NONE);
    const format = pixels.channels === 4 ? gl.RGBA : gl.RGB;
    const internal = pixels.channels === 4 ? gl.RGBA8 : gl.RGB8;
    gl.texImage2D(
      gl.TEXTURE_2D, 0, internal, pixels.width, pixels.height, 0, format,
      gl.UNSIGNED_BYTE, new Uint8Array(pixels.data.buffer, pixels.data.byteOffset, pixels.data.length),
    );
  }

  uploadTransferFunction(tf: TransferFunction): void {
    const gl = this.gl;
    gl.bindTexture(gl.TEXTURE_2D, this.transferTexture);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MIN_FILTER, gl.LINEAR);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MAG_FILTER, gl.LINEAR);
    gl.texImage2D(gl.TEXTURE_2D, 0, gl.RGBA8, 256, 1, 0, gl.RGBA, gl.UNSIGNED_BYTE, tf.table);
  }

  render(state: ViewerState): void {
    const gl = this.gl;
    const layout = state.manifest.layout;
    const basis = cameraBasis(state.camera);

    gl.viewport(0, 0, this.canvas.width, this.canvas.height);
    gl.useProgram(this.program);

    gl.activeTexture(gl.TEXTURE0);
    gl.bindTexture(gl.TEXTURE_2D, this.mosaicTexture);
    gl.uniform1i(this.uniforms.uMosaic, 0);
    gl.activeTexture(gl.TEXTURE1);
    gl.bindTexture(gl.TEXTURE_2D, this.transferTexture);
    gl.uniform1i(this.uniforms.uTransfer, 1);

    gl.uniform1i(this.uniforms.uDimX, layout.x);
    gl.uniform1i(this.uniforms.uDimY, layout.y);
    gl.uniform1i(this.uniforms.uDimZ, layout.z);
    gl.uniform1i(this.uniforms.uSlicesPerChannel, layout.slicesPerChannel);
    gl.uniform1i(this.uniforms.uGridCols, layout.gridCols);
    gl.uniform1i(this.uniforms.uSteps, this.steps);
    gl.uniform1f(this.uniforms.uDensity, this.density);
    gl.uniform3fv(this.uniforms.uEye, basis.eye);
    gl.uniform3fv(this.uniforms.uRight, basis.right);
    gl.uniform3fv(this.uniforms.uUp, basis.up);
    gl.uniform3fv(this.uniforms.uForward, basis.forward);
    gl.uniform1f(this.uniforms.uTanHalfFov, basis.tanHalfFov);
    gl.uniform1f(this.uniforms.uAspect, this.canvas.width / this.canvas.height);

    gl.drawArrays(gl.TRIANGLES, 0, 3);
  }

  onContextLost(callback: () => void): void {
    this.canvas.addEventListener("webglcontextlost", (event) => {
      event.preventDefault();
      callback();
    });
  }
}
