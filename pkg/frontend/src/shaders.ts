/**
 * GLSL sources for the ray-marching volume renderer.
 *
 * The fetch/sample functions in the fragment shader are the arithmetic
 * twins of sampling.ts (sampleVolumeShader); keep them in lockstep — the
 * vitest parity suite guards the TypeScript side and sampling.ts documents
 * the contract.
 */

export const VERTEX_SHADER = `#version 300 es
layout(location = 0) in vec2 aPosition;
out vec2 vUv;
void main() {
  vUv = aPosition * 0.5 + 0.5;
  gl_Position = vec4(aPosition, 0.0, 1.0);
}
`;

export const FRAGMENT_SHADER = `#version 300 es
precision highp float;
precision highp int;

uniform sampler2D uMosaic;    // packed RGB mosaic frame
uniform sampler2D uTransfer;  // 256x1 RGBA lookup
uniform int uDimX;
uniform int uDimY;
uniform int uDimZ;
uniform int uSlicesPerChannel;
uniform int uGridCols;
uniform int uSteps;           // ray-march step count
uniform float uDensity;       // opacity scaling
uniform vec3 uEye;            // camera position, volume space
uniform vec3 uRight;
uniform vec3 uUp;
uniform vec3 uForward;
uniform float uTanHalfFov;
uniform float uAspect;

in vec2 vUv;
out vec4 outColor;

float fetchCode(int zi, int yi, int xi) {
  int channel = zi / uSlicesPerChannel;
  int s = zi - channel * uSlicesPerChannel;
  int tileRow = s / uGridCols;
  int tileCol = s - tileRow * uGridCols;
  ivec2 texel = ivec2(tileCol * uDimX + xi, tileRow * uDimY + yi);
  vec3 rgb = texelFetch(uMosaic, texel, 0).rgb;
  return channel == 0 ? rgb.r : (channel == 1 ? rgb.g : rgb.b);
}

float sampleSlice(int zi, float xf, float yf, int x0, int y0, int x1, int y1, float tx, float ty) {
  float c00 = fetchCode(zi, y0, x0);
  float c10 = fetchCode(zi, y0, x1);
  float c01 = fetchCode(zi, y1, x0);
  float c11 = fetchCode(zi, y1, x1);
  return mix(mix(c00, c10, tx), mix(c01, c11, tx), ty);
}

// (u,v,w) in [0,1]^3 -> normalized code; bilinear in-slice, linear across
// the two nearest slices (the mosaic breaks native 3D filtering)
float sampleVolume(vec3 uvw) {
  float xf = clamp(uvw.x, 0.0, 1.0) * float(uDimX - 1);
  float yf = clamp(uvw.y, 0.0, 1.0) * float(uDimY - 1);
  float zf = clamp(uvw.z, 0.0, 1.0) * float(uDimZ - 1);
  int x0 = int(floor(xf));
  int y0 = int(floor(yf));
  int z0 = int(floor(zf));
  int x1 = min(x0 + 1, uDimX - 1);
  int y1 = min(y0 + 1, uDimY - 1);
  int z1 = min(z0 + 1, uDimZ - 1);
  float tx = xf - float(x0);
  float ty = yf - float(y0);
  float tz = zf - float(z0);
  float near = sampleSlice(z0, xf, yf, x0, y0, x1, y1, tx, ty);
  float far  = sampleSlice(z1, xf, yf, x0, y0, x1, y1, tx, ty);
  return mix(near, far, tz);
}

// slab intersection with the unit box; returns (tNear, tFar)
vec2 intersectBox(vec3 origin, vec3 dir) {
  vec3 inv = 1.0 / dir;
  vec3 t0 = (vec3(0.0) - origin) * inv;
  vec3 t1 = (vec3(1.0) - origin) * inv;
  vec3 tmin = min(t0, t1);
  vec3 tmax = max(t0, t1);
  return vec2(max(max(tmin.x, tmin.y), tmin.z), min(min(tmax.x, tmax.y), tmax.z));
}

void main() {
  vec2 ndc = vUv * 2.0 - 1.0;
  vec3 dir = normalize(
    uForward + uRight * (ndc.x * uTanHalfFov * uAspect) + uUp * (ndc.y * uTanHalfFov));
  vec2 hit = intersectBox(uEye, dir);
  float tNear = max(hit.x, 0.0);
  float tFar = hit.y;
  if (tFar <= tNear) {
    outColor = vec4(0.03, 0.03, 0.05, 1.0);
    return;
  }
  float dt = (tFar - tNear) / float(uSteps);
  vec4 acc = vec4(0.0);
  // front-to-back compositing with early termination
  for (int i = 0; i < 4096; i++) {
    if (i >= uSteps || acc.a >= 0.99) break;
    vec3 p = uEye + dir * (tNear + (float(i) + 0.5) * dt);
    float code = sampleVolume(p);
    vec4 tf = texture(uTransfer, vec2((code * 255.0 + 0.5) / 256.0, 0.5));
    float alpha = 1.0 - pow(1.0 - tf.a, dt * uDensity);
    acc.rgb += (1.0 - acc.a) * tf.rgb * alpha;
    acc.a += (1.0 - acc.a) * alpha;
  }
  vec3 background = vec3(0.03, 0.03, 0.05);
  outColor = vec4(acc.rgb + (1.0 - acc.a) * background, 1.0);
}
`;
