"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  The suite needs no external codec; the encoder-gated
criterion skips when no real lossy encoder is available.
"""

import http.client
import json
import threading
import time

import numpy as np

import pytest

from volvid import cli
from volvid.codec import builtin_presets, default_lossy_preset
from volvid.container import (
    decode_dataset_codes,
    encode_dataset,
    encode_dataset_video,
)
from volvid.core import (
    Quantizer,
    compute_layout,
    dequantize,
    make_quantizer,
    pixel_to_voxel,
    quantize,
    voxel_to_pixel,
)
from volvid.ingest import synthesize_field, write_raw_volume
from volvid.metrics import mae
from volvid.server import make_server


class Budget:
    """Runs a criterion under its stated wall-clock budget."""

    def __init__(self, name, seconds):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"{self.name}: took {elapsed:.2f}s, budget {self.seconds}s"
            )
            print(f"ACCEPTANCE PASS [{elapsed:6.2f}s] {self.name}")
        else:
            print(f"ACCEPTANCE FAIL [{elapsed:6.2f}s] {self.name}")
        return False


def test_quantization_bound():
    with Budget("quantization bound: MAE ~ 9.8e-4, max <= 1/510", 5.0):
        rng = np.random.default_rng(20151127)
        values = rng.random(1_000_000)
        q = Quantizer(0.0, 1.0)
        recon = dequantize(quantize(values, q), q)
        errors = np.abs(recon - values)
        mean_err = float(errors.mean())
        assert abs(mean_err - 9.8e-4) <= 0.1 * 9.8e-4, f"MAE {mean_err}"
        assert float(errors.max()) <= 1.0 / 510.0 + 1e-9


def test_volume_quartering():
    with Budget("volume quartering: uint8 codes are 1/4 of f32 bytes", 5.0):
        field = synthesize_field(seed=8, dims=(4, 12, 32, 32))
        codes = quantize(field.values, make_quantizer(field))
        assert codes.dtype == np.uint8
        assert codes.nbytes * 4 == field.values.nbytes


def test_mapping_correctness_exhaustive():
    with Budget("mapping correctness: exhaustive bijection z<=10, y,x<=8", 10.0):
        for z in range(1, 11):
            for y in range(1, 9):
                for x in range(1, 9):
                    layout = compute_layout(z, y, x)
                    forward = {}
                    for zi in range(z):
                        for yi in range(y):
                            for xi in range(x):
                                key = voxel_to_pixel(zi, yi, xi, layout)
                                assert key not in forward, f"collision {key} at dims {z},{y},{x}"
                                forward[key] = (zi, yi, xi)
                    assert len(forward) == z * y * x
                    for channel in range(3):
                        for py in range(layout.frame_height):
                            for px in range(layout.frame_width):
                                expected = forward.get((channel, px, py))
                                got = pixel_to_voxel(channel, px, py, layout)
                                assert got == expected, (
                                    f"dims {z},{y},{x}: pixel ({channel},{px},{py}) "
                                    f"-> {got}, oracle {expected}"
                                )


def test_lossless_container_roundtrip(tmp_path):
    with Budget("lossless container round trip (t=8, z=24, 64x64)", 10.0):
        field = synthesize_field(seed=12, dims=(8, 24, 64, 64))
        encode_dataset(field, tmp_path)
        _, codes = decode_dataset_codes(tmp_path / "manifest.json")
        q = make_quantizer(field)
        expected = quantize(field.values, q)
        assert np.array_equal(codes, expected)
        decoded = dequantize(codes, q).astype(np.float32)
        quant_only = dequantize(expected, q).astype(np.float32)
        assert mae(field.values, decoded) == mae(field.values, quant_only)


def test_comparison_report_via_cli(tmp_path, capsys):
    with Budget("comparison report: raw/quantized/png via CLI", 30.0):
        field = synthesize_field(seed=5, dims=(4, 12, 32, 32))
        volume_dir = tmp_path / "vol"
        volume_dir.mkdir()
        write_raw_volume(field, volume_dir / "header.json", volume_dir / "data.f32")
        csv_path = tmp_path / "report.csv"
        code = cli.main([
            "metrics",
            "--in", str(volume_dir),
            "--variants", "raw-f32,quantized-8bit,png-frames",
            "--csv", str(csv_path),
        ])
        capsys.readouterr()
        assert code == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "label,byteVolume,mae,maxAbsError,ratioVsRaw"
        rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert set(rows) == {"raw-f32", "quantized-8bit", "png-frames"}
        # MAE(png) == MAE(quantized) exactly: identical floats print identically
        assert rows["png-frames"][2] == rows["quantized-8bit"][2]
        assert float(rows["raw-f32"][2]) == 0.0
        volumes = [int(rows[label][1]) for label in ("raw-f32", "quantized-8bit", "png-frames")]
        assert volumes[0] > volumes[1] > volumes[2], f"not strictly decreasing: {volumes}"


def test_real_encoder_compression_gate(tmp_path):
    preset = default_lossy_preset()
    if preset is None:
        pytest.skip("no real external encoder available (ffmpeg or OpenCV)")
    with Budget(f"real-encoder gate ({preset.name}): >=50:1, MAE <= 0.05 range", 120.0):
        field = synthesize_field(seed=1, dims=(24, 48, 128, 128))
        manifest = encode_dataset_video(field, tmp_path, preset, fps=10)
        video_bytes = (tmp_path / manifest.media.file).stat().st_size
        raw_bytes = field.values.nbytes
        assert raw_bytes / video_bytes >= 50.0, f"ratio {raw_bytes / video_bytes:.1f}"
        _, codes = decode_dataset_codes(tmp_path / "manifest.json")
        q = make_quantizer(field)
        recon = dequantize(codes, q)
        span = q.vmax - q.vmin
        decoded_mae = mae(field.values, recon)
        assert decoded_mae <= 0.05 * span, f"MAE {decoded_mae} vs range {span}"


def test_stub_codec_equivalence(tmp_path):
    with Budget("stub-codec equivalence: video path == PNG path", 10.0):
        field = synthesize_field(seed=21, dims=(6, 12, 32, 32))
        encode_dataset(field, tmp_path / "png")
        encode_dataset_video(field, tmp_path / "vid", builtin_presets()["stub"])
        _, png_codes = decode_dataset_codes(tmp_path / "png" / "manifest.json")
        _, vid_codes = decode_dataset_codes(tmp_path / "vid" / "manifest.json")
        assert np.array_equal(png_codes, vid_codes)


def test_server_contract(tmp_path):
    with Budget("server contract: allowlist, 200/206/404/416, exact ranges", 5.0):
        field = synthesize_field(seed=3, dims=(2, 3, 8, 8), blobs=2)
        encode_dataset(field, tmp_path / "demo")
        (tmp_path / "demo" / "unlisted.bin").write_bytes(b"should never be served")
        httpd = make_server(tmp_path, "127.0.0.1:0")
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        try:
            host, port = httpd.server_address

            def fetch(path, headers=None):
                conn = http.client.HTTPConnection(host, port, timeout=5)
                try:
                    conn.request("GET", path, headers=headers or {})
                    resp = conn.getresponse()
                    return resp.status, dict(resp.getheaders()), resp.read()
                finally:
                    conn.close()

            status, _, body = fetch("/datasets")
            assert status == 200 and json.loads(body) == ["demo"]

            manifest_bytes = (tmp_path / "demo" / "manifest.json").read_bytes()
            status, _, body = fetch("/datasets/demo/manifest.json")
            assert status == 200 and body == manifest_bytes

            status, _, _ = fetch("/datasets/missing/manifest.json")
            assert status == 404
            status, _, _ = fetch("/datasets/../demo/manifest.json")
            assert status == 400
            status, _, _ = fetch("/datasets/demo/media/unlisted.bin")
            assert status == 404

            frame = (tmp_path / "demo" / "frame_000000.png").read_bytes()
            status, headers, body = fetch("/datasets/demo/media/frame_000000.png")
            assert status == 200 and body == frame
            assert headers["Accept-Ranges"] == "bytes"

            status, headers, body = fetch(
                "/datasets/demo/media/frame_000000.png", {"Range": "bytes=0-99"}
            )
            assert status == 206
            assert body == frame[:100]
            assert headers["Content-Range"] == f"bytes 0-99/{len(frame)}"

            status, headers, body = fetch(
                "/datasets/demo/media/frame_000000.png", {"Range": "bytes=10-19"}
            )
            assert status == 206 and body == frame[10:20]

            status, headers, _ = fetch(
                "/datasets/demo/media/frame_000000.png",
                {"Range": f"bytes={len(frame) + 1000}-"},
            )
            assert status == 416
            assert headers["Content-Range"] == f"bytes */{len(frame)}"
        finally:
            httpd.shutdown()
            thread.join()
