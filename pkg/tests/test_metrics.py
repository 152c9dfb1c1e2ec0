"""MAE, compression ratio, and report construction."""

import numpy as np
import pytest

from volvid.core import Field4D
from volvid.metrics import (
    CSV_HEADER,
    EncodingReport,
    EncodingRow,
    build_report,
    compression_ratio,
    mae,
    max_abs_error,
)


class TestMae:
    def test_identical_sequences(self):
        assert mae([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_hand_arithmetic(self):
        assert mae([0.0, 1.0], [0.5, 0.5]) == 0.5
        assert mae([1.0, 2.0, 3.0], [1.0, 3.0, 5.0]) == 1.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            mae([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            mae([], [])

    def test_max_abs_error(self):
        assert max_abs_error([1.0, 2.0, 3.0], [1.0, 3.0, 5.0]) == 2.0


class TestCompressionRatio:
    def test_operational_scale_ratio(self):
        # a 5.0 GB source shrunk to ~12.5 MB of video is a 400:1 reduction
        assert compression_ratio(5.0e9, 12.5e6) == 400.0

    def test_identity_and_hand_values(self):
        assert compression_ratio(1234, 1234) == 1.0
        assert compression_ratio(1000, 250) == 4.0

    def test_zero_encoded_rejected(self):
        with pytest.raises(ValueError):
            compression_ratio(1000, 0)


class TestBuildReport:
    def test_raw_row_storage_arithmetic(self, synth_field_small):
        report = build_report(synth_field_small, ["raw-f32"])
        (row,) = report.rows
        assert row.byte_volume == 4 * 6 * 16 * 16 * 4 == 24576
        assert row.mae_vs_original == 0.0
        assert row.ratio_vs_raw == 1.0

    def test_quantized_row_quarters_volume(self, synth_field_small):
        report = build_report(synth_field_small, ["raw-f32", "quantized-8bit"])
        raw, quant = report.rows
        assert quant.byte_volume * 4 == raw.byte_volume
        assert quant.ratio_vs_raw == 4.0

    def test_quantized_mae_matches_monte_carlo_expectation(self):
        rng = np.random.default_rng(99)
        field = Field4D(rng.random((4, 8, 16, 16), dtype=np.float32).reshape(4, 8, 16, 16))
        report = build_report(field, ["quantized-8bit"])
        (row,) = report.rows
        span = float(field.values.max() - field.values.min())
        expected = span / 1020.0
        assert abs(row.mae_vs_original - expected) <= 0.1 * expected

    def test_png_row_equals_quantized_exactly(self, tmp_path, synth_field_small):
        report = build_report(
            synth_field_small, ["quantized-8bit", "png-frames"], work_dir=tmp_path
        )
        quant, png = report.rows
        assert png.mae_vs_original == quant.mae_vs_original
        assert png.max_abs_error == quant.max_abs_error

    def test_byte_volume_strictly_decreases(self, tmp_path, synth_field_small):
        report = build_report(
            synth_field_small, ["raw-f32", "quantized-8bit", "png-frames"], work_dir=tmp_path
        )
        volumes = [row.byte_volume for row in report.rows]
        assert volumes[0] > volumes[1] > volumes[2]

    def test_stub_video_row_matches_quantized_error(self, tmp_path, synth_field_small):
        report = build_report(
            synth_field_small, ["quantized-8bit", "video:stub"], work_dir=tmp_path
        )
        quant, video = report.rows
        assert not video.skipped
        assert video.mae_vs_original == quant.mae_vs_original

    def test_unavailable_tool_gives_explicit_row(self, tmp_path, synth_field_small, monkeypatch):
        monkeypatch.setenv("PATH", "")
        monkeypatch.delenv("VOLVID_FFMPEG", raising=False)
        report = build_report(
            synth_field_small, ["video:theora-q2"], work_dir=tmp_path
        )
        (row,) = report.rows
        assert row.skipped
        assert row.note == "tool unavailable"
        assert "tool unavailable" in report.to_csv()

    def test_unknown_variant_rejected(self, synth_field_small):
        with pytest.raises(ValueError, match="unknown variant"):
            build_report(synth_field_small, ["zip-everything"])

    def test_row_order_matches_request_order(self, tmp_path, synth_field_small):
        variants = ["quantized-8bit", "raw-f32"]
        report = build_report(synth_field_small, variants, work_dir=tmp_path)
        assert [r.label for r in report.rows] == variants


class TestRendering:
    def make_report(self):
        return EncodingReport(
            rows=[
                EncodingRow("raw-f32", 1000, 0.0, 0.0, 1.0),
                EncodingRow("video:x", 0, 0.0, 0.0, 0.0, note="tool unavailable"),
            ]
        )

    def test_csv_header_exact(self):
        csv = self.make_report().to_csv()
        assert csv.splitlines()[0] == CSV_HEADER
        assert CSV_HEADER == "label,byteVolume,mae,maxAbsError,ratioVsRaw"

    def test_csv_rows(self):
        lines = self.make_report().to_csv().splitlines()
        assert lines[1] == "raw-f32,1000,0.0,0.0,1.0"
        assert lines[2] == "video:x (tool unavailable),,,,"

    def test_text_table_contains_all_labels(self):
        text = self.make_report().to_text()
        assert "raw-f32" in text
        assert "tool unavailable" in text
