"""Quantizer, layout, and frame pack/unpack properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volvid.core import (
    Field4D,
    Quantizer,
    compute_layout,
    dequantize,
    make_quantizer,
    pack_frame,
    pixel_to_voxel,
    quantize,
    unpack_frame,
    voxel_to_pixel,
)
from volvid.errors import LayoutOversizeError

small_dims = st.tuples(
    st.integers(min_value=1, max_value=10),
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=1, max_value=8),
)


def brute_force_pixel_map(layout):
    """Independent oracle: enumerate voxel->pixel for every voxel."""
    mapping = {}
    for zi in range(layout.z):
        for yi in range(layout.y):
            for xi in range(layout.x):
                key = voxel_to_pixel(zi, yi, xi, layout)
                assert key not in mapping, f"collision at {key}"
                mapping[key] = (zi, yi, xi)
    return mapping


class TestQuantizer:
    def test_make_quantizer_min_max(self):
        field = Field4D(np.array([0.0, 0.25, 1.0, 0.5]).reshape(1, 1, 2, 2))
        q = make_quantizer(field)
        assert q.vmin == 0.0
        assert q.vmax == 1.0
        assert not q.degenerate

    def test_make_quantizer_constant_field_degenerate(self):
        field = Field4D(np.full((2, 2, 2, 2), 7.0))
        q = make_quantizer(field)
        assert q == Quantizer(7.0, 7.0)
        assert q.degenerate

    def test_make_quantizer_matches_linear_scan(self, synth_field_2488):
        # oracle: pure-python scan over the flattened values
        lo = hi = None
        for v in synth_field_2488.values.ravel().tolist():
            lo = v if lo is None or v < lo else lo
            hi = v if hi is None or v > hi else hi
        q = make_quantizer(synth_field_2488)
        assert q.vmin == pytest.approx(lo, abs=0.0)
        assert q.vmax == pytest.approx(hi, abs=0.0)

    def test_quantizer_rejects_inverted_bounds(self):
        with pytest.raises(ValueError):
            Quantizer(1.0, 0.0)

    def test_quantize_bounds_and_clamp(self):
        q = Quantizer(0.0, 1.0)
        assert quantize(0.0, q) == 0
        assert quantize(1.0, q) == 255
        assert quantize(1.7, q) == 255
        assert quantize(-0.4, q) == 0

    def test_quantize_rounds_half_away_from_zero(self):
        q = Quantizer(0.0, 1.0)
        # 0.5 * 255 = 127.5 -> 128; 0.003 * 255 = 0.765 -> 1
        assert quantize(0.5, q) == 128
        assert quantize(0.003, q) == 1

    def test_quantize_degenerate_returns_zero(self):
        q = Quantizer(3.0, 3.0)
        assert quantize(3.0, q) == 0
        assert quantize(99.0, q) == 0

    def test_dequantize_endpoints_and_midpoint(self):
        q = Quantizer(0.0, 1.0)
        assert dequantize(0, q) == 0.0
        assert dequantize(255, q) == 1.0
        assert dequantize(128, q) == pytest.approx(128.0 / 255.0)

    def test_dequantize_degenerate_returns_vmin(self):
        q = Quantizer(3.0, 3.0)
        assert dequantize(0, q) == 3.0
        assert dequantize(200, q) == 3.0

    def test_dequantize_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            dequantize(256, Quantizer(0.0, 1.0))
        with pytest.raises(ValueError):
            dequantize(-1, Quantizer(0.0, 1.0))

    def test_array_roundtrip_shapes(self):
        q = Quantizer(-2.0, 5.0)
        values = np.linspace(-2.0, 5.0, 24).reshape(2, 3, 4)
        codes = quantize(values, q)
        assert codes.dtype == np.uint8 and codes.shape == values.shape
        back = dequantize(codes, q)
        assert back.shape == values.shape

    @given(
        st.floats(min_value=-1e6, max_value=1e6),
        st.floats(min_value=-1e6, max_value=1e6),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_roundtrip_error_bound(self, a, b, frac):
        vmin, vmax = min(a, b), max(a, b)
        q = Quantizer(vmin, vmax)
        v = vmin + frac * (vmax - vmin)
        err = abs(dequantize(quantize(v, q), q) - v)
        span = vmax - vmin
        assert err <= span / 510.0 + 1e-9 * max(span, 1.0)

    @given(
        st.floats(min_value=-100.0, max_value=100.0),
        st.floats(min_value=-100.0, max_value=100.0),
    )
    def test_quantize_monotone(self, v1, v2):
        q = Quantizer(-50.0, 50.0)
        lo, hi = min(v1, v2), max(v1, v2)
        assert quantize(lo, q) <= quantize(hi, q)

    def test_statistical_mae_uniform(self):
        # 10^6 uniform samples on [0,1]: MAE of the quantization round trip
        # should sit within 10% of the analytic 1/1020
        rng = np.random.default_rng(20151127)
        values = rng.random(1_000_000)
        q = Quantizer(0.0, 1.0)
        recon = dequantize(quantize(values, q), q)
        mae = np.abs(recon - values).mean()
        assert abs(mae - 1.0 / 1020.0) <= 0.1 / 1020.0


class TestLayout:
    def test_layout_24_64_64(self):
        layout = compute_layout(24, 64, 64)
        assert layout.slices_per_channel == 8
        assert layout.grid_cols == 3
        assert layout.grid_rows == 3
        assert layout.frame_width == 192
        assert layout.frame_height == 192

    def test_layout_odd_dims_padded_even(self):
        layout = compute_layout(1, 5, 7)
        assert layout.slices_per_channel == 1
        assert layout.grid_cols == 1 and layout.grid_rows == 1
        assert layout.frame_width == 8
        assert layout.frame_height == 6

    def test_layout_tiny(self):
        layout = compute_layout(3, 1, 1)
        assert layout.slices_per_channel == 1
        assert layout.grid_cols == 1 and layout.grid_rows == 1
        assert (layout.frame_width, layout.frame_height) == (2, 2)

    def test_layout_deterministic(self):
        assert compute_layout(24, 64, 64) == compute_layout(24, 64, 64)

    def test_layout_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            compute_layout(0, 4, 4)
        with pytest.raises(ValueError):
            compute_layout(4, 4, 4, fill_code=300)

    def test_layout_rejects_oversize(self):
        with pytest.raises(LayoutOversizeError):
            compute_layout(3, 100_000, 100_000)

    @given(small_dims)
    def test_layout_invariants(self, dims):
        z, y, x = dims
        layout = compute_layout(z, y, x)
        s = layout.slices_per_channel
        assert s == -(-z // 3)
        assert layout.grid_cols * layout.grid_rows >= s
        assert layout.grid_cols >= layout.grid_rows or layout.grid_cols * layout.grid_rows >= s
        assert layout.frame_width % 2 == 0 and layout.frame_height % 2 == 0
        assert layout.frame_width >= layout.grid_cols * x
        assert layout.frame_height >= layout.grid_rows * y


class TestMapping:
    def test_origin(self):
        layout = compute_layout(24, 64, 64)
        assert voxel_to_pixel(0, 0, 0, layout) == (0, 0, 0)
        assert pixel_to_voxel(0, 0, 0, layout) == (0, 0, 0)

    def test_first_slice_of_second_third(self):
        layout = compute_layout(24, 64, 64)
        assert voxel_to_pixel(8, 0, 0, layout) == (1, 0, 0)

    def test_hand_evaluated_interior_voxel(self):
        layout = compute_layout(24, 64, 64)
        # zi=23: channel B, s=7, tile (col 1, row 2)
        assert voxel_to_pixel(23, 2, 5, layout) == (2, 69, 130)
        assert pixel_to_voxel(2, 69, 130, layout) == (23, 2, 5)

    def test_unused_tile_is_padding(self):
        layout = compute_layout(24, 64, 64)
        # pixel (191,191) sits in tile (2,2) = slot 8 >= slices_per_channel
        assert pixel_to_voxel(0, 191, 191, layout) is None

    def test_out_of_range_raises(self):
        layout = compute_layout(24, 64, 64)
        with pytest.raises(IndexError):
            voxel_to_pixel(24, 0, 0, layout)
        with pytest.raises(IndexError):
            voxel_to_pixel(0, 64, 0, layout)
        with pytest.raises(IndexError):
            pixel_to_voxel(0, 192, 0, layout)
        with pytest.raises(IndexError):
            pixel_to_voxel(3, 0, 0, layout)

    @settings(max_examples=40, deadline=None)
    @given(small_dims)
    def test_bijective_on_small_volumes(self, dims):
        z, y, x = dims
        layout = compute_layout(z, y, x)
        mapping = brute_force_pixel_map(layout)
        assert len(mapping) == z * y * x
        # inverse agrees with the oracle on every pixel of every channel
        for channel in range(3):
            for py in range(layout.frame_height):
                for px in range(layout.frame_width):
                    expected = mapping.get((channel, px, py))
                    assert pixel_to_voxel(channel, px, py, layout) == expected


class TestPackUnpack:
    def test_hand_packed_tiny_volume(self):
        layout = compute_layout(3, 1, 1)
        codes = np.array([10, 20, 30], dtype=np.uint8).reshape(3, 1, 1)
        frame = pack_frame(codes, layout)
        assert frame.shape == (2, 2, 3)
        assert tuple(frame[0, 0]) == (10, 20, 30)
        assert (frame[0, 1] == 0).all()
        assert (frame[1, 0] == 0).all()
        assert (frame[1, 1] == 0).all()
        assert np.array_equal(unpack_frame(frame, layout), codes)

    def test_all_zero_codes_make_zero_frame(self):
        layout = compute_layout(5, 4, 6)
        codes = np.zeros((5, 4, 6), dtype=np.uint8)
        assert not pack_frame(codes, layout).any()
        frame = np.zeros((layout.frame_height, layout.frame_width, 3), dtype=np.uint8)
        assert not unpack_frame(frame, layout).any()

    def test_fill_code_on_padding(self):
        layout = compute_layout(4, 3, 3, fill_code=77)
        codes = np.zeros((4, 3, 3), dtype=np.uint8)
        frame = pack_frame(codes, layout)
        occupied = np.zeros(frame.shape, dtype=bool)
        for zi in range(4):
            for yi in range(3):
                for xi in range(3):
                    c, px, py = voxel_to_pixel(zi, yi, xi, layout)
                    occupied[py, px, c] = True
        assert (frame[occupied] == 0).all()
        assert (frame[~occupied] == 77).all()

    def test_roundtrip_24_64_64(self):
        layout = compute_layout(24, 64, 64)
        rng = np.random.default_rng(1)
        codes = rng.integers(0, 256, size=(24, 64, 64), dtype=np.uint8)
        assert np.array_equal(unpack_frame(pack_frame(codes, layout), layout), codes)

    def test_roundtrip_1000_random_small_volumes(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            z, y, x = rng.integers(1, 9, size=3)
            layout = compute_layout(int(z), int(y), int(x))
            codes = rng.integers(0, 256, size=(z, y, x), dtype=np.uint8)
            assert np.array_equal(unpack_frame(pack_frame(codes, layout), layout), codes)

    def test_pack_agrees_with_mapping(self):
        layout = compute_layout(7, 5, 4)
        rng = np.random.default_rng(3)
        codes = rng.integers(0, 256, size=(7, 5, 4), dtype=np.uint8)
        frame = pack_frame(codes, layout)
        for zi in range(7):
            for yi in range(5):
                for xi in range(4):
                    c, px, py = voxel_to_pixel(zi, yi, xi, layout)
                    assert frame[py, px, c] == codes[zi, yi, xi]

    def test_dimension_mismatch_rejected(self):
        layout = compute_layout(3, 4, 4)
        with pytest.raises(ValueError):
            pack_frame(np.zeros((3, 4, 5), dtype=np.uint8), layout)
        with pytest.raises(ValueError):
            pack_frame(np.zeros((3, 4, 4), dtype=np.int32), layout)
        with pytest.raises(ValueError):
            unpack_frame(np.zeros((10, 10, 3), dtype=np.uint8), layout)


class TestField4D:
    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            Field4D(np.zeros((2, 2, 2)))

    def test_rejects_non_finite(self):
        values = np.zeros((1, 1, 2, 2))
        values[0, 0, 0, 0] = np.nan
        with pytest.raises(ValueError):
            Field4D(values)

    def test_dims_accessors(self):
        f = Field4D(np.zeros((2, 3, 4, 5)))
        assert f.dims == (2, 3, 4, 5)
        assert (f.t, f.z, f.y, f.x) == (2, 3, 4, 5)
