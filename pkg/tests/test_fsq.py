import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lfsc import (
    CodeSequence,
    FsqSpec,
    LatentSequence,
    code_to_indices,
    dequantize_dim,
    dequantize_frames,
    indices_to_code,
    quantize_dim,
    quantize_frames,
)
from lfsc.errors import InvalidCodeError, InvalidInputError, ShapeError
from lfsc.fsq import LEVELS_1000, LEVELS_4032

DEFAULT = FsqSpec()


def bounding_oracle(z, L):
    # direct evaluation of the documented rounding rule
    return math.floor(0.5 * (L - 1) * math.tanh(z) + 0.5 * (L - 1) + 0.5)


class TestSpec:
    def test_default_geometry(self):
        assert DEFAULT.num_codebooks == 8
        assert DEFAULT.levels == (8, 7, 6, 6)
        assert DEFAULT.codes_per_codebook == 2016
        assert DEFAULT.code_bit_width == 11
        assert DEFAULT.latent_dim == 32

    def test_standin_specs(self):
        assert math.prod(LEVELS_1000) == 1000
        assert math.prod(LEVELS_4032) == 4032
        assert FsqSpec(levels=LEVELS_1000).code_bit_width == 10
        assert FsqSpec(levels=LEVELS_4032).code_bit_width == 12

    def test_bit_width_is_minimal(self):
        for levels in [(2,), (2, 2), (3, 3), (8, 7, 6, 6), (16, 16, 16, 16)]:
            spec = FsqSpec(num_codebooks=1, levels=levels)
            w = spec.code_bit_width
            assert 2**w >= spec.codes_per_codebook
            assert 2 ** (w - 1) < spec.codes_per_codebook

    def test_rejects_bad_levels(self):
        with pytest.raises(InvalidInputError):
            FsqSpec(levels=(8, 1, 6))
        with pytest.raises(InvalidInputError):
            FsqSpec(num_codebooks=0)


class TestQuantizeDim:
    def test_center_of_odd_levels(self):
        assert quantize_dim(0.0, 7) == 3

    def test_saturates_high(self):
        assert quantize_dim(10.0, 8) == 7

    def test_derived_example(self):
        # bound = 2.5*tanh(0.2) + 2.5 = 2.9934, rounds half up to 3
        assert bounding_oracle(0.2, 6) == 3
        assert quantize_dim(0.2, 6) == 3

    def test_even_levels_round_half_up_at_center(self):
        for L in (2, 4, 6, 8, 16):
            assert quantize_dim(0.0, L) == L // 2

    def test_rejects_non_finite(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(InvalidInputError):
                quantize_dim(bad, 6)

    @given(
        st.floats(-50, 50), st.floats(-50, 50), st.integers(min_value=2, max_value=16)
    )
    def test_monotone(self, z1, z2, L):
        lo, hi = sorted((z1, z2))
        assert quantize_dim(lo, L) <= quantize_dim(hi, L)

    @given(st.floats(allow_nan=False, allow_infinity=False), st.integers(2, 16))
    def test_range(self, z, L):
        assert 0 <= quantize_dim(z, L) <= L - 1

    def test_extreme_inputs_stay_in_range(self):
        for L in range(2, 17):
            assert quantize_dim(1e9, L) == L - 1
            assert quantize_dim(-1e9, L) == 0


class TestDequantizeDim:
    def test_center_maps_to_zero(self):
        assert dequantize_dim(3, 7) == 0.0

    def test_lowest_level(self):
        assert dequantize_dim(0, 6) == -1.0

    def test_derived_example(self):
        # (2*3 - 5)/5 by the grid formula
        assert dequantize_dim(3, 6) == pytest.approx(0.2)

    def test_grid_uniform_in_unit_interval(self):
        for L in range(2, 17):
            grid = [dequantize_dim(i, L) for i in range(L)]
            assert grid[0] == -1.0 and grid[-1] == 1.0
            steps = np.diff(grid)
            assert np.allclose(steps, 2.0 / (L - 1))
            assert all(-1.0 <= g <= 1.0 for g in grid)

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidCodeError):
            dequantize_dim(6, 6)
        with pytest.raises(InvalidCodeError):
            dequantize_dim(-1, 6)


class TestCodePacking:
    def test_all_zero(self):
        assert indices_to_code([0, 0, 0, 0], DEFAULT) == 0

    def test_maximal(self):
        assert indices_to_code([7, 6, 5, 5], DEFAULT) == 2015

    def test_derived_example_against_enumeration(self):
        # brute-force the full mixed-radix enumeration once
        order = []
        for i3 in range(6):
            for i2 in range(6):
                for i1 in range(7):
                    for i0 in range(8):
                        order.append((i0, i1, i2, i3))
        assert order.index((3, 2, 1, 4)) == 1419
        assert indices_to_code([3, 2, 1, 4], DEFAULT) == 1419
        assert code_to_indices(1419, DEFAULT) == [3, 2, 1, 4]

    def test_inverse_examples(self):
        assert code_to_indices(0, DEFAULT) == [0, 0, 0, 0]
        assert code_to_indices(2015, DEFAULT) == [7, 6, 5, 5]

    @pytest.mark.parametrize(
        "levels", [(8, 7, 6, 6), LEVELS_1000, LEVELS_4032, (2,), (16, 3)]
    )
    def test_bijection_exhaustive(self, levels):
        spec = FsqSpec(num_codebooks=1, levels=levels)
        seen = set()
        for code in range(spec.codes_per_codebook):
            idx = code_to_indices(code, spec)
            assert indices_to_code(idx, spec) == code
            seen.add(tuple(idx))
        assert len(seen) == spec.codes_per_codebook

    def test_rejects_bad_indices(self):
        with pytest.raises(InvalidCodeError):
            indices_to_code([8, 0, 0, 0], DEFAULT)
        with pytest.raises(ShapeError):
            indices_to_code([0, 0, 0], DEFAULT)
        with pytest.raises(InvalidCodeError):
            code_to_indices(2016, DEFAULT)
        with pytest.raises(InvalidCodeError):
            code_to_indices(-1, DEFAULT)


class TestFrames:
    def test_all_zero_latent(self):
        latent = LatentSequence(np.zeros((3, 32)))
        codes = quantize_frames(latent, DEFAULT)
        # z = 0 rounds half up per level: [4, 3, 3, 3]
        expected = indices_to_code([4, 3, 3, 3], DEFAULT)
        assert expected == 1204
        assert np.all(codes.codes == expected)

    def test_saturated_latent(self):
        latent = LatentSequence(np.full((2, 32), 10.0))
        codes = quantize_frames(latent, DEFAULT)
        assert np.all(codes.codes == 2015)

    def test_random_latent_matches_scalar_composition(self):
        rng = np.random.default_rng(3)
        values = rng.normal(0, 2, size=(5, 32))
        codes = quantize_frames(LatentSequence(values), DEFAULT)
        for f in range(5):
            for c in range(8):
                idx = [
                    quantize_dim(values[f, 4 * c + d], DEFAULT.levels[d])
                    for d in range(4)
                ]
                assert codes.codes[f, c] == indices_to_code(idx, DEFAULT)

    def test_width_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            quantize_frames(LatentSequence(np.zeros((2, 31))), DEFAULT)

    def test_dequantize_all_zero_codes(self):
        codes = CodeSequence(np.zeros((2, 8), dtype=int), DEFAULT)
        latent = dequantize_frames(codes, DEFAULT)
        assert np.all(latent.values == -1.0)

    def test_dequantize_maximal_code(self):
        codes = CodeSequence(np.full((1, 8), 2015), DEFAULT)
        latent = dequantize_frames(codes, DEFAULT)
        assert np.all(latent.values == 1.0)

    def test_dequantize_derived_example(self):
        codes = CodeSequence(np.full((1, 8), 1419), DEFAULT)
        latent = dequantize_frames(codes, DEFAULT)
        expected = [-1 / 7, -1 / 3, -3 / 5, 3 / 5]
        assert np.allclose(latent.values.reshape(8, 4), expected)

    def test_dequantize_output_bounded(self):
        rng = np.random.default_rng(11)
        codes = CodeSequence(rng.integers(0, 2016, size=(20, 8)), DEFAULT)
        latent = dequantize_frames(codes, DEFAULT)
        assert latent.values.min() >= -1.0 and latent.values.max() <= 1.0

    def test_invalid_code_rejected(self):
        with pytest.raises(InvalidCodeError):
            CodeSequence(np.full((1, 8), 2016), DEFAULT)


class TestGridFixedPoint:
    @pytest.mark.parametrize("L", range(2, 17))
    def test_preimage_of_every_cell(self, L):
        # constructed pre-images: pull each grid value inward before atanh
        eps = 1e-9
        for i in range(L):
            grid = (2 * i - (L - 1)) / (L - 1)
            z = math.atanh(grid * (1 - eps))
            assert quantize_dim(z, L) == i

    def test_quantize_dequantize_codes_stable_through_preimage(self):
        rng = np.random.default_rng(5)
        codes = CodeSequence(rng.integers(0, 2016, size=(10, 8)), DEFAULT)
        latent = dequantize_frames(codes, DEFAULT)
        pre = np.arctanh(latent.values * (1 - 1e-9))
        again = quantize_frames(LatentSequence(pre), DEFAULT)
        assert np.array_equal(codes.codes, again.codes)
