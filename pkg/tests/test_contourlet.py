from dataclasses import replace

import numpy as np
import pytest

from focusfuse.components.contourlet import (
    MAX_PYR_LEVELS,
    LaplacianPyramid,
    ct_forward,
    ct_inverse,
    dfb_analysis,
    dfb_leaf_shapes,
    dfb_synthesis,
    fan_merge,
    fan_split,
    lp_analysis,
    lp_synthesis,
    subband_energies,
)
from focusfuse.utils.errors import ConfigError, DimensionError, StructureError


class TestLaplacianPyramid:

    def test_constant_image(self):
        pyr = lp_analysis(np.full((32, 32), 10.0), levels=2)

        np.testing.assert_allclose(pyr.coarse, 10.0, atol=1e-12)
        for band in pyr.bandpass:
            np.testing.assert_allclose(band, 0.0, atol=1e-12)

    def test_level_shapes(self):
        pyr = lp_analysis(np.zeros((64, 64)), levels=2)

        assert [band.shape for band in pyr.bandpass] == [(64, 64), (32, 32)]
        assert pyr.coarse.shape == (16, 16)

    @pytest.mark.parametrize("levels", [1, 2, 3])
    def test_perfect_reconstruction(self, random_image, levels):
        recon = lp_synthesis(lp_analysis(random_image, levels))
        np.testing.assert_allclose(recon, random_image, atol=1e-12, rtol=0)

    def test_odd_dims_cropped_back(self, rng):
        img = rng.uniform(0.0, 255.0, (45, 31))
        recon = lp_synthesis(lp_analysis(img, 2))

        assert recon.shape == img.shape
        np.testing.assert_allclose(recon, img, atol=1e-12, rtol=0)

    def test_zero_pyramid(self):
        pyr = LaplacianPyramid(1, (np.zeros((8, 8)),), np.zeros((4, 4)), (8, 8))
        np.testing.assert_array_equal(lp_synthesis(pyr), np.zeros((8, 8)))

    def test_dropping_coarse_leaves_bandpass_detail(self, random_image):
        pyr = lp_analysis(random_image, 1)
        lowpass_part = lp_synthesis(replace(pyr, bandpass=(np.zeros_like(pyr.bandpass[0]),)))
        without_coarse = lp_synthesis(replace(pyr, coarse=np.zeros_like(pyr.coarse)))

        np.testing.assert_allclose(without_coarse, random_image - lowpass_part, atol=1e-9)

    def test_level_mismatch(self):
        pyr = LaplacianPyramid(2, (np.zeros((8, 8)), np.zeros((3, 4))), np.zeros((2, 2)), (8, 8))
        with pytest.raises(StructureError):
            lp_synthesis(pyr)

    def test_invalid_levels(self):
        with pytest.raises(ConfigError):
            lp_analysis(np.zeros((8, 8)), 0)
        with pytest.raises(ConfigError):
            lp_analysis(np.zeros((8, 8)), MAX_PYR_LEVELS + 1)
        with pytest.raises(ConfigError):
            ct_forward(np.zeros((8, 8)), MAX_PYR_LEVELS + 1, (0,) * (MAX_PYR_LEVELS + 1))


class TestFanFilterBank:

    def test_shapes(self, random_image):
        ch0, ch1 = fan_split(random_image)

        assert ch0.shape == (64, 32)
        assert ch1.shape == (64, 32)
        assert ch0.size + ch1.size == random_image.size

    def test_perfect_reconstruction(self, random_image):
        np.testing.assert_allclose(fan_merge(*fan_split(random_image)), random_image, atol=1e-12, rtol=0)

    def test_non_square(self, rng):
        img = rng.normal(size=(6, 10))
        np.testing.assert_allclose(fan_merge(*fan_split(img)), img, atol=1e-12, rtol=0)

    def test_zero_channels(self):
        np.testing.assert_array_equal(fan_merge(np.zeros((4, 2)), np.zeros((4, 2))), np.zeros((4, 4)))

    def test_linearity(self, rng):
        x = rng.normal(size=(16, 16))
        y = rng.normal(size=(16, 16))
        x0, x1 = fan_split(x)
        y0, y1 = fan_split(y)
        s0, s1 = fan_split(x + y)

        np.testing.assert_allclose(s0, x0 + y0, atol=1e-12)
        np.testing.assert_allclose(s1, x1 + y1, atol=1e-12)

    def test_odd_width(self):
        with pytest.raises(DimensionError):
            fan_split(np.zeros((4, 5)))

    def test_channel_mismatch(self):
        with pytest.raises(StructureError):
            fan_merge(np.zeros((4, 2)), np.zeros((4, 3)))


class TestDirectionalFilterBank:

    def test_depth_zero_is_identity(self, random_image):
        subbands = dfb_analysis(random_image, 0)

        assert len(subbands) == 1
        np.testing.assert_array_equal(subbands[0], random_image)

    def test_depth_three_shapes(self, random_image):
        subbands = dfb_analysis(random_image, 3)

        assert [s.shape for s in subbands] == [(16, 32)] * 4 + [(32, 16)] * 4
        assert sum(s.size for s in subbands) == 4096

    @pytest.mark.parametrize("depth", [0, 1, 2, 3, 4])
    def test_leaf_shapes_match_analysis(self, random_image, depth):
        subbands = dfb_analysis(random_image, depth)

        assert [s.shape for s in subbands] == dfb_leaf_shapes(random_image.shape, depth)
        assert sum(s.size for s in subbands) == random_image.size

    @pytest.mark.parametrize("depth", [1, 2, 3, 4])
    @pytest.mark.parametrize("shape", [(64, 64), (32, 96)])
    def test_perfect_reconstruction(self, rng, depth, shape):
        band = rng.uniform(-50.0, 50.0, shape)
        np.testing.assert_allclose(dfb_synthesis(dfb_analysis(band, depth)), band, atol=1e-9, rtol=0)

    def test_linearity(self, rng):
        x = rng.normal(size=(32, 32))
        y = rng.normal(size=(32, 32))
        for sx, sy, sxy in zip(dfb_analysis(x, 3), dfb_analysis(y, 3), dfb_analysis(x - 2 * y, 3)):
            np.testing.assert_allclose(sxy, sx - 2 * sy, atol=1e-9)

    def test_zero_subbands(self):
        zeros = [np.zeros(shape) for shape in dfb_leaf_shapes((16, 16), 2)]
        np.testing.assert_array_equal(dfb_synthesis(zeros), np.zeros((16, 16)))

    def test_indivisible_band(self):
        with pytest.raises(DimensionError):
            dfb_analysis(np.zeros((20, 20)), 3)

    def test_depth_out_of_range(self):
        with pytest.raises(ConfigError):
            dfb_analysis(np.zeros((64, 64)), 5)

    def test_bad_cardinality(self):
        with pytest.raises(StructureError):
            dfb_synthesis([np.zeros((8, 4))] * 3)

    def test_bad_subband_shape(self):
        subbands = dfb_analysis(np.zeros((32, 32)), 3)
        subbands[5] = np.zeros((8, 8))
        with pytest.raises(StructureError):
            dfb_synthesis(subbands)


class TestContourlet:

    def test_default_config(self, random_image):
        d = ct_forward(random_image)

        assert d.lowpass.shape == (32, 32)
        assert len(d.directional) == 1
        assert len(d.directional[0]) == 8
        assert sum(s.size for s in d.directional[0]) == 4096

    @pytest.mark.parametrize("config", [(1, (3,)), (2, (2, 3))])
    @pytest.mark.parametrize("size", [64, 128, 256])
    def test_perfect_reconstruction(self, rng, config, size):
        img = rng.uniform(0.0, 255.0, (size, size))
        np.testing.assert_allclose(ct_inverse(ct_forward(img, *config)), img, atol=1e-9, rtol=0)

    def test_odd_dims_cropped_back(self, rng):
        img = rng.uniform(0.0, 255.0, (100, 90))
        recon = ct_inverse(ct_forward(img, 2, (2, 3)))

        assert recon.shape == img.shape
        np.testing.assert_allclose(recon, img, atol=1e-9, rtol=0)

    @pytest.mark.parametrize("config", [(1, (3,)), (2, (2, 3))])
    def test_directional_stage_is_critically_sampled(self, random_image, config):
        d = ct_forward(random_image, *config)

        pyramid_count = d.lowpass.size
        for i, level in enumerate(d.directional):
            rows, cols = d.level_shape(i)
            assert sum(s.size for s in level) == rows * cols
            pyramid_count += rows * cols

        assert d.coefficient_count() == pyramid_count

    def test_levels_ordered_coarse_to_fine(self, random_image):
        d = ct_forward(random_image, 2, (2, 3))

        assert d.level_shape(0) == (32, 32)
        assert d.level_shape(1) == (64, 64)
        assert len(d.directional[0]) == 4
        assert len(d.directional[1]) == 8

    def test_constant_image(self):
        d = ct_forward(np.full((64, 64), 42.0), 2, (2, 3))

        np.testing.assert_allclose(d.lowpass, 42.0, atol=1e-9)
        for level in d.directional:
            for band in level:
                np.testing.assert_allclose(band, 0.0, atol=1e-9)

    def test_linearity(self, rng):
        x = rng.normal(size=(32, 32))
        y = rng.normal(size=(32, 32))
        dx, dy, dxy = ct_forward(x), ct_forward(y), ct_forward(x + 3 * y)

        np.testing.assert_allclose(dxy.lowpass, dx.lowpass + 3 * dy.lowpass, atol=1e-9)
        for sx, sy, sxy in zip(dx.directional[0], dy.directional[0], dxy.directional[0]):
            np.testing.assert_allclose(sxy, sx + 3 * sy, atol=1e-9)

    def test_zero_decomposition(self, random_image):
        d = ct_forward(random_image)
        zero = replace(
            d,
            lowpass=np.zeros_like(d.lowpass),
            directional=tuple(tuple(np.zeros_like(s) for s in level) for level in d.directional),
        )
        np.testing.assert_array_equal(ct_inverse(zero), np.zeros_like(random_image))

    def test_subband_energies(self, random_image):
        d = ct_forward(random_image)
        energies = subband_energies(d)

        assert len(energies) == 1
        assert len(energies[0]) == 8
        assert sum(energies[0]) == pytest.approx(sum(np.sum(s ** 2) for s in d.directional[0]))

    def test_depth_count_mismatch(self, random_image):
        with pytest.raises(ConfigError):
            ct_forward(random_image, 2, (3,))

    def test_missing_subband(self, random_image):
        d = ct_forward(random_image)
        with pytest.raises(StructureError):
            ct_inverse(replace(d, directional=(d.directional[0][:7],)))
