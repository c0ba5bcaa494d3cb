import numpy as np
import pytest

from focusfuse.components.fusion import (
    FusionConfig,
    FusionMethod,
    Granularity,
    SelectionChoice,
    decision_counts,
    fuse,
    fuse_contourlet_sf,
    fuse_detailed,
    fuse_spatial_sf,
    fuse_wavelet_max,
    fuse_wavelet_sf,
    select_by_sf,
)
from focusfuse.components.metrics import rmse_pair
from focusfuse.components.wavelet import DetailBands, WaveletDecomp, dwt2, idwt2
from focusfuse.utils.errors import ConfigError, DimensionError


ALL_METHODS = list(FusionMethod)


class TestSelectBySf:

    @pytest.mark.parametrize("sf_a, sf_b, expected", [
        (10.0, 5.0, SelectionChoice.TAKE_A),
        (5.0, 5.0, SelectionChoice.AVERAGE),
        (6.0, 5.0, SelectionChoice.AVERAGE),
        (5.0, 6.75, SelectionChoice.AVERAGE),
        (5.0, 6.8, SelectionChoice.TAKE_B),
    ])
    def test_branches(self, sf_a, sf_b, expected):
        assert select_by_sf(sf_a, sf_b, 1.75) == expected

    def test_zero_threshold(self):
        assert select_by_sf(1.0, 1.0, 0.0) == SelectionChoice.AVERAGE
        assert select_by_sf(1.1, 1.0, 0.0) == SelectionChoice.TAKE_A

    def test_negative_threshold(self):
        with pytest.raises(ConfigError):
            select_by_sf(1.0, 1.0, -0.5)


class TestConfig:

    def test_defaults(self):
        cfg = FusionConfig()

        assert cfg.method == FusionMethod.CONTOURLET_SF
        assert (cfg.block_rows, cfg.block_cols) == (8, 8)
        assert cfg.threshold == 1.75
        assert cfg.dfb_depths == (3,)
        assert cfg.granularity == Granularity.BLOCK

    def test_string_ids_coerced(self):
        cfg = FusionConfig(method="wavelet-sf", granularity="subband")

        assert cfg.method is FusionMethod.WAVELET_SF
        assert cfg.granularity is Granularity.SUBBAND

    @pytest.mark.parametrize("kwargs", [
        {"method": "bogus"},
        {"granularity": "pixel"},
        {"block_rows": 0},
        {"threshold": -1.0},
        {"wavelet_levels": 0},
        {"wavelet_levels": 40},
        {"pyr_levels": 40, "dfb_depths": (2,) * 40},
        {"wavelet_filter": "coif9"},
        {"pyr_levels": 2, "dfb_depths": (3,)},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            FusionConfig(**kwargs)


@pytest.mark.parametrize("method", ALL_METHODS)
def test_idempotence(rng, method):
    x = rng.uniform(0.0, 255.0, (128, 128))
    np.testing.assert_allclose(fuse(x, x, FusionConfig(method=method)), x, atol=1e-6, rtol=0)


@pytest.mark.parametrize("method", ALL_METHODS)
def test_output_keeps_input_dims(rng, method):
    a, b = rng.uniform(0.0, 255.0, (2, 45, 70))
    assert fuse(a, b, FusionConfig(method=method)).shape == (45, 70)


@pytest.mark.parametrize("method", ALL_METHODS)
def test_improves_on_synthetic_pair(synthetic_pair, method):
    gt, a, b = synthetic_pair
    fused = fuse(a, b, FusionConfig(method=method))

    assert rmse_pair(fused, gt) < min(rmse_pair(a, gt), rmse_pair(b, gt))


def test_dispatch_matches_direct_calls(rng):
    a, b = rng.uniform(0.0, 255.0, (2, 32, 32))

    for method, direct in [
        (FusionMethod.WAVELET_MAX, fuse_wavelet_max),
        (FusionMethod.SPATIAL_SF, fuse_spatial_sf),
        (FusionMethod.WAVELET_SF, fuse_wavelet_sf),
        (FusionMethod.CONTOURLET_SF, fuse_contourlet_sf),
    ]:
        np.testing.assert_array_equal(fuse(a, b, FusionConfig(method=method)), direct(a, b))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        fuse(np.zeros((64, 64)), np.zeros((64, 63)))


def test_deterministic_across_worker_counts(monkeypatch, synthetic_pair):
    _, a, b = synthetic_pair

    monkeypatch.setenv("FOCUSFUSE_MAX_WORKERS", "1")
    serial = fuse(a, b)
    monkeypatch.setenv("FOCUSFUSE_MAX_WORKERS", "4")
    parallel = fuse(a, b)

    np.testing.assert_array_equal(serial, parallel)


class TestWaveletMax:

    @staticmethod
    def _single_coefficient(approx: float, horizontal: float) -> np.ndarray:
        d = WaveletDecomp(
            levels=1,
            approx=np.array([[approx]]),
            details=(DetailBands(np.array([[horizontal]]), np.zeros((1, 1)), np.zeros((1, 1))),),
            original_shape=(2, 2),
            padded_shape=(2, 2),
        )
        return idwt2(d)

    def test_larger_magnitude_detail_and_mean_approximation(self):
        a = self._single_coefficient(4.0, 3.0)
        b = self._single_coefficient(6.0, -5.0)

        d = dwt2(fuse_wavelet_max(a, b))

        assert d.approx[0, 0] == pytest.approx(5.0)
        assert d.details[0].horizontal[0, 0] == pytest.approx(-5.0)

    def test_decisions_per_coefficient(self, rng):
        a, b = rng.normal(size=(2, 16, 16))
        result = fuse_detailed(a, b, FusionConfig(method="wavelet", wavelet_levels=2))

        assert sorted(result.decisions) == sorted(
            f"level{k}-{name}" for k in (1, 2) for name in ("horizontal", "vertical", "diagonal")
        )
        assert result.decisions["level1-diagonal"].shape == (8, 8)
        assert set(np.unique(result.decisions["level2-vertical"])) <= {0, 1}

    def test_equal_magnitude_ties_take_b(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[4.0, 3.0], [2.0, 1.0]])

        result = fuse_detailed(a, b, FusionConfig(method="wavelet"))
        fused = dwt2(result.image).details[0]
        expected = dwt2(b).details[0]

        for name in ("horizontal", "vertical", "diagonal"):
            assert np.all(result.decisions[f"level1-{name}"] == SelectionChoice.TAKE_B)
        np.testing.assert_allclose(fused.horizontal, expected.horizontal, atol=1e-12)
        np.testing.assert_allclose(fused.vertical, expected.vertical, atol=1e-12)


class TestSpatialSf:

    def test_sharp_block_copied_verbatim(self):
        a = np.full((8, 8), 100.0)
        b = np.where(np.indices((8, 8)).sum(axis=0) % 2, 200.0, 0.0)

        np.testing.assert_array_equal(fuse_spatial_sf(a, b), b)

    def test_exact_for_identical_inputs(self, rng):
        x = rng.uniform(0.0, 255.0, (30, 30))
        np.testing.assert_array_equal(fuse_spatial_sf(x, x), x)

    def test_decision_grid_shape(self, rng):
        a, b = rng.normal(size=(2, 16, 16))
        result = fuse_detailed(a, b, FusionConfig(method="sf"))

        assert result.decisions["image"].shape == (2, 2)

    def test_zero_threshold_decisions_ignore_common_scale(self, rng):
        a, b = rng.uniform(0.0, 255.0, (2, 64, 64))
        cfg = FusionConfig(method="sf", threshold=0.0)

        plain = fuse_detailed(a, b, cfg).decisions["image"]
        scaled = fuse_detailed(3.7 * a, 3.7 * b, cfg).decisions["image"]

        np.testing.assert_array_equal(plain, scaled)

    def test_blocks_come_from_a_b_or_their_mean(self, synthetic_pair):
        _, a, b = synthetic_pair
        result = fuse_detailed(a, b, FusionConfig(method="sf"))
        grid = result.decisions["image"]

        for r in range(grid.shape[0]):
            for c in range(grid.shape[1]):
                rs, cs = slice(8 * r, 8 * r + 8), slice(8 * c, 8 * c + 8)
                expected = {0: a[rs, cs], 1: b[rs, cs], 2: (a[rs, cs] + b[rs, cs]) / 2}[int(grid[r, c])]
                np.testing.assert_array_equal(result.image[rs, cs], expected)

    def test_average_branch_is_symmetric(self, rng):
        a = rng.uniform(0.0, 200.0, (32, 32))
        b = a + 30.0

        np.testing.assert_allclose(fuse_spatial_sf(a, b), fuse_spatial_sf(b, a), atol=1e-9)
        np.testing.assert_allclose(fuse_spatial_sf(a, b), a + 15.0, atol=1e-9)

    def test_non_square_blocks(self, rng):
        a, b = rng.normal(size=(2, 20, 30))
        result = fuse_detailed(a, b, FusionConfig(method="sf", block_rows=4, block_cols=16))

        assert result.decisions["image"].shape == (5, 2)


class TestSubbandSelection:

    def test_subband_granularity_takes_whole_subband(self, rng):
        a = rng.uniform(0.0, 255.0, (32, 32))
        b = np.full((32, 32), 128.0)
        result = fuse_detailed(a, b, FusionConfig(method="wavelet-sf", granularity="subband"))

        for decisions in result.decisions.values():
            np.testing.assert_array_equal(decisions, [[SelectionChoice.TAKE_A]])

        da, db, df = dwt2(a), dwt2(b), dwt2(result.image)
        np.testing.assert_allclose(df.details[0].diagonal, da.details[0].diagonal, atol=1e-9)
        np.testing.assert_allclose(df.approx, (da.approx + db.approx) / 2, atol=1e-9)

    def test_contourlet_default_has_eight_subbands(self, rng):
        a, b = rng.uniform(0.0, 255.0, (2, 64, 64))
        result = fuse_detailed(a, b)

        assert sorted(result.decisions) == sorted(f"level0-dir{j}" for j in range(8))

    def test_contourlet_two_levels(self, rng):
        a, b = rng.uniform(0.0, 255.0, (2, 64, 64))
        result = fuse_detailed(a, b, FusionConfig(pyr_levels=2, dfb_depths=(2, 3), granularity="subband"))

        assert len(result.decisions) == 4 + 8
        assert all(d.shape == (1, 1) for d in result.decisions.values())


def test_decision_counts(rng):
    a, b = rng.normal(size=(2, 16, 16))
    result = fuse_detailed(a, b, FusionConfig(method="sf"))
    counts = decision_counts(result)

    assert set(counts) == {"take_a", "take_b", "average"}
    assert sum(counts.values()) == 4
