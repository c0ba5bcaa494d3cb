import numpy as np

from focusfuse.commands.bench import BENCH_METHODS, bench_rows
from focusfuse.commands.selfcheck import brute_force_sf, grating_diagnostic
from focusfuse.components.synth import FocusMask, test_chart as make_chart


def test_bench_rows_cover_every_method():
    gt = make_chart(64, 64, 0)
    rows, images = bench_rows(gt, FocusMask("hhalf"), 1.5)

    assert [row["method"] for row in rows] == [m.value for m in BENCH_METHODS]
    assert set(images) == {"gt", "a", "b"} | {f"fused-{m.value}" for m in BENCH_METHODS}
    for row in rows:
        assert abs(row["rmse"] - (row["rmse1"] + row["rmse2"]) / 2) <= 1e-12
        assert row["rmse_gt"] >= 0


def test_bench_images_are_eight_bit():
    _, images = bench_rows(make_chart(64, 64, 0), FocusMask("vhalf"), 2.0)

    for img in images.values():
        np.testing.assert_array_equal(img, np.round(img))
        assert img.min() >= 0 and img.max() <= 255


def test_grating_diagnostic():
    dominant, share = grating_diagnostic((64, 64))

    assert 0 <= dominant < 8
    assert 1 / 8 <= share <= 1


def test_brute_force_sf_by_hand():
    assert brute_force_sf(np.array([[0.0, 1.0], [1.0, 0.0]])) == 1.0
