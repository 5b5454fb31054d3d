import io
import math
import random

import numpy as np
import pytest

from gazekit.errors import ConfigError, NumericError
from gazekit.features import GazeEvent
from gazekit.heatmap import (
    HeatmapGrid,
    accumulate,
    grid_from_record,
    grid_to_record,
    normalize_for_display,
    read_grid_text,
    smooth,
    write_grid_text,
    write_pgm,
)
from gazekit.ingest import FIXATION, SACCADE

from oracles import gaussian_reference_smooth


def fixation(x, y, duration, idx=1):
    return GazeEvent(
        movement_type=FIXATION,
        event_index=idx,
        t_begin=0,
        t_end=duration,
        duration=duration,
        start_point=(x, y),
        end_point=(x, y),
        centroid=(x, y),
        activity_id="Video",
    )


def random_grid(rng, h=20, w=30):
    cells = np.array([[rng.uniform(0, 100) for _ in range(w)] for _ in range(h)])
    return HeatmapGrid(
        width_cells=w, height_cells=h, screen_w=1920.0, screen_h=1080.0,
        cells=cells, total_mass=float(cells.sum()),
    )


class TestAccumulate:
    def test_single_fixation_single_cell(self):
        grid = accumulate([fixation(960.0, 540.0, 200)])
        assert grid.total_mass == 200.0
        assert grid.cells.sum() == 200.0
        # (960, 540) on a 1920x1080 screen with 96x54 cells -> cell (48, 27)
        assert grid.cells[27, 48] == 200.0
        assert np.count_nonzero(grid.cells) == 1

    def test_two_fixations_same_cell_sum(self):
        grid = accumulate([fixation(100.0, 100.0, 150, idx=1), fixation(101.0, 101.0, 150, idx=2)])
        assert grid.cells.max() == 300.0
        assert np.count_nonzero(grid.cells) == 1

    def test_total_mass_equals_duration_sum_exactly(self):
        rng = random.Random(5)
        fixations = [
            fixation(rng.uniform(0, 1919), rng.uniform(0, 1079), rng.randrange(1, 1000), idx=i)
            for i in range(500)
        ]
        grid = accumulate(fixations)
        # Durations are integer ms; float accumulation of ints < 2^53 is exact.
        assert grid.cells.sum() == sum(e.duration for e in fixations)
        assert grid.total_mass == sum(e.duration for e in fixations)

    def test_outliers_clipped_to_border_and_counted(self):
        grid = accumulate([fixation(-10.0, 540.0, 100, idx=1), fixation(5000.0, 540.0, 50, idx=2)])
        assert grid.outliers_clipped == 2
        assert grid.cells[27, 0] == 100.0
        assert grid.cells[27, 95] == 50.0

    def test_saccades_ignored(self):
        sac = GazeEvent(SACCADE, 1, 0, 50, 50, (0.0, 0.0), (10.0, 10.0), (5.0, 5.0), "Video")
        grid = accumulate([sac])
        assert grid.total_mass == 0.0

    def test_count_mode(self):
        grid = accumulate(
            [fixation(10.0, 10.0, 100, idx=1), fixation(10.0, 10.0, 900, idx=2)],
            weight_mode="count",
        )
        assert grid.total_mass == 2.0

    def test_zero_area_grid_config_error(self):
        with pytest.raises(ConfigError):
            accumulate([], width_cells=0)
        with pytest.raises(ConfigError):
            accumulate([], screen_w=0.0)


class TestSmooth:
    def test_sigma_zero_is_identity(self):
        rng = random.Random(1)
        grid = random_grid(rng)
        out = smooth(grid, 0.0)
        assert np.array_equal(out.cells, grid.cells)

    def test_negative_sigma_domain_error(self):
        with pytest.raises(NumericError):
            smooth(random_grid(random.Random(2)), -1.0)

    def test_impulse_mass_conserved_argmax_fixed(self):
        cells = np.zeros((9, 9))
        cells[4, 4] = 1000.0
        grid = HeatmapGrid(9, 9, 1920.0, 1080.0, cells, 1000.0)
        out = smooth(grid, 2.0)
        assert out.cells.sum() == pytest.approx(1000.0, rel=1e-9)
        assert np.unravel_index(np.argmax(out.cells), out.cells.shape) == (4, 4)
        # Symmetric impulse response
        assert out.cells[4, 3] == pytest.approx(out.cells[4, 5], rel=1e-12)
        assert out.cells[3, 4] == pytest.approx(out.cells[5, 4], rel=1e-12)

    def test_mass_conservation_random_grids(self):
        rng = random.Random(7)
        for _ in range(100):
            grid = random_grid(rng, h=rng.randrange(3, 25), w=rng.randrange(3, 25))
            sigma = rng.uniform(0.1, 6.0)
            out = smooth(grid, sigma)
            before, after = grid.cells.sum(), out.cells.sum()
            assert abs(before - after) <= 1e-9 * before

    def test_matches_dense_scatter_oracle(self):
        rng = random.Random(9)
        for sigma in (0.8, 1.7, 3.0):
            grid = random_grid(rng, h=12, w=15)
            expected = gaussian_reference_smooth(grid.cells, sigma)
            out = smooth(grid, sigma)
            assert np.allclose(out.cells, expected, rtol=1e-9, atol=1e-9)

    def test_translation_equivariance_in_interior(self):
        sigma = 1.5
        radius = max(1, int(math.ceil(4 * sigma)))
        h = w = 2 * radius + 15
        cells = np.zeros((h, w))
        cells[radius + 3, radius + 4] = 500.0
        base = smooth(HeatmapGrid(w, h, 1920.0, 1080.0, cells, 500.0), sigma).cells
        shifted_in = np.roll(cells, (1, 1), axis=(0, 1))
        shifted_out = smooth(HeatmapGrid(w, h, 1920.0, 1080.0, shifted_in, 500.0), sigma).cells
        # Away from boundaries the response just moves with the impulse.
        assert np.allclose(
            shifted_out[radius + 1 : -radius, radius + 1 : -radius],
            base[radius : -radius - 1, radius : -radius - 1],
            rtol=1e-12,
            atol=1e-15,
        )


class TestNormalizeForDisplay:
    def test_max_becomes_one(self):
        rng = random.Random(3)
        grid = random_grid(rng)
        out = normalize_for_display(grid)
        assert out.cells.max() == 1.0
        assert out.normalized

    def test_all_zero_stays_zero(self):
        grid = HeatmapGrid(4, 4, 100.0, 100.0, np.zeros((4, 4)), 0.0)
        out = normalize_for_display(grid)
        assert np.array_equal(out.cells, np.zeros((4, 4)))

    def test_ordering_preserved(self):
        rng = random.Random(4)
        grid = random_grid(rng, h=6, w=6)
        out = normalize_for_display(grid)
        flat_in = grid.cells.ravel()
        flat_out = out.cells.ravel()
        for i in range(0, len(flat_in) - 1, 2):
            assert (flat_in[i] < flat_in[i + 1]) == (flat_out[i] < flat_out[i + 1])

    def test_argmax_preserved(self):
        rng = random.Random(12)
        grid = random_grid(rng)
        out = normalize_for_display(grid)
        assert np.argmax(out.cells) == np.argmax(grid.cells)


class TestGridIO:
    def test_text_round_trip(self):
        rng = random.Random(8)
        grid = HeatmapGrid(
            width_cells=30, height_cells=20, screen_w=1920.0, screen_h=1080.0,
            cells=random_grid(rng).cells, total_mass=123.456,
            participant_id="P003", activity_id="Video", outliers_clipped=2,
        )
        buf = io.StringIO()
        write_grid_text(grid, buf)
        buf.seek(0)
        back = read_grid_text(buf)
        assert np.array_equal(back.cells, grid.cells)
        assert back.participant_id == "P003"
        assert back.activity_id == "Video"
        assert back.total_mass == grid.total_mass
        assert back.outliers_clipped == 2

    def test_record_round_trip(self):
        rng = random.Random(9)
        grid = random_grid(rng)
        back = grid_from_record(grid_to_record(grid))
        assert np.array_equal(back.cells, grid.cells)
        assert back.total_mass == grid.total_mass

    def test_pgm_format(self):
        cells = np.array([[0.0, 127.5], [255.0, 255.0]])
        grid = HeatmapGrid(2, 2, 100.0, 100.0, cells, float(cells.sum()))
        buf = io.StringIO()
        write_pgm(grid, buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "P2"
        assert lines[1] == "2 2"
        assert lines[2] == "255"
        assert lines[3].split() == ["0", "128"]
        assert lines[4].split() == ["255", "255"]
