import io
import math
import random

import numpy as np
import pytest

from optics_coverage.geometry import Disc, Point2D
from optics_coverage.metrics import (
    active_ratio,
    analytic_cr,
    coverage_grid,
    grid_cr,
    summarize_experiment,
    write_coverage_grid_csv,
    write_table_csv,
)


def random_discs(n, rng, span=50.0, radius=5.0):
    return [
        Disc(Point2D(rng.uniform(0, span), rng.uniform(0, span)), radius)
        for _ in range(n)
    ]


class TestActiveRatio:
    def test_table_first_row(self):
        assert active_ratio(33, 100) == 33

    def test_fractional(self):
        assert active_ratio(152, 500) == pytest.approx(30.4)

    def test_zero(self):
        assert active_ratio(0, 100) == 0

    def test_bad_deployed(self):
        with pytest.raises(ValueError):
            active_ratio(1, 0)


class TestAnalyticCr:
    def test_reference_value(self):
        assert analytic_cr(31, 5, 2500) == pytest.approx(97.389, abs=0.001)

    def test_zero_actives(self):
        assert analytic_cr(0, 5, 2500) == 0

    def test_uncapped_above_100(self):
        assert analytic_cr(32, 5, 2500) == pytest.approx(100.531, abs=0.001)

    def test_linear_in_active_count(self):
        one = analytic_cr(1, 5, 2500)
        for k in (2, 7, 40):
            assert analytic_cr(k, 5, 2500) == pytest.approx(k * one)


class TestGridCr:
    def test_full_cover(self):
        disc = Disc(Point2D(25, 25), 40)
        assert grid_cr([disc], (50, 50), 200) == 100

    def test_no_discs(self):
        assert grid_cr([], (50, 50), 200) == 0

    def test_single_interior_disc(self):
        disc = Disc(Point2D(25, 25), 5)
        estimate = grid_cr([disc], (50, 50), 500)
        assert estimate == pytest.approx(100 * math.pi * 25 / 2500, abs=0.1)

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            grid_cr([], (50, 50), 9)

    def test_convergence_with_resolution(self):
        rng = random.Random(31)
        discs = random_discs(30, rng)
        coarse = grid_cr(discs, (50, 50), 500)
        fine = grid_cr(discs, (50, 50), 1000)
        assert abs(coarse - fine) < 0.5

    def test_disc_outside_region_ignored(self):
        disc = Disc(Point2D(200, 200), 5)
        assert grid_cr([disc], (50, 50), 100) == 0

    def test_never_exceeds_capped_analytic(self):
        rng = random.Random(77)
        for trial in range(5):
            n = rng.randint(20, 60)
            discs = random_discs(n, rng)
            g = grid_cr(discs, (50, 50), 500)
            a = analytic_cr(n, 5, 2500)
            assert g <= min(100.0, a)


class TestCoverageGrid:
    def test_shape_and_dtype(self):
        grid = coverage_grid([], (50, 50), 64)
        assert grid.shape == (64, 64)
        assert grid.dtype == bool

    def test_csv_export(self):
        grid = coverage_grid([Disc(Point2D(5, 5), 4)], (10, 10), 10)
        buf = io.StringIO()
        write_coverage_grid_csv(grid, buf)
        rows = buf.getvalue().strip().splitlines()
        assert len(rows) == 10
        parsed = np.array([[int(v) for v in row.split(",")] for row in rows])
        assert parsed.sum() == grid.sum()
        assert set(np.unique(parsed)) <= {0, 1}


TABLE_TRIALS = {
    100: (27, 32, 40),
    150: (49, 51, 62),
    200: (53, 57, 67),
    250: (58, 63, 86),
    300: (77, 82, 87),
    350: (91, 95, 104),
    400: (109, 127, 130),
    450: (121, 128, 152),
    500: (140, 152, 163),
}
EXPECTED_N = {100: 33, 150: 54, 200: 59, 250: 69, 300: 82, 350: 97, 400: 122, 450: 134, 500: 152}
EXPECTED_R = {100: 33, 150: 36, 200: 30, 250: 28, 300: 28, 350: 28, 400: 31, 450: 30, 500: 31}


class TestSummarizeExperiment:
    def test_first_row(self):
        summary = summarize_experiment({100: (27, 32, 40)})
        row = summary.rows[0]
        assert row.n_display == 33
        assert row.r_display == 33

    def test_fourth_row(self):
        summary = summarize_experiment({250: (58, 63, 86)})
        row = summary.rows[0]
        assert row.n_display == 69
        assert row.r_display == 28

    def test_single_trial_passthrough(self):
        summary = summarize_experiment({300: (81,)})
        assert summary.rows[0].n_display == 81

    def test_full_table_reproduced(self):
        summary = summarize_experiment(TABLE_TRIALS)
        for row in summary.rows:
            assert row.n_display == EXPECTED_N[row.deployed], row
            assert row.r_display == EXPECTED_R[row.deployed], row
        assert summary.r_avg == pytest.approx(30.5555, abs=1e-3)
        assert math.floor(summary.r_avg * 100) / 100 == 30.55
        assert summary.r_avg_display == 31

    def test_rows_sorted_by_size(self):
        summary = summarize_experiment({300: (1,), 100: (1,), 200: (1,)})
        assert [r.deployed for r in summary.rows] == [100, 200, 300]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize_experiment({})
        with pytest.raises(ValueError):
            summarize_experiment({100: ()})

    def test_csv_layout(self):
        summary = summarize_experiment(TABLE_TRIALS)
        buf = io.StringIO()
        write_table_csv(summary, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "D,n1,n2,n3,N,R"
        assert lines[1] == "100,27,32,40,33,33"
        assert lines[-1] == "R_avg,,,,30.55,31"
