"""Sample estimators, file ingestion, and Monte Carlo verification."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailbounds import (
    Exponential,
    Generic,
    HalfNormal,
    InvalidInput,
    Sample,
    monte_carlo_verify,
    verify_sample,
)

FIXTURE = Path(__file__).parent / "data" / "sample5.txt"


class TestSampleConstruction:
    def test_sorted_immutable_storage(self):
        sample = Sample([3.0, 1.0, 2.0])
        assert sample.n == 3
        assert list(sample.values) == [1.0, 2.0, 3.0]
        with pytest.raises(ValueError):
            sample.values[0] = 99.0

    @pytest.mark.parametrize(
        "values",
        [[], [1.0, -2.0], [1.0, math.nan], [1.0, math.inf], [[1.0, 2.0]]],
    )
    def test_rejects_bad_values(self, values):
        with pytest.raises(InvalidInput):
            Sample(values)


class TestSampleEstimators:
    def test_three_point_example(self):
        sample = Sample([1.0, 2.0, 3.0])
        assert sample.restricted_moment(0.0, 1) == 2.0
        assert sample.restricted_moment(2.0, 1) == 1.0
        row = sample.markov_bounds(2.0)
        assert row.tail == pytest.approx(1.0 / 3.0, abs=0)
        assert row.enhanced == 0.5
        assert row.traditional == 1.0

    def test_single_point_example(self):
        row = Sample([5.0]).markov_bounds(1.0)
        assert (row.tail, row.enhanced, row.traditional) == (1.0, 5.0, 5.0)

    def test_cut_is_strict(self):
        sample = Sample([1.0, 2.0, 3.0])
        assert sample.tail(2.0) == pytest.approx(1.0 / 3.0, abs=0)
        assert sample.tail(float(np.nextafter(2.0, 0.0))) == pytest.approx(
            2.0 / 3.0, abs=0
        )
        # a repeated value at the threshold is excluded entirely
        tied = Sample([2.0, 2.0, 5.0])
        assert tied.restricted_moment(2.0, 1) == pytest.approx(5.0 / 3.0, abs=0)

    def test_threshold_above_maximum(self):
        sample = Sample([1.0, 2.0, 3.0])
        assert sample.tail(10.0) == 0.0
        assert sample.restricted_moment(10.0, 1) == 0.0

    def test_moment_at_zero_is_mean(self):
        sample = Sample([0.0, 1.0, 5.0, 0.25])
        assert sample.restricted_moment(0.0, 1) == sample.mean()

    def test_higher_order_moments(self):
        sample = Sample([1.0, 2.0, 3.0])
        assert sample.restricted_moment(0.0, 2) == pytest.approx(14.0 / 3.0, rel=1e-15)
        assert sample.restricted_moment(1.5, 3) == pytest.approx(35.0 / 3.0, rel=1e-15)

    def test_rejects_bad_queries(self):
        sample = Sample([1.0, 2.0])
        with pytest.raises(InvalidInput):
            sample.restricted_moment(-1.0, 1)
        with pytest.raises(InvalidInput):
            sample.restricted_moment(1.0, 0)
        with pytest.raises(InvalidInput):
            sample.markov_bounds(0.0)

    @settings(max_examples=200, deadline=None)
    @given(
        values=st.lists(
            st.floats(min_value=0.0, max_value=1e9), min_size=1, max_size=200
        ),
        nu=st.floats(min_value=1e-9, max_value=2e9),
        data=st.data(),
    )
    def test_sandwich_holds_with_zero_tolerance(self, values, nu, data):
        sample = Sample(values)
        # probe both an arbitrary threshold and ones adjacent to sample points
        candidates = [nu]
        anchor = data.draw(st.sampled_from(values))
        if anchor > 0.0:
            candidates.append(anchor)
            below = float(np.nextafter(anchor, 0.0))
            if below > 0.0:
                candidates.append(below)
        for point in candidates:
            row = sample.markov_bounds(point)
            assert row.tail <= row.enhanced
            assert row.enhanced <= row.traditional


class TestSampleFromFile:
    def test_fixture_round_trip(self):
        sample = Sample.from_file(FIXTURE)
        assert sample.n == 5
        assert list(sample.values) == [0.25, 1.5, 2.0, 3.5, 4.75]
        assert sample.mean() == pytest.approx(2.4, rel=1e-15)
        row = sample.markov_bounds(2.0)
        assert row.tail == pytest.approx(0.4, abs=0)
        assert row.enhanced == pytest.approx(0.825, rel=1e-15)
        assert row.traditional == pytest.approx(1.2, rel=1e-15)

    def test_parse_error_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1.0\n2.0\npotato\n", encoding="utf-8")
        with pytest.raises(InvalidInput, match="line 3"):
            Sample.from_file(path)

    def test_negative_value_names_line(self, tmp_path):
        path = tmp_path / "neg.txt"
        path.write_text("# header\n-4.0\n", encoding="utf-8")
        with pytest.raises(InvalidInput, match="line 2"):
            Sample.from_file(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# only a comment\n\n", encoding="utf-8")
        with pytest.raises(InvalidInput, match="no sample values"):
            Sample.from_file(path)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            Sample.from_file(tmp_path / "nope.txt")


class TestVerifySample:
    def test_file_mode_report(self):
        report = verify_sample(Sample.from_file(FIXTURE), [1.0, 2.0, 4.0])
        assert report.n == 5
        assert report.seed is None
        assert report.max_tail_deviation is None
        assert report.passed
        assert report.max_violation == 0.0
        assert [row.nu for row in report.rows] == [1.0, 2.0, 4.0]
        assert report.rows[1].empirical_enhanced == pytest.approx(0.825, rel=1e-15)
        assert all(row.violations == 0 for row in report.rows)

    def test_csv_layout(self):
        report = verify_sample(Sample([1.0, 2.0, 3.0]), [2.0])
        lines = report.to_csv().splitlines()
        assert lines[0] == (
            "nu,empirical_tail,empirical_enhanced,empirical_traditional,violations"
        )
        assert lines[1].startswith("2,") and lines[1].endswith(",0")

    def test_empty_grid_rejected(self):
        with pytest.raises(InvalidInput):
            verify_sample(Sample([1.0]), [])

    def test_bad_threshold_rejected(self):
        with pytest.raises(InvalidInput):
            verify_sample(Sample([1.0]), [1.0, -2.0])


class TestMonteCarloVerify:
    def test_exponential_large_sample_near_closed_form(self):
        n = 10**6
        rng = np.random.default_rng(42)
        values = -np.log1p(-rng.random(n))
        sample = Sample(values)
        estimate = sample.restricted_moment(2.0, 1)
        oracle = 3.0 * math.exp(-2.0)
        indicator_terms = np.where(values > 2.0, values, 0.0)
        band = 3.0 * float(np.std(indicator_terms)) / math.sqrt(n)
        assert abs(estimate - oracle) <= band

    def test_report_is_deterministic(self):
        dist = Exponential(rate=1.0)
        first = monte_carlo_verify(dist, 5000, 7, [1.0, 2.0, 4.0])
        second = monte_carlo_verify(dist, 5000, 7, [1.0, 2.0, 4.0])
        assert first == second
        assert first.to_csv() == second.to_csv()

    def test_different_seed_changes_report(self):
        dist = Exponential(rate=1.0)
        a = monte_carlo_verify(dist, 5000, 7, [2.0])
        b = monte_carlo_verify(dist, 5000, 8, [2.0])
        assert a.rows != b.rows

    def test_no_violations_across_distributions(self):
        grid = [float(nu) for nu in range(1, 9)]
        for dist in (Exponential(rate=1.0), HalfNormal(sigma=math.sqrt(math.pi / 2.0))):
            report = monte_carlo_verify(dist, 10**5, 7, grid)
            assert report.passed
            assert report.max_violation == 0.0
            assert all(row.violations == 0 for row in report.rows)

    def test_tail_deviation_recorded_and_small(self):
        dist = HalfNormal(sigma=math.sqrt(math.pi / 2.0))
        report = monte_carlo_verify(dist, 10**5, 1, [4.0])
        p = dist.tail(4.0)
        band = 3.0 * math.sqrt(p * (1.0 - p) / 10**5)
        assert report.max_tail_deviation is not None
        assert report.max_tail_deviation <= band

    def test_single_draw_degenerate(self):
        report = monte_carlo_verify(Exponential(rate=1.0), 1, 3, [1.0])
        assert report.n == 1
        assert report.passed
        assert report.rows[0].violations == 0

    def test_generic_distribution_sampled_through_quantiles(self):
        dist = Generic(lambda x: np.exp(-x))
        report = monte_carlo_verify(dist, 50, 11, [0.5, 1.0])
        assert report.passed
        assert report.max_violation == 0.0

    @pytest.mark.parametrize(
        "n,seed,grid",
        [
            (0, 1, [1.0]),
            (-5, 1, [1.0]),
            (2.5, 1, [1.0]),
            (True, 1, [1.0]),
            (10, -1, [1.0]),
            (10, 2**64, [1.0]),
            (10, 1.5, [1.0]),
            (10, 1, []),
            (10, 1, [0.0]),
        ],
    )
    def test_rejects_bad_arguments(self, n, seed, grid):
        with pytest.raises(InvalidInput):
            monte_carlo_verify(Exponential(rate=1.0), n, seed, grid)
