from __future__ import annotations

import math

import numpy as np
import pytest

from photonradar import DomainError, FitError, RateFit, fit_rates, max_range, rate_at, read_rate_csv

BENCH_FIT = RateFit(amplitude=75.14, background=78.0)


def synthetic_samples(xs, fit=BENCH_FIT):
    return [(float(x), rate_at(float(x), fit)) for x in xs]


class TestRateAt:
    def test_background_dominates_at_distance(self):
        assert rate_at(1e9, BENCH_FIT) == pytest.approx(78.0, abs=1e-6)

    def test_unit_distance_reads_amplitude(self):
        fit = RateFit(amplitude=75.14, background=0.0)
        assert rate_at(1.0, fit) == pytest.approx(75.14, rel=1e-12)

    def test_inverse_square_signal_ratio(self):
        fit = RateFit(amplitude=100.0, background=0.0)
        assert rate_at(10.0, fit) / rate_at(20.0, fit) == pytest.approx(4.0, rel=1e-12)

    def test_quadratic_flag(self):
        fit = RateFit(amplitude=2.0, background=1.0)
        assert rate_at(3.0, fit, quadratic=True) == pytest.approx(19.0, rel=1e-12)

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(DomainError):
            rate_at(0.0, BENCH_FIT)


class TestFitRates:
    def test_noiseless_recovery_is_exact(self):
        fit = fit_rates(synthetic_samples(np.linspace(5, 200, 25)))
        assert fit.amplitude == pytest.approx(75.14, rel=1e-9)
        assert fit.background == pytest.approx(78.0, rel=1e-9)
        assert fit.residual < 1e-12

    def test_constant_rate_gives_pure_background(self):
        fit = fit_rates([(x, 78.0) for x in (10.0, 20.0, 30.0, 40.0)])
        assert fit.amplitude == 0.0
        assert fit.background == pytest.approx(78.0, rel=1e-12)

    def test_noisy_recovery_within_three_standard_errors(self):
        rng = np.random.default_rng(909)
        xs = np.linspace(5, 100, 60)
        ys = np.array([rate_at(float(x), BENCH_FIT) for x in xs]) + rng.normal(0, 1.0, xs.size)
        fit = fit_rates(list(zip(xs, ys)))
        # standard errors from the fit covariance sigma^2 (A^T A)^-1
        design = np.column_stack([1.0 / xs**2, np.ones_like(xs)])
        sigma2 = fit.residual / (xs.size - 2)
        cov = sigma2 * np.linalg.inv(design.T @ design)
        assert abs(fit.amplitude - 75.14) < 3 * math.sqrt(cov[0, 0])
        assert abs(fit.background - 78.0) < 3 * math.sqrt(cov[1, 1])

    def test_quadratic_flag_round_trip(self):
        truth = RateFit(amplitude=2.5, background=40.0)
        samples = [(x, rate_at(float(x), truth, quadratic=True)) for x in (1.0, 2.0, 3.0, 5.0)]
        fit = fit_rates(samples, quadratic=True)
        assert fit.amplitude == pytest.approx(2.5, rel=1e-9)
        assert fit.background == pytest.approx(40.0, rel=1e-9)

    def test_identical_distances_are_singular(self):
        with pytest.raises(FitError):
            fit_rates([(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)])

    def test_too_few_samples(self):
        with pytest.raises(FitError):
            fit_rates([(1.0, 1.0), (2.0, 2.0)])

    def test_nonpositive_distance(self):
        with pytest.raises(DomainError):
            fit_rates([(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)])


class TestMaxRange:
    def test_quadrupling_rate_doubles_range(self):
        base = max_range(1e9, BENCH_FIT, min_signal=10.0)
        assert max_range(4e9, BENCH_FIT, min_signal=10.0) == pytest.approx(2 * base, rel=1e-12)

    def test_closed_form_value(self):
        # x* = sqrt(a * (rate/ref) / min_signal)
        value = max_range(2e7, BENCH_FIT, min_signal=10.0, reference_rate=5e6)
        assert value == pytest.approx(math.sqrt(75.14 * 4.0 / 10.0), rel=1e-12)

    def test_unreachable_signal_is_unbounded(self):
        assert max_range(1e9, BENCH_FIT, min_signal=0.0) == math.inf

    def test_zero_amplitude_never_reaches_signal(self):
        fit = RateFit(amplitude=0.0, background=78.0)
        assert max_range(1e9, fit, min_signal=10.0) == 0.0

    def test_invalid_rates(self):
        with pytest.raises(DomainError):
            max_range(0.0, BENCH_FIT, min_signal=1.0)


class TestCsvIngestion:
    def test_reads_with_header(self, tmp_path):
        path = tmp_path / "rates.csv"
        path.write_text("x_mm,rate\n10,78.75\n20,78.19\n30,78.08\n")
        assert read_rate_csv(path) == [(10.0, 78.75), (20.0, 78.19), (30.0, 78.08)]

    def test_reads_without_header(self, tmp_path):
        path = tmp_path / "rates.csv"
        path.write_text("10,78.75\n20,78.19\n")
        assert read_rate_csv(path) == [(10.0, 78.75), (20.0, 78.19)]

    def test_fit_from_csv_round_trip(self, tmp_path):
        path = tmp_path / "rates.csv"
        rows = ["x_mm,rate"] + ["%g,%r" % (x, rate_at(x, BENCH_FIT)) for x in (5.0, 9.0, 14.0, 33.0)]
        path.write_text("\n".join(rows) + "\n")
        fit = fit_rates(read_rate_csv(path))
        assert fit.amplitude == pytest.approx(75.14, rel=1e-9)
        assert fit.background == pytest.approx(78.0, rel=1e-9)
