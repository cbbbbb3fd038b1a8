import math

import numpy as np
import pytest

from app.engines.levelset import pad, signed_distance, weno5_gradients
from app.engines.reachability_engine import Direction, hull_area
from app.errors import ConfigurationError, InsufficientHorizonError, OutOfDomainError


class TestLevelSetNumerics:
    def test_weno5_exact_on_linear_field(self):
        x = np.linspace(0.0, 1.0, 32)
        phi = np.tile(2.0 * x, (16, 1))
        minus, plus = weno5_gradients(pad(phi), x[1] - x[0], axis=1)
        np.testing.assert_allclose(minus[:, 3:-3], 2.0, atol=1e-10)
        np.testing.assert_allclose(plus[:, 3:-3], 2.0, atol=1e-10)

    def test_signed_distance_keeps_zero_set(self):
        x = np.linspace(-1.0, 1.0, 41)
        X, Y = np.meshgrid(x, x)
        phi = 3.0 * (np.hypot(X, Y) - 0.5)
        d = signed_distance(phi, x[1] - x[0], x[1] - x[0])
        assert np.array_equal(d <= 0, phi <= 0)


class TestPropagation:
    def test_zero_wind_ball_is_disk(self, reach, zero_wind):
        family = reach.propagate(zero_wind, (0.0, 0.0), 1.0)
        x, y = zero_wind.domain.mesh
        r = np.hypot(x, y)
        cell = zero_wind.domain.cell
        closed = family.c_ball(1.0)
        assert np.all(closed[r < 1.0 - 2 * cell])
        assert not np.any(closed[r > 1.0 + 2 * cell])

    def test_strong_wind_c_ball_is_shifted_disk(self, reach, strong_wind):
        x, y = strong_wind.domain.mesh
        cell = strong_wind.domain.cell
        family = reach.propagate(strong_wind, (0.0, 0.0), 1.0, checkpoints=[0.25, 0.5])
        for r in (0.25, 0.5, 1.0):
            distance = np.hypot(x - 2.0 * r, y)
            closed = family.c_ball(r)
            assert np.all(closed[distance < r - 2 * cell])
            assert not np.any(closed[distance > r + 2 * cell])

    def test_open_ball_is_inside_closed_ball(self, reach, zero_wind):
        family = reach.propagate(zero_wind, (0.0, 0.0), 1.0)
        assert not np.any(family.open_ball(1.0) & ~family.c_ball(1.0))
        assert family.c_ball(0.0).sum() == 1

    def test_backward_ball_mirrors_forward(self, reach, mild_wind):
        forward = reach.propagate(mild_wind, (0.0, 0.0), 1.0)
        backward = reach.propagate(mild_wind, (0.0, 0.0), 1.0, direction=Direction.BACKWARD)
        mirrored = np.fliplr(backward.c_ball(1.0))
        assert np.sum(forward.c_ball(1.0) != mirrored) <= 0.02 * forward.c_ball(1.0).sum()

    def test_cfl_violation(self, reach, zero_wind):
        with pytest.raises(ConfigurationError):
            reach.propagate(zero_wind, (0.0, 0.0), 1.0, dt=1.0)

    def test_centre_outside(self, reach, punctured):
        with pytest.raises(OutOfDomainError):
            reach.propagate(punctured, (0.0, 0.0), 1.0)

    def test_beyond_horizon(self, reach, zero_wind):
        family = reach.propagate(zero_wind, (0.0, 0.0), 0.5)
        with pytest.raises(InsufficientHorizonError):
            family.c_ball(1.0)

    def test_exclusion_stays_outside(self, reach, punctured):
        family = reach.propagate(punctured, (-1.0, 0.0), 2.0)
        assert not np.any(family.c_ball(2.0) & punctured.domain.excluded_mask)


class TestSeparation:
    def test_zero_wind_distance(self, reach, zero_wind):
        result = reach.separation(zero_wind, (0.0, 0.0), (1.0, 0.0), horizon=1.5)
        assert result.value == pytest.approx(1.0, abs=2 * zero_wind.domain.cell)

    def test_mild_constant_wind_travel_times(self, reach, mild_wind):
        cell = mild_wind.domain.cell
        downwind = reach.separation(mild_wind, (0.0, 0.0), (1.0, 0.0), horizon=1.0)
        upwind = reach.separation(mild_wind, (0.0, 0.0), (-1.0, 0.0), horizon=2.5)
        assert downwind.value == pytest.approx(2.0 / 3.0, abs=2 * cell / 1.5)
        assert upwind.value == pytest.approx(2.0, abs=2 * cell / 0.5)

    @pytest.mark.parametrize("horizon", [1.0, 2.0])
    def test_kropina_diagonal(self, reach, critical_wind, horizon):
        result = reach.separation(critical_wind, (0.0, 0.0), (0.0, 0.0), horizon=horizon)
        assert math.isinf(result.value)
        assert result.lower_bound == pytest.approx(horizon)

    def test_kropina_open_ball_never_contains_centre(self, reach, critical_wind):
        family = reach.propagate(critical_wind, (0.0, 0.0), 1.0)
        centre = family.center_index
        for k in range(family.steps + 1):
            assert not family.open_ball(k * family.dt)[centre]

    def test_diagonal_is_zero_without_wind(self, reach, zero_wind):
        result = reach.separation(zero_wind, (0.5, 0.5), (0.5, 0.5), horizon=0.5)
        assert result.value == pytest.approx(0.0, abs=2 * zero_wind.domain.cell)

    def test_unreachable_reports_lower_bound(self, reach, strong_wind):
        result = reach.separation(strong_wind, (0.0, 0.0), (-1.0, 0.0), horizon=1.0)
        assert math.isinf(result.value)
        assert result.to_dict()["lower_bound"] == pytest.approx(1.0)


class TestCrossChecks:
    def test_sampler_endpoints_inside_dilated_ball(self, reach, zero_wind):
        family = reach.propagate(zero_wind, (0.0, 0.0), 1.0)
        sample = reach.sample_wind_curves(zero_wind, (0.0, 0.0), 1.0, 2000, seed=11)
        distance = family.distance_at(1.0, sample.endpoints)
        assert np.all(distance <= zero_wind.domain.cell)
        assert hull_area(sample.endpoints) >= 0.9 * math.pi

    def test_sampler_is_deterministic(self, reach, strong_wind):
        a = reach.sample_wind_curves(strong_wind, (0.0, 0.0), 0.5, 200, seed=3)
        b = reach.sample_wind_curves(strong_wind, (0.0, 0.0), 0.5, 200, seed=3)
        np.testing.assert_array_equal(a.endpoints, b.endpoints)

    def test_sampler_needs_enough_curves(self, reach, zero_wind):
        with pytest.raises(ConfigurationError):
            reach.sample_wind_curves(zero_wind, (0.0, 0.0), 1.0, 10)

    def test_hjb_agrees_with_front_on_mild_wind(self, reach, mild_wind):
        report = reach.crosscheck(mild_wind, (0.0, 0.0), 1.0, count=500, seed=1)
        assert report["hjb_within_three_cells"]
        assert report["sampler_outside_dilated_c_ball"] == 0

    def test_hjb_skipped_for_strong_wind(self, reach, strong_wind):
        report = reach.crosscheck(strong_wind, (0.0, 0.0), 0.5, count=200, seed=1)
        assert report["hjb_max_error"] is None
        assert report["sampler_outside_dilated_c_ball"] == 0


class TestSeparationRegularity:
    def test_upper_semicontinuous_along_converging_targets(self, reach, strong_wind):
        cell = strong_wind.domain.cell
        targets = [(2.0, 0.3)] + [(2.0 + cell / n, 0.3 - cell / n) for n in (1, 2, 4, 8)]
        family = reach.propagate(strong_wind, (0.0, 0.0), 1.0, watch=targets)
        limit = family.first_entry(0).value
        assert limit == pytest.approx(0.69, abs=2 * cell)
        tolerance = 2 * cell
        for k in range(1, 5):
            assert family.first_entry(k).value <= limit + tolerance

    def test_continuous_off_the_diagonal(self, reach, mild_wind):
        family = reach.propagate(mild_wind, (0.0, 0.0), 1.5)
        cell = mild_wind.domain.cell
        x, y = mild_wind.domain.mesh
        far = np.hypot(x, y) >= 10 * cell
        arrival = np.where(far, family.earliest_arrival, np.nan)
        # slowest body speed is 0.5, upwind
        tolerance = cell / 0.5
        for axis in (0, 1):
            jumps = np.abs(np.diff(arrival, axis=axis))
            jumps = jumps[np.isfinite(jumps)]
            assert jumps.size > 0
            assert np.max(jumps) <= 2 * tolerance

    @pytest.mark.parametrize("wind", ["mild_wind", "critical_wind"])
    def test_closed_ball_is_arrival_sublevel(self, reach, request, wind):
        ws = request.getfixturevalue(wind)
        family = reach.propagate(ws, (0.0, 0.0), 1.0)
        r = family.horizon
        sublevel = family.earliest_arrival <= r
        sublevel[family.center_index] = True
        mismatch = sublevel ^ family.c_ball(r)
        assert not np.any(mismatch & ~family.boundary_band(r))
