import math

import numpy as np
import pytest

from app.engines.geodesic_engine import (
    GeodesicEngine,
    GeodesicPath,
    MetricTag,
    Termination,
    euler_lagrange_residual,
)
from app.errors import DegenerateDirectionError, InapplicableError, OutOfDomainError


@pytest.fixture
def engine():
    return GeodesicEngine(max_workers=1)


class TestInitialValue:
    def test_straight_line_without_wind(self, engine, zero_wind):
        path = engine.geodesic_ivp(zero_wind, (0.0, 0.0), (1.0, 0.0), 1.0)
        assert path.termination == Termination.COMPLETED
        np.testing.assert_allclose(path.end, [1.0, 0.0], atol=1e-6)
        assert path.length_F == pytest.approx(1.0, rel=1e-6)
        assert path.energy_drift < 1e-6

    def test_upper_sheet_in_strong_wind(self, engine, strong_wind):
        path = engine.geodesic_ivp(strong_wind, (0.0, 0.0), (1.0, 0.0), 0.5, metric_tag=MetricTag.F_L)
        np.testing.assert_allclose(path.end, [0.5, 0.0], atol=1e-6)
        assert path.length == pytest.approx(0.5, rel=1e-6)
        assert path.length_F == pytest.approx(0.5 / 3.0, rel=1e-6)

    def test_leaves_box(self, engine, zero_wind):
        path = engine.geodesic_ivp(zero_wind, (2.5, 0.0), (1.0, 0.0), 2.0)
        assert path.truncated
        assert path.termination == Termination.LEFT_DOMAIN
        assert path.end[0] == pytest.approx(3.0, abs=1e-6)

    def test_hits_exclusion(self, engine, punctured):
        path = engine.geodesic_ivp(punctured, (-1.0, 0.0), (1.0, 0.0), 2.0)
        assert path.termination == Termination.HIT_EXCLUSION
        assert path.end[0] == pytest.approx(-0.1, abs=1e-6)

    def test_inadmissible_velocity(self, engine, strong_wind):
        with pytest.raises(DegenerateDirectionError):
            engine.geodesic_ivp(strong_wind, (0.0, 0.0), (0.0, 1.0), 1.0)
        with pytest.raises(DegenerateDirectionError):
            engine.geodesic_ivp(strong_wind, (0.0, 0.0), (0.0, 0.0), 1.0)

    def test_upper_sheet_needs_strong_wind(self, engine, mild_wind):
        with pytest.raises(DegenerateDirectionError):
            engine.geodesic_ivp(mild_wind, (0.0, 0.0), (1.0, 0.0), 1.0, metric_tag=MetricTag.F_L)

    def test_start_outside(self, engine, punctured):
        with pytest.raises(OutOfDomainError):
            engine.geodesic_ivp(punctured, (0.0, 0.0), (1.0, 0.0), 1.0)

    def test_samples_frame(self, engine, zero_wind):
        frame = engine.geodesic_ivp(zero_wind, (0.0, 0.0), (0.0, 1.0), 1.0, dt=0.1).to_frame()
        assert list(frame.columns) == ["t", "x", "y", "vx", "vy"]
        assert len(frame) == 11

    def test_doubling_sample_density(self, engine, rotation):
        coarse = engine.geodesic_ivp(rotation, (0.3, 0.0), (0.5, 0.5), 0.5, dt=0.005)
        fine = engine.geodesic_ivp(rotation, (0.3, 0.0), (0.5, 0.5), 0.5, dt=0.0025)
        assert fine.length_F == pytest.approx(coarse.length_F, rel=1e-5)
        np.testing.assert_allclose(fine.end, coarse.end, atol=1e-6)

    def test_doubled_speed_over_half_the_length(self, engine, rotation):
        slow = engine.geodesic_ivp(rotation, (0.3, 0.0), (0.5, 0.5), 0.5)
        fast = engine.geodesic_ivp(rotation, (0.3, 0.0), (1.0, 1.0), 0.25)
        np.testing.assert_allclose(fast.end, slow.end, atol=1e-6)
        assert fast.length_F == pytest.approx(slow.length_F, rel=1e-6)


class TestEulerLagrange:
    def test_straight_path_has_small_residual(self, mild_wind):
        path = GeodesicPath.straight(mild_wind, (0.0, 0.0), (1.0, 0.5), 1.0)
        assert euler_lagrange_residual(mild_wind, path) < 1e-4

    def test_circular_arc_is_not_geodesic(self, zero_wind):
        times = np.linspace(0.0, 1.0, 201)
        points = np.column_stack([np.cos(math.pi * times), np.sin(math.pi * times)])
        path = GeodesicPath.from_samples(zero_wind, times, points)
        assert euler_lagrange_residual(zero_wind, path) > 0.1


class TestConnect:
    def test_mild_wind_straight_connection(self, engine, mild_wind):
        paths = engine.connect(mild_wind, (0.0, 0.0), (1.0, 0.0))
        assert paths
        assert paths[0].length_F == pytest.approx(2.0 / 3.0, rel=1e-3)
        np.testing.assert_allclose(paths[0].end, [1.0, 0.0], atol=1e-3)

    def test_connection_length_matches_separation(self, engine, reach, mild_wind):
        paths = engine.connect(mild_wind, (0.0, 0.0), (0.0, 1.0))
        assert paths
        assert paths[0].length_F == pytest.approx(1.0 / math.sqrt(0.75), rel=1e-3)
        separation = reach.separation(mild_wind, (0.0, 0.0), (0.0, 1.0), horizon=1.5).value
        assert paths[0].length_F == pytest.approx(separation, abs=2 * mild_wind.domain.cell / 0.5)

    def test_puncture_blocks_every_connection(self, engine, punctured):
        assert engine.connect(punctured, (-1.0, 0.0), (1.0, 0.0)) == []

    def test_distinct_endpoints_required(self, engine, zero_wind):
        with pytest.raises(ValueError):
            engine.connect(zero_wind, (0.5, 0.5), (0.5, 0.5))


class TestExtremizing:
    def test_fastest_straight_path_is_on_the_front(self, engine, reach, zero_wind):
        family = reach.propagate(zero_wind, (0.0, 0.0), 1.0)
        fast = GeodesicPath.straight(zero_wind, (0.0, 0.0), (1.0, 0.0), 1.0)
        slow = GeodesicPath.straight(zero_wind, (0.0, 0.0), (0.5, 0.0), 1.0)
        assert engine.is_unit_extremizing(zero_wind, fast, family)
        assert not engine.is_unit_extremizing(zero_wind, slow, family)

    def test_front_must_start_where_the_path_starts(self, engine, reach, zero_wind):
        family = reach.propagate(zero_wind, (0.5, 0.0), 1.0)
        path = GeodesicPath.straight(zero_wind, (0.0, 0.0), (1.0, 0.0), 1.0)
        with pytest.raises(InapplicableError):
            engine.is_unit_extremizing(zero_wind, path, family)
