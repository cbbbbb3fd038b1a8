import math

import numpy as np
import pytest

from app.errors import OutOfDomainError
from app.geometry.norm_kernel import RiemannianNorm
from app.geometry.wind_field import (
    Admissibility,
    BaseDomain,
    ConstantWind,
    Disk,
    EllipseNormField,
    RadialWind,
    Rect,
    RegionClass,
    build_wind_structure,
)


class TestDomain:
    def test_cell_geometry(self):
        domain = BaseDomain((-1.0, 1.0, 0.0, 1.0), 40, 20)
        assert domain.dx == pytest.approx(0.05)
        assert domain.dy == pytest.approx(0.05)
        assert domain.xs[0] == pytest.approx(-0.975)
        assert domain.index_of((0.0, 0.5)) == (10, 20)

    def test_exclusions_must_be_inside(self):
        with pytest.raises(ValueError):
            BaseDomain((-1.0, 1.0, -1.0, 1.0), 32, 32, (Disk((0.9, 0.0), 0.2),))

    def test_minimum_resolution(self):
        with pytest.raises(ValueError):
            BaseDomain((-1.0, 1.0, -1.0, 1.0), 8, 32)

    def test_rect_signed_distance(self):
        rect = Rect(-1.0, 1.0, -0.5, 0.5)
        d = rect.signed_distance(np.array([0.0, 2.0, 0.0]), np.array([0.0, 0.0, 1.5]))
        np.testing.assert_allclose(d, [-0.5, 1.0, 1.0])

    def test_excluded_points(self, punctured):
        assert not punctured.domain.contains((0.0, 0.05))
        assert punctured.domain.contains((0.5, 0.0))
        assert punctured.domain.excluded_mask.any()


class TestRegions:
    def test_constant_winds(self, zero_wind, critical_wind, strong_wind):
        assert zero_wind.killing_character == "timelike"
        assert critical_wind.killing_character == "causal"
        assert strong_wind.killing_character == "arbitrary"
        assert zero_wind.all_mild
        assert strong_wind.region_grid.counts["strong"] == 96 * 96

    def test_rigid_rotation_band_along_unit_circle(self, rotation):
        grid = rotation.region_grid
        x, y = rotation.domain.mesh
        r = np.hypot(x, y)
        cell = rotation.domain.cell
        assert np.all(grid.codes[r < 1.0 - cell] == 0)
        assert np.all(grid.codes[r > 1.0 + cell] == 2)
        assert rotation.killing_character == "arbitrary"

    def test_classify_point(self, rotation):
        assert rotation.classify_point((0.2, 0.0)) == RegionClass.MILD
        assert rotation.classify_point((1.5, 0.0)) == RegionClass.STRONG
        with pytest.raises(OutOfDomainError):
            rotation.classify_point((3.0, 0.0))

    def test_region_counts_serialise(self, punctured):
        data = punctured.region_grid.to_dict()
        assert data["counts"]["excluded"] > 0
        assert data["observed_band"] is None


class TestMetrics:
    def test_strong_wind_values(self, strong_wind):
        assert strong_wind.eval_F((0.0, 0.0), (1.0, 0.0)) == pytest.approx(1.0 / 3.0, abs=1e-10)
        assert strong_wind.eval_Fl((0.0, 0.0), (1.0, 0.0)) == pytest.approx(1.0, abs=1e-10)

    def test_zero_vector_convention(self, zero_wind, critical_wind, strong_wind):
        assert zero_wind.eval_F((0.0, 0.0), (0.0, 0.0)) == 0.0
        assert critical_wind.eval_F((0.0, 0.0), (0.0, 0.0)) == 1.0
        assert math.isinf(strong_wind.eval_F((0.0, 0.0), (0.0, 0.0)))

    def test_admissibility(self, strong_wind):
        p = (0.0, 0.0)
        assert strong_wind.admissible(p, (1.0, 0.0)) == Admissibility.INTERIOR
        assert strong_wind.admissible(p, (0.0, 1.0)) == Admissibility.INADMISSIBLE
        assert strong_wind.admissibility_margin(p, (0.0, 1.0)) == -1.0
        assert 0.0 < strong_wind.admissibility_margin(p, (1.0, 0.1)) < 1.0

    def test_mild_margin_is_one(self, zero_wind):
        assert zero_wind.admissibility_margin((0.0, 0.0), (1.0, 2.0)) == 1.0

    def test_radial_wind_grows_with_radius(self):
        ws = build_wind_structure((-2.0, 2.0, -2.0, 2.0), (32, 32), RadialWind(0.5))
        np.testing.assert_allclose(ws.wind_at((1.0, -1.0)), [0.5, -0.5])
        assert ws.killing_character == "arbitrary"

    def test_velocity_body_support(self, strong_wind):
        # body is the unit disk around W = (2, 0)
        assert strong_wind.velocity_body_support((0.0, 0.0), (1.0, 0.0)) == pytest.approx(3.0)
        assert strong_wind.velocity_body_support((0.0, 0.0), (-1.0, 0.0)) == pytest.approx(-1.0)

    def test_max_speed_bounds_body(self, strong_wind):
        assert 3.0 <= strong_wind.max_speed <= 3.0 / math.cos(math.pi / 64) + 1e-12

    def test_varying_ellipse_field(self):
        field = EllipseNormField(2.0, 1.0)
        ws = build_wind_structure((-1.0, 1.0, -1.0, 1.0), (16, 16), ConstantWind(0.0, 0.0), norm=field)
        assert ws.eval_F((0.0, 0.0), (2.0, 0.0)) == pytest.approx(1.0)
        assert ws.eval_F((0.0, 0.0), (0.0, 1.0)) == pytest.approx(1.0)

    def test_constant_ellipse_norm(self):
        ws = build_wind_structure(
            (-1.0, 1.0, -1.0, 1.0), (16, 16), ConstantWind(0.0, 0.0), norm=RiemannianNorm.ellipse(0.5, 0.5)
        )
        assert ws.eval_F((0.0, 0.0), (1.0, 0.0)) == pytest.approx(2.0)
        assert ws.is_constant

    @pytest.mark.parametrize("norm", [None, EllipseNormField(2.0, 1.0, 0.3)])
    def test_support_is_sublinear(self, norm):
        ws = build_wind_structure((-1.0, 1.0, -1.0, 1.0), (16, 16), RadialWind(0.8), norm=norm)
        rng = np.random.default_rng(4)
        points = rng.uniform(-1.0, 1.0, size=(400, 2))
        q1, q2 = rng.normal(size=(2, 400, 2))
        joint = ws.velocity_body_support_rows(points, q1 + q2)
        split = ws.velocity_body_support_rows(points, q1) + ws.velocity_body_support_rows(points, q2)
        assert np.all(joint <= split + 1e-9)
        scale = rng.uniform(0.1, 10.0, size=400)
        np.testing.assert_allclose(
            ws.velocity_body_support_rows(points, scale[:, None] * q1),
            scale * ws.velocity_body_support_rows(points, q1),
            rtol=1e-10,
            atol=1e-12,
        )
