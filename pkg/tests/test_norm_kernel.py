import math

import numpy as np
import pytest

from app.errors import BoundaryProximityError, ConfigurationError
from app.geometry.norm_kernel import (
    ConicKind,
    GeneralNorm,
    KropinaNorm,
    RandersNorm,
    RiemannianNorm,
    Sheet,
    Signature,
    ZermeloSheet,
    classify_signature,
    conic_domain,
    dual_norm,
    eval_norm,
    eval_norm_batch,
    fundamental_tensor,
    indicatrix_sample,
    strong_convexity_check,
    zermelo_roots,
)

EUCLID = RiemannianNorm.euclidean()


def sheet(wx, wy, which=Sheet.LOWER, base=EUCLID):
    return ZermeloSheet(base, np.array([wx, wy]), which)


class TestBaseNorms:
    def test_euclidean_length(self):
        assert eval_norm(EUCLID, [3.0, 4.0]) == pytest.approx(5.0, abs=1e-14)

    def test_ellipse_semi_axes(self):
        norm = RiemannianNorm.ellipse(2.0, 0.5)
        assert eval_norm(norm, [2.0, 0.0]) == pytest.approx(1.0)
        assert eval_norm(norm, [0.0, 0.5]) == pytest.approx(1.0)

    def test_randers_value(self):
        norm = RandersNorm(np.eye(2), [0.3, 0.0])
        assert eval_norm(norm, [1.0, 0.0]) == pytest.approx(1.3)
        assert eval_norm(norm, [-1.0, 0.0]) == pytest.approx(0.7)

    def test_randers_rejects_large_omega(self):
        with pytest.raises(ValueError):
            RandersNorm(np.eye(2), [1.0, 0.0])

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            eval_norm(EUCLID, [0.0, 0.0])

    def test_kropina_half_plane(self):
        norm = KropinaNorm(EUCLID, [1.0, 0.0])
        assert eval_norm(norm, [2.0, 0.0]) == pytest.approx(2.0)
        assert math.isinf(eval_norm(norm, [-1.0, 0.0]))

    def test_dual_norm_of_randers(self):
        # unit ball of sqrt(v.v) + 0.5 v_x is an ellipse reaching x = 2/3 and x = -2
        norm = RandersNorm(np.eye(2), [0.5, 0.0])
        assert dual_norm(norm, [1.0, 0.0]) == pytest.approx(2.0 / 3.0)
        assert dual_norm(norm, [-1.0, 0.0]) == pytest.approx(2.0)

    def test_general_norm_support_matches_closed_form(self):
        general = GeneralNorm(lambda V: np.sqrt(np.einsum("ij,ij->i", V, V)))
        assert dual_norm(general, [0.6, 0.8]) == pytest.approx(1.0, abs=1e-8)


class TestZermeloSheets:
    def test_mild_constant_wind_travel_times(self):
        lower, upper = zermelo_roots(EUCLID, np.array([0.5, 0.0]), np.array([[1.0, 0.0], [-1.0, 0.0]]))
        assert lower[0] == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert lower[1] == pytest.approx(2.0, abs=1e-12)
        assert np.all(np.isinf(upper))

    def test_strong_wind_two_sheets(self):
        assert eval_norm(sheet(2.0, 0.0), [1.0, 0.0]) == pytest.approx(1.0 / 3.0, abs=1e-10)
        assert eval_norm(sheet(2.0, 0.0, Sheet.UPPER), [1.0, 0.0]) == pytest.approx(1.0, abs=1e-10)

    def test_strong_wind_outside_cone(self):
        assert math.isinf(eval_norm(sheet(2.0, 0.0), [0.0, 1.0]))
        assert math.isinf(eval_norm(sheet(2.0, 0.0), [-1.0, 0.0]))

    def test_critical_wind_is_kropina(self):
        # |v - lambda W| = lambda with |W| = 1 gives lambda = |v|^2 / (2 v.W)
        v = np.array([1.0, 1.0])
        assert eval_norm(sheet(1.0, 0.0), v) == pytest.approx(1.0, abs=1e-12)
        assert math.isinf(eval_norm(sheet(1.0, 0.0), [-1.0, 0.2]))

    def test_randers_closed_form_for_mild_wind(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            w = rng.uniform(-0.6, 0.6, 2)
            v = rng.normal(size=2)
            l0 = 1.0 - w @ w
            expected = (math.sqrt(l0 * (v @ v) + (w @ v) ** 2) - w @ v) / l0
            assert eval_norm(sheet(*w), v) == pytest.approx(expected, rel=1e-10)

    def test_homogeneity_and_sheet_order(self):
        rng = np.random.default_rng(5)
        spec_lower = sheet(2.0, 0.5)
        spec_upper = sheet(2.0, 0.5, Sheet.UPPER)
        for _ in range(200):
            # cone axis at 14 degrees, half-angle 29 degrees
            v = np.array([rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.3)])
            scale = rng.uniform(0.1, 10.0)
            f, fl = eval_norm(spec_lower, v), eval_norm(spec_upper, v)
            assert eval_norm(spec_lower, scale * v) == pytest.approx(scale * f, rel=1e-9)
            assert f <= fl

    def test_general_base_agrees_with_ellipse_path(self):
        general = GeneralNorm(lambda V: np.sqrt(np.einsum("ij,ij->i", V, V)))
        V = np.array([[1.0, 0.0], [1.0, 0.3], [2.0, -0.4]])
        lower_g, upper_g = zermelo_roots(general, np.array([2.0, 0.0]), V)
        lower_e, upper_e = zermelo_roots(EUCLID, np.array([2.0, 0.0]), V)
        np.testing.assert_allclose(lower_g, lower_e, rtol=1e-8)
        np.testing.assert_allclose(upper_g, upper_e, rtol=1e-8)

    def test_region_labels(self):
        assert sheet(0.5, 0.0).region == "mild"
        assert sheet(1.0, 0.0).region == "critical"
        assert sheet(0.0, -2.0).region == "strong"


class TestConicDomains:
    def test_mild_is_full(self):
        assert conic_domain(sheet(0.5, 0.0)).kind == ConicKind.FULL

    def test_critical_is_half_plane(self):
        domain = conic_domain(sheet(1.0, 0.0))
        assert domain.kind == ConicKind.HALF_PLANE
        assert domain.contains([1.0, 5.0])
        assert not domain.contains([-0.1, 1.0])

    def test_strong_cone_half_angle(self):
        domain = conic_domain(sheet(2.0, 0.0))
        assert domain.kind == ConicKind.CONE
        assert domain.half_angle == pytest.approx(math.pi / 6, abs=1e-10)
        np.testing.assert_allclose(domain.axis, [1.0, 0.0], atol=1e-12)
        assert domain.contains([1.0, 0.5])
        assert not domain.contains([1.0, 0.7])
        assert domain.boundary_distance([0.0, 1.0]) < 0


class TestFundamentalTensor:
    def test_euler_identity(self):
        spec = sheet(0.4, -0.3)
        v = np.array([0.7, 1.1])
        g = fundamental_tensor(spec, v)
        assert g(v, v) == pytest.approx(eval_norm(spec, v) ** 2, rel=1e-10)

    def test_symmetric(self):
        g = fundamental_tensor(sheet(0.4, 0.2), [1.0, -0.5])
        np.testing.assert_allclose(g.matrix, g.matrix.T, atol=0)

    def test_euclidean_is_identity(self):
        g = fundamental_tensor(EUCLID, [0.3, 0.4])
        np.testing.assert_allclose(g.matrix, np.eye(2), atol=1e-6)

    def test_signatures(self):
        assert classify_signature(fundamental_tensor(sheet(0.5, 0.0), [1.0, 0.0])) == Signature.POSITIVE_DEFINITE
        upper = fundamental_tensor(sheet(2.0, 0.0, Sheet.UPPER), [1.0, 0.0])
        assert classify_signature(upper) == Signature.LORENTZIAN
        assert classify_signature(np.diag([-1.0, -2.0])) == Signature.NEGATIVE_DEFINITE
        assert classify_signature(np.diag([1.0, 0.0])) == Signature.DEGENERATE

    def test_boundary_proximity(self):
        # (1, tan 30deg) sits on the cone boundary of W = (2, 0)
        edge = np.array([1.0, math.tan(math.pi / 6)])
        with pytest.raises(BoundaryProximityError):
            fundamental_tensor(sheet(2.0, 0.0), edge * (1 - 1e-6))


class TestIndicatrix:
    def test_samples_lie_on_indicatrix(self):
        spec = sheet(2.0, 0.0)
        samples = indicatrix_sample(spec, 32)
        values = eval_norm_batch(spec, np.array(samples))
        np.testing.assert_allclose(values, 1.0, rtol=1e-12)

    def test_small_count_rejected(self):
        with pytest.raises(ConfigurationError):
            indicatrix_sample(EUCLID, 3)

    @pytest.mark.parametrize("which", [Sheet.LOWER, Sheet.UPPER])
    def test_strong_convexity_of_both_sheets(self, which):
        report = strong_convexity_check(sheet(2.0, 0.0, which), 16)
        assert report.passed
        assert report.oriented_inward == (which == Sheet.UPPER)

    def test_strong_convexity_of_mild_sheet(self):
        assert strong_convexity_check(sheet(0.5, 0.5), 32).passed


def cone_vectors(rng, count, half_angle=math.radians(25.0)):
    angles = rng.uniform(-half_angle, half_angle, count)
    radii = rng.uniform(0.1, 2.0, count)
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


class TestTriangleInequalities:
    def test_mild_sheet_triangle(self):
        rng = np.random.default_rng(8)
        spec = sheet(0.5, 0.3)
        u, v = rng.normal(size=(2, 500, 2))
        lhs = eval_norm_batch(spec, u + v)
        rhs = eval_norm_batch(spec, u) + eval_norm_batch(spec, v)
        assert np.all(lhs <= rhs * (1 + 1e-12))

    def test_strong_lower_sheet_triangle(self):
        rng = np.random.default_rng(9)
        spec = sheet(2.0, 0.0)
        u, v = cone_vectors(rng, 500), cone_vectors(rng, 500)
        lhs = eval_norm_batch(spec, u + v)
        rhs = eval_norm_batch(spec, u) + eval_norm_batch(spec, v)
        assert np.all(np.isfinite(lhs))
        assert np.all(lhs <= rhs * (1 + 1e-12))

    def test_strong_upper_sheet_reverse_triangle(self):
        rng = np.random.default_rng(10)
        spec = sheet(2.0, 0.0, Sheet.UPPER)
        u, v = cone_vectors(rng, 500), cone_vectors(rng, 500)
        lhs = eval_norm_batch(spec, u + v)
        rhs = eval_norm_batch(spec, u) + eval_norm_batch(spec, v)
        assert np.all(lhs >= rhs * (1 - 1e-12))
