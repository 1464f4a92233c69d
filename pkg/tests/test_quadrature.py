import math

import numpy as np
import pytest

from qnslab.fields import DomainError, constant_field, harmonic_field, indicator_field
from qnslab.geometry import Ball, Similarity
from qnslab.quadrature import (
    ContainmentError,
    QuadratureSpec,
    derive_seed,
    mean_over_ball,
    mean_over_image,
    sample_in_ball,
)
from qnslab.regions import MarkedSet, Rect, Region

OMEGA = Region((Ball((0.0, 0.0), 4.0),))
SUPPORT = Region((Ball((0.0, 0.0), 1.0, closed=True),))
CHI = indicator_field(SUPPORT, OMEGA)


class TestSpecValidation:
    def test_bad_method(self):
        with pytest.raises(ValueError):
            QuadratureSpec(method="qmc")

    def test_bad_target(self):
        with pytest.raises(ValueError):
            QuadratureSpec(target_rel_error=0.5)

    def test_bad_samples(self):
        with pytest.raises(ValueError):
            QuadratureSpec(max_samples=10)


class TestSampling:
    @pytest.mark.parametrize("dim", [2, 3])
    @pytest.mark.parametrize("stratified", [False, True])
    def test_samples_inside_ball(self, dim, stratified):
        rng = np.random.Generator(np.random.PCG64(0))
        center = np.zeros(dim)
        pts = sample_in_ball(center, 2.0, 4096, rng, stratified)
        assert np.all(np.sum(pts * pts, axis=1) <= 4.0 + 1e-12)

    def test_uniformity_moment(self):
        # E|X|^2 over the unit disk is 1/2
        rng = np.random.Generator(np.random.PCG64(1))
        pts = sample_in_ball(np.zeros(2), 1.0, 200_000, rng)
        m2 = float(np.mean(np.sum(pts * pts, axis=1)))
        assert abs(m2 - 0.5) < 0.01


class TestMeanOverBall:
    def test_constant_exact(self):
        u = constant_field(5.0, OMEGA)
        res = mean_over_ball(u, Ball((0.3, 0.2), 1.0), QuadratureSpec(seed=1))
        assert res.mean == 5.0 and res.stderr == 0.0

    def test_indicator_area_ratio(self):
        res = mean_over_ball(CHI, Ball((0.0, 0.0), 2.0), QuadratureSpec(seed=2, max_samples=300_000))
        assert abs(res.mean - 0.25) <= max(3.0 * res.stderr, 1e-3)

    def test_harmonic_mean_value(self):
        omega = Region((Ball((2.0, 1.0), 2.0),))
        u = harmonic_field(1.0, 10.0, omega)
        res = mean_over_ball(u, Ball((2.0, 1.0), 0.5), QuadratureSpec(seed=3, max_samples=400_000))
        assert abs(res.mean - 1.3) <= max(3.0 * res.stderr, 1e-6)

    def test_harmonic_grid_method(self):
        omega = Region((Ball((2.0, 1.0), 2.0),))
        u = harmonic_field(1.0, 10.0, omega)
        res = mean_over_ball(u, Ball((2.0, 1.0), 0.5), QuadratureSpec(method="grid", seed=0))
        assert abs(res.mean - 1.3) <= 1e-9  # angular rule is exact for this field

    def test_grid_rejected_for_indicator(self):
        with pytest.raises(ValueError):
            mean_over_ball(CHI, Ball((0.0, 0.0), 1.0), QuadratureSpec(method="grid"))

    def test_containment_rejection_reports_direction(self):
        with pytest.raises(ContainmentError) as err:
            mean_over_ball(CHI, Ball((3.5, 0.0), 1.0), QuadratureSpec(seed=1))
        assert err.value.direction is not None

    def test_seed_determinism(self):
        spec = QuadratureSpec(seed=7, max_samples=50_000)
        a = mean_over_ball(CHI, Ball((0.2, 0.1), 1.5), spec)
        b = mean_over_ball(CHI, Ball((0.2, 0.1), 1.5), spec)
        assert a == b

    def test_seed_sensitivity(self):
        a = mean_over_ball(CHI, Ball((0.2, 0.1), 1.5), QuadratureSpec(seed=7, max_samples=50_000))
        b = mean_over_ball(CHI, Ball((0.2, 0.1), 1.5), QuadratureSpec(seed=8, max_samples=50_000))
        assert a.mean != b.mean

    def test_worker_determinism(self):
        spec2 = QuadratureSpec(seed=7, max_samples=50_000, workers=2)
        a = mean_over_ball(CHI, Ball((0.2, 0.1), 1.5), spec2)
        b = mean_over_ball(CHI, Ball((0.2, 0.1), 1.5), spec2)
        assert a == b

    def test_stratified_matches_mc(self):
        ball = Ball((0.1, 0.0), 1.8)
        a = mean_over_ball(CHI, ball, QuadratureSpec(method="mc", seed=5, max_samples=200_000))
        b = mean_over_ball(CHI, ball, QuadratureSpec(method="stratified", seed=5, max_samples=200_000))
        assert abs(a.mean - b.mean) <= 3.0 * (a.stderr + b.stderr)

    def test_3d_indicator(self):
        omega3 = Region((Ball((0.0, 0.0, 0.0), 4.0),))
        support3 = Region((Ball((0.0, 0.0, 0.0), 1.0, closed=True),))
        u3 = indicator_field(support3, omega3)
        res = mean_over_ball(u3, Ball((0.0, 0.0, 0.0), 2.0), QuadratureSpec(seed=4, max_samples=400_000))
        assert abs(res.mean - 0.125) <= max(3.0 * res.stderr, 2e-3)


class TestMeanOverImage:
    def test_constant(self):
        d = MarkedSet(Region((Ball((0.0, 0.0), 1.0),)), (0.0, 0.0))
        u = constant_field(3.0, OMEGA)
        res = mean_over_image(u, d, Similarity.identity(2), QuadratureSpec(seed=1))
        assert res.mean == 3.0

    def test_identity_disk_on_support(self):
        d = MarkedSet(Region((Ball((0.0, 0.0), 1.0),)), (0.0, 0.0))
        res = mean_over_image(CHI, d, Similarity.identity(2), QuadratureSpec(seed=2, max_samples=50_000))
        assert res.mean == 1.0

    def test_scaled_square(self):
        # unit square centered at the marked point, doubled: the image is
        # [-1,1]^2 and the support covers pi/4 of it
        omega = Region((Ball((0.0, 0.0), 10.0),))
        u = indicator_field(Region((Ball((0.0, 0.0), 1.0, closed=True),)), omega)
        d = MarkedSet(Region((Rect((-0.5, -0.5), (0.5, 0.5)),)), (0.0, 0.0))
        h = Similarity(2.0, np.eye(2), (0.0, 0.0))
        res = mean_over_image(u, d, h, QuadratureSpec(seed=3, max_samples=400_000))
        assert abs(res.mean - math.pi / 4.0) <= max(3.0 * res.stderr, 2e-3)

    def test_exterior_image_rejected(self):
        d = MarkedSet(Region((Ball((0.0, 0.0), 1.0),)), (0.0, 0.0))
        h = Similarity(1.0, np.eye(2), (3.8, 0.0))
        with pytest.raises(DomainError):
            mean_over_image(CHI, d, h, QuadratureSpec(seed=4))

    def test_similarity_covariance(self):
        # mean of u over h(D) equals the mean of u∘h over D
        omega = Region((Ball((0.0, 0.0), 10.0),))
        support = Region((Ball((1.0, 0.5), 0.8, closed=True),))
        u = indicator_field(support, omega)
        d = MarkedSet(Region((Ball((0.0, 0.0), 1.0),)), (0.0, 0.0))
        h = Similarity.rotation(0.4, scale=1.5, translation=(0.7, 0.2))
        direct = mean_over_image(u, d, h, QuadratureSpec(seed=5, max_samples=300_000))
        h_inv = h.inverse()
        pulled = indicator_field(support.transformed(h_inv), omega.transformed(h_inv))
        pullback = mean_over_image(pulled, d, Similarity.identity(2), QuadratureSpec(seed=6, max_samples=300_000))
        assert abs(direct.mean - pullback.mean) <= 3.0 * (direct.stderr + pullback.stderr)


class TestDeriveSeed:
    def test_stable(self):
        assert derive_seed(1, "x") == derive_seed(1, "x")
        assert derive_seed(1, "x") != derive_seed(1, "y")
        assert derive_seed(1, "x") != derive_seed(2, "x")
        assert 0 <= derive_seed(123, "abc") < 2**64
