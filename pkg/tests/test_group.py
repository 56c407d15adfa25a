import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heislab import (GroupPoint, ORIGIN, ScalarField, apply_field,
                     apply_sublaplacian, dilate, fundamental_solution,
                     gamma_l2_blowup, gamma_pairing, group_inv, group_mul,
                     koranyi_norm)

coord = st.floats(min_value=-10, max_value=10, allow_nan=False,
                  allow_infinity=False)
points = st.builds(GroupPoint, coord, coord, coord)


def gaussian(h=1e-3):
    return ScalarField(lambda x, y, z: np.exp(-(x * x + y * y + z * z)), h=h)


class TestGroupLaw:
    def test_basic_product(self):
        p = group_mul(GroupPoint(1, 0, 0), GroupPoint(0, 1, 0))
        assert (p.x, p.y, p.z) == (1.0, 1.0, 0.5)

    def test_identity(self):
        p = GroupPoint(0.3, -1.7, 2.2)
        q = group_mul(p, ORIGIN)
        assert (q.x, q.y, q.z) == (p.x, p.y, p.z)

    def test_inverse_cancels(self):
        p = GroupPoint(2, 3, 5)
        q = group_mul(p, GroupPoint(-2, -3, -5))
        assert (q.x, q.y, q.z) == (0.0, 0.0, 0.0)

    def test_group_inv_values(self):
        q = group_inv(GroupPoint(1, 2, 3))
        assert (q.x, q.y, q.z) == (-1.0, -2.0, -3.0)
        assert group_inv(ORIGIN) == ORIGIN
        p = GroupPoint(0.3, -1.7, 2.2)
        r = group_mul(p, group_inv(p))
        assert max(abs(r.x), abs(r.y), abs(r.z)) == 0.0

    @given(points, points, points)
    @settings(max_examples=200, deadline=None)
    def test_associativity(self, p, q, w):
        a = group_mul(group_mul(p, q), w)
        b = group_mul(p, group_mul(q, w))
        assert np.allclose(a.as_array(), b.as_array(), rtol=0, atol=1e-9)

    @given(points, points, st.floats(min_value=0.1, max_value=5))
    @settings(max_examples=200, deadline=None)
    def test_dilation_homomorphism(self, p, q, lam):
        a = dilate(lam, group_mul(p, q)).as_array()
        b = group_mul(dilate(lam, p), dilate(lam, q)).as_array()
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)

    @given(points)
    @settings(max_examples=200, deadline=None)
    def test_norm_inverse_symmetry(self, p):
        assert koranyi_norm(p) == pytest.approx(koranyi_norm(group_inv(p)),
                                                rel=1e-14, abs=1e-14)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            GroupPoint(float("nan"), 0, 0)


class TestDilation:
    def test_values(self):
        p = dilate(2.0, GroupPoint(1, 1, 1))
        assert (p.x, p.y, p.z) == (2.0, 2.0, 4.0)
        q = GroupPoint(0.4, -0.2, 0.9)
        r = dilate(1.0, q)
        assert (r.x, r.y, r.z) == (q.x, q.y, q.z)

    def test_volume_scaling_is_lambda_fourth(self):
        # box [0,a]x[0,b]x[0,c] maps to [0,3a]x[0,3b]x[0,9c]: factor 81
        a, b, c = 0.7, 1.3, 0.5
        corner = dilate(3.0, GroupPoint(a, b, c))
        vol_ratio = (corner.x * corner.y * corner.z) / (a * b * c)
        assert vol_ratio == pytest.approx(81.0, rel=1e-14)

    def test_nonpositive_rejected(self):
        for lam in (0.0, -1.0):
            with pytest.raises(ValueError):
                dilate(lam, ORIGIN)


class TestKoranyiNorm:
    def test_unit_values(self):
        assert koranyi_norm(GroupPoint(1, 0, 0)) == pytest.approx(1.0)
        assert koranyi_norm(GroupPoint(0, 0, 1)) == pytest.approx(2.0)

    def test_homogeneity(self):
        p = GroupPoint(1, -1, 0.3)
        lam = 2.5
        assert koranyi_norm(dilate(lam, p)) == pytest.approx(
            lam * koranyi_norm(p), rel=1e-14)


class TestFundamentalSolution:
    def test_normalization_values(self):
        # constant fixed so the weak identity below recovers phi(0)
        assert fundamental_solution(GroupPoint(1, 0, 0)) == pytest.approx(
            1.0 / (2.0 * math.pi))
        assert fundamental_solution(GroupPoint(0, 0, 1)) == pytest.approx(
            1.0 / (8.0 * math.pi))

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            fundamental_solution(ORIGIN)

    def test_weak_identity_refines_to_point_value(self):
        phi = ScalarField(lambda x, y, z: np.exp(-(x * x + y * y + z * z)),
                          h=1e-4)
        errs = []
        for eps, n in ((0.2, 40), (0.1, 56), (0.05, 72)):
            val = gamma_pairing(phi, eps, r_max=8.0, nr=n, nphi=n // 2,
                                npsi=n // 4)
            errs.append(abs(val - 1.0))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-2

    def test_harmonic_away_from_pole(self):
        gam = ScalarField(lambda x, y, z: 1.0 / (2.0 * np.pi * np.sqrt(
            (x * x + y * y) ** 2 + 16.0 * z * z)), h=1e-4)
        rng = np.random.default_rng(7)
        for _ in range(10):
            p = GroupPoint(*map(float, rng.uniform(-2, 2, 3)))
            n = koranyi_norm(p)
            if n < 0.15:
                continue
            # fd error grows like the sixth inverse power of the gauge
            tol = 1e-4 * max(1.0, n ** -6)
            assert abs(apply_sublaplacian(gam, p)) < tol


class TestFrameFields:
    def test_x_field_on_vertical_coordinate(self):
        f = ScalarField(lambda x, y, z: z + 0.0 * x)
        assert apply_field("X", f, GroupPoint(0, 2, 0)) == pytest.approx(-1.0)

    def test_y_field_on_vertical_coordinate(self):
        f = ScalarField(lambda x, y, z: z + 0.0 * x)
        assert apply_field("Y", f, GroupPoint(4, 0, 0)) == pytest.approx(2.0)

    def test_unknown_field_rejected(self):
        with pytest.raises(ValueError):
            apply_field("W", gaussian(), ORIGIN)

    def _commutator_residual(self, f, p):
        xf = ScalarField(lambda x, y, z: (
            (f.func(x + f.h, y, z) - f.func(x - f.h, y, z))
            - 0.5 * y * (f.func(x, y, z + f.h) - f.func(x, y, z - f.h))
        ) / (2 * f.h), h=f.h)
        yf = ScalarField(lambda x, y, z: (
            (f.func(x, y + f.h, z) - f.func(x, y - f.h, z))
            + 0.5 * x * (f.func(x, y, z + f.h) - f.func(x, y, z - f.h))
        ) / (2 * f.h), h=f.h)
        return abs(apply_field("X", yf, p) - apply_field("Y", xf, p)
                   - apply_field("Z", f, p))

    def test_commutator_matches_vertical_field(self):
        rng = np.random.default_rng(11)
        f = gaussian(h=1e-3)
        for _ in range(10):
            p = GroupPoint(*map(float, rng.uniform(-1.2, 1.2, 3)))
            assert self._commutator_residual(f, p) < 5e-5

    def test_commutator_residual_second_order(self):
        p = GroupPoint(0.4, -0.3, 0.2)
        coarse = self._commutator_residual(gaussian(h=4e-3), p)
        fine = self._commutator_residual(gaussian(h=2e-3), p)
        assert coarse / fine >= 3.0


class TestSubLaplacian:
    def test_constant_is_harmonic(self):
        f = ScalarField(lambda x, y, z: 1.0 + 0.0 * x)
        assert abs(apply_sublaplacian(f, GroupPoint(0.3, 0.7, -0.2))) < 1e-9

    def test_radial_square(self):
        f = ScalarField(lambda x, y, z: x * x + y * y)
        assert apply_sublaplacian(f, GroupPoint(1.5, -2.0, 3.0)) == \
            pytest.approx(4.0, abs=1e-6)

    def test_matches_sum_of_squares(self):
        rng = np.random.default_rng(3)
        f = gaussian(h=1e-3)
        for _ in range(10):
            p = GroupPoint(*map(float, rng.uniform(-1.2, 1.2, 3)))
            direct = apply_sublaplacian(f, p)
            xf = ScalarField(lambda x, y, z: (
                (f.func(x + f.h, y, z) - f.func(x - f.h, y, z))
                - 0.5 * y * (f.func(x, y, z + f.h) - f.func(x, y, z - f.h))
            ) / (2 * f.h), h=f.h)
            yf = ScalarField(lambda x, y, z: (
                (f.func(x, y + f.h, z) - f.func(x, y - f.h, z))
                + 0.5 * x * (f.func(x, y, z + f.h) - f.func(x, y, z - f.h))
            ) / (2 * f.h), h=f.h)
            nested = apply_field("X", xf, p) + apply_field("Y", yf, p)
            assert abs(direct - nested) < 1e-4

    def test_richardson_tightens(self):
        f = gaussian(h=1e-2)
        p = GroupPoint(0.5, 0.2, -0.1)
        exact = apply_sublaplacian(gaussian(h=1e-5), p)
        plain = abs(apply_sublaplacian(f, p) - exact)
        extrap = abs(apply_sublaplacian(f, p, richardson=True) - exact)
        assert extrap < plain


class TestKernelBlowup:
    def test_single_shell_value(self):
        (val,) = gamma_l2_blowup([0.5])
        assert val > 0
        assert val == pytest.approx(math.log(2.0) / 8.0, rel=1e-10)

    def test_log_increments(self):
        eps = [0.2, 0.1, 0.05, 0.025]
        vals = gamma_l2_blowup(eps)
        assert all(b > a for a, b in zip(vals, vals[1:]))
        # analytic oracle: the radial integrand is exactly d(rho)/rho
        for e, v in zip(eps, vals):
            assert v == pytest.approx(math.log(1.0 / e) / 8.0, rel=1e-10)
        incs = np.diff(vals)
        assert np.all(np.abs(incs / incs[0] - 1.0) < 0.1)
        assert incs[1] / incs[0] == pytest.approx(1.0, abs=1e-9)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            gamma_l2_blowup([0.1, 0.2])
        with pytest.raises(ValueError):
            gamma_l2_blowup([-0.1])
        with pytest.raises(ValueError):
            gamma_l2_blowup([])
