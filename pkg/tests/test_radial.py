"""Grid, quadrature, norms, and the scaling transform.

Expected values are closed forms for exponential profiles:
    4*pi int r^2 e^{-r} dr = 8*pi            (Gamma(3) = 2)
    4*pi int r^2 e^{-2r} dr = pi             (2 / 2^3 = 1/4)
    u = e^{-r/2}: |grad u|_2^2 = 2*pi, |u|_2^2 = 8*pi, |u|_4^4 = pi
"""

import numpy as np
import pytest

from schrodinger_maxwell import (
    RadialField,
    grad_norm_sq,
    h1_inner,
    h1_norm_sq,
    integrate3d,
    lp_norm,
    make_grid,
    random_smooth_field,
    scale_transform,
)


def field(grid, fn):
    return RadialField.from_function(grid, fn)


class TestMakeGrid:
    def test_spacing(self):
        assert make_grid(20.0, 2048).h == 20.0 / 2047
        assert make_grid(40.0, 4096).h == 40.0 / 4095

    def test_nodes(self):
        grid = make_grid(12.5, 128)
        assert grid.r[0] == 0.0
        assert grid.r[-1] == 12.5
        assert np.all(np.diff(grid.r) > 0)

    @pytest.mark.parametrize("r_max,n", [(0.0, 100), (-1.0, 100), (10.0, 15)])
    def test_rejects(self, r_max, n):
        with pytest.raises(ValueError):
            make_grid(r_max, n)

    def test_field_shape_checked(self):
        grid = make_grid(10.0, 64)
        with pytest.raises(ValueError):
            RadialField(grid, np.zeros(63))
        with pytest.raises(ValueError):
            RadialField(grid, np.full(64, np.nan))


class TestIntegrate3d:
    def test_zero(self):
        grid = make_grid(20.0, 256)
        assert integrate3d(RadialField.zeros(grid)) == 0.0

    def test_exponential_closed_forms(self):
        grid = make_grid(40.0, 4096)
        v1 = integrate3d(field(grid, lambda r: np.exp(-r)))
        assert v1 == pytest.approx(8.0 * np.pi, rel=1e-4)
        v2 = integrate3d(field(grid, lambda r: np.exp(-2.0 * r)))
        assert v2 == pytest.approx(np.pi, rel=1e-4)

    def test_convergence_under_refinement(self):
        errs = []
        for n in (513, 1025, 2049, 4097):
            grid = make_grid(40.0, n)
            val = integrate3d(field(grid, lambda r: np.exp(-r)))
            errs.append(abs(val - 8.0 * np.pi))
        for coarse, fine in zip(errs, errs[1:]):
            assert coarse / fine >= 3.5


class TestH1Norm:
    def test_zero(self):
        grid = make_grid(20.0, 256)
        assert h1_norm_sq(RadialField.zeros(grid)) == 0.0

    def test_exp_half(self):
        grid = make_grid(40.0, 4096)
        u = field(grid, lambda r: np.exp(-r / 2.0))
        assert h1_norm_sq(u) == pytest.approx(10.0 * np.pi, rel=1e-3)
        assert grad_norm_sq(u) == pytest.approx(2.0 * np.pi, rel=1e-3)

    def test_quadratic_scaling_exact(self):
        grid = make_grid(20.0, 512)
        rng = np.random.default_rng(7)
        u = random_smooth_field(grid, rng)
        doubled = RadialField(grid, 2.0 * u.values)
        assert h1_norm_sq(doubled) == 4.0 * h1_norm_sq(u)


class TestLpNorm:
    def test_zero(self):
        grid = make_grid(20.0, 256)
        assert lp_norm(RadialField.zeros(grid), 4.0) == 0.0

    def test_exp_half_closed_forms(self):
        grid = make_grid(40.0, 4096)
        u = field(grid, lambda r: np.exp(-r / 2.0))
        assert lp_norm(u, 2.0) == pytest.approx(np.sqrt(8.0 * np.pi), rel=1e-4)
        assert lp_norm(u, 4.0) == pytest.approx(np.pi**0.25, rel=1e-4)

    def test_homogeneity(self):
        grid = make_grid(20.0, 512)
        rng = np.random.default_rng(3)
        u = random_smooth_field(grid, rng)
        for c in (-2.7, 0.3, 11.0):
            scaled = RadialField(grid, c * u.values)
            assert lp_norm(scaled, 3.0) == pytest.approx(
                abs(c) * lp_norm(u, 3.0), rel=1e-12
            )

    def test_rejects_small_exponent(self):
        grid = make_grid(20.0, 256)
        with pytest.raises(ValueError):
            lp_norm(RadialField.zeros(grid), 0.5)


class TestH1Inner:
    def test_induces_norm(self):
        grid = make_grid(20.0, 512)
        rng = np.random.default_rng(5)
        u = random_smooth_field(grid, rng)
        assert h1_inner(u, u) == h1_norm_sq(u)

    def test_symmetry_and_zero(self):
        grid = make_grid(20.0, 512)
        rng = np.random.default_rng(6)
        u = random_smooth_field(grid, rng)
        v = random_smooth_field(grid, rng)
        assert h1_inner(u, v) == pytest.approx(h1_inner(v, u), rel=1e-13, abs=1e-13)
        assert h1_inner(u, RadialField.zeros(grid)) == 0.0

    def test_grid_mismatch(self):
        u = RadialField.zeros(make_grid(20.0, 256))
        v = RadialField.zeros(make_grid(20.0, 257))
        with pytest.raises(ValueError):
            h1_inner(u, v)

    def test_cauchy_schwarz(self):
        grid = make_grid(20.0, 512)
        rng = np.random.default_rng(11)
        for _ in range(100):
            u = random_smooth_field(grid, rng)
            v = random_smooth_field(grid, rng)
            lhs = h1_inner(u, v) ** 2
            rhs = h1_norm_sq(u) * h1_norm_sq(v)
            assert lhs <= rhs * (1.0 + 1e-12)


class TestScaleTransform:
    def test_identity(self):
        grid = make_grid(20.0, 512)
        rng = np.random.default_rng(2)
        u = random_smooth_field(grid, rng)
        assert np.array_equal(scale_transform(u, 1.0).values, u.values)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_rejects(self, t):
        grid = make_grid(20.0, 256)
        with pytest.raises(ValueError):
            scale_transform(RadialField.zeros(grid), t)

    def test_scaling_laws(self):
        # w_t(x) = t^2 w(t x): the gradient part scales like t^3, the L^2
        # part like t, and |.|_{p+1}^{p+1} like t^{2p-1}
        grid = make_grid(40.0, 4096)
        w = field(grid, lambda r: np.exp(-r / 2.0))
        t = 2.0
        wt = scale_transform(w, t)
        assert grad_norm_sq(wt) == pytest.approx(t**3 * 2.0 * np.pi, rel=1e-3)
        assert lp_norm(wt, 2.0) ** 2 == pytest.approx(t * 8.0 * np.pi, rel=1e-3)
        assert lp_norm(wt, 4.0) ** 4 == pytest.approx(t**5 * np.pi, rel=1e-3)

    def test_composition(self):
        # (w_s)_t = w_{st} up to the linear-interpolation error of the two
        # evaluation routes; a wide profile keeps that below 1e-6 nodewise
        grid = make_grid(20.0, 16385)
        w = field(grid, lambda r: np.exp(-(r**2) / 12.5))
        s, t = 1.25, 1.4
        via = scale_transform(scale_transform(w, s), t)
        direct = scale_transform(w, s * t)
        assert np.max(np.abs(via.values - direct.values)) <= 1e-6

    def test_zero_extension(self):
        grid = make_grid(10.0, 256)
        w = field(grid, lambda r: 1.0 / (1.0 + r**2))
        wt = scale_transform(w, 2.0)
        outside = grid.r > 10.0 / 2.0
        assert np.all(wt.values[outside] == 0.0)
