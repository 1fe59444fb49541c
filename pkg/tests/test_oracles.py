import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import telegraph as tg

from conftest import gaussian


class TestFDConfig:
    def test_cfl_violation_rejected(self):
        with pytest.raises(tg.UsageError):
            tg.FDConfig(dt=0.1, courant=1.5, steps=10)

    def test_config_for_hits_final_time(self, medium):
        grid = tg.SpaceGrid(-4.0, 1.0 / 64, 513)
        cfg = tg.fd_config_for(1.0, grid, medium, 0.9)
        assert cfg.courant <= 0.9 + 1e-12
        assert abs(cfg.steps * cfg.dt - 1.0) < 1e-12

    def test_inconsistent_config_rejected(self, medium):
        grid = tg.SpaceGrid(-4.0, 1.0 / 64, 513)
        bad = tg.FDConfig(dt=0.9 / 64, courant=0.5, steps=72)  # courant lies
        with pytest.raises(tg.UsageError):
            tg.fd_solve(tg.zeros(grid), tg.zeros(grid), 72 * 0.9 / 64, medium, bad)


class TestFDSolve:
    def test_zero_data(self, medium):
        grid = tg.SpaceGrid(-4.0, 1.0 / 64, 513)
        cfg = tg.fd_config_for(1.0, grid, medium)
        out = tg.fd_solve(tg.zeros(grid), tg.zeros(grid), 1.0, medium, cfg)
        assert np.all(out.values == 0.0)

    def test_undamped_matches_dalembert(self):
        m = tg.MediumParams(k=0.0, c=1.0)
        grid = tg.SpaceGrid(-8.0, 1.0 / 512, 8193)
        f = gaussian(grid)
        cfg = tg.fd_config_for(1.0, grid, m, 0.9)
        out = tg.fd_solve(f, tg.zeros(grid), 1.0, m, cfg)
        x = grid.points()
        exact = tg.SampledField(grid, 0.5 * (np.exp(-(x + 1) ** 2)
                                             + np.exp(-(x - 1) ** 2)))
        assert tg.rel_l2_error(out, exact) < 1e-4

    def test_damped_matches_convolution(self, medium, grid_fine):
        f = gaussian(grid_fine)
        g = tg.zeros(grid_fine)
        cfg = tg.fd_config_for(1.0, grid_fine, medium, 0.9)
        approx = tg.fd_solve(f, g, 1.0, medium, cfg)
        reference = tg.solve(f, g, 1.0, medium)
        assert tg.rel_l2_error(approx, reference) < 1e-3

    def test_second_order_convergence(self, medium):
        errors = {}
        for inv_dx in (128, 256):
            grid = tg.SpaceGrid(-8.0, 1.0 / inv_dx, 16 * inv_dx + 1)
            f = gaussian(grid)
            g = tg.zeros(grid)
            cfg = tg.fd_config_for(1.0, grid, medium, 0.9)
            approx = tg.fd_solve(f, g, 1.0, medium, cfg)
            errors[inv_dx] = tg.rel_l2_error(approx, tg.solve(f, g, 1.0, medium))
        assert 3.5 <= errors[128] / errors[256] <= 4.5

    def test_no_spurious_second_solution_within_contraction_horizon(self, medium):
        # uniqueness holds on [0, 2/k]: two independently computed solutions
        # stay within their combined discretization budgets everywhere there
        grid = tg.SpaceGrid(-8.0, 1.0 / 256, 4097)
        f = gaussian(grid)
        g = tg.zeros(grid)
        horizon = 2.0 / medium.k
        for t in (0.5, 1.0, 1.5, horizon):
            cfg = tg.fd_config_for(t, grid, medium, 0.9)
            fd = tg.fd_solve(f, g, t, medium, cfg)
            conv = tg.solve(f, g, t, medium)
            assert np.max(np.abs(fd.values - conv.values)) < 1e-4


class TestWalkParams:
    def test_undamped_never_flips(self):
        p, dx = tg.walk_params(tg.MediumParams(k=0.0, c=1.0), 0.01)
        assert p == 1.0 and dx == 0.01

    def test_scaling_example(self):
        p, _ = tg.walk_params(tg.MediumParams(k=1.0, c=1.0), 0.01)
        assert abs(p - 0.995) < 1e-15

    def test_boundary_of_validity(self):
        p, dx = tg.walk_params(tg.MediumParams(k=2.0, c=1.0), 1.0)
        assert p == 0.0 and dx == 1.0

    def test_out_of_range(self):
        with pytest.raises(tg.UsageError):
            tg.walk_params(tg.MediumParams(k=3.0, c=1.0), 1.0)


class TestSimulateWalk:
    def test_ballistic_when_p_is_one(self):
        cfg = tg.WalkConfig(p=1.0, dx=0.1, dt=0.1, n_steps=25, n_walkers=500,
                            seed=1, first_step="up")
        meas = tg.simulate_walk(cfg)
        assert meas.atoms == ((2.5, 1.0),)
        assert np.all(meas.density.values == 0.0)

    def test_deterministic_for_fixed_seed(self, medium):
        cfg = tg.walk_config_for(medium, 0.01, 0.5, 3000, seed=42)
        a = tg.simulate_walk(cfg)
        b = tg.simulate_walk(cfg)
        assert a.atoms == b.atoms
        assert np.array_equal(a.density.values, b.density.values)

    def test_block_layout_does_not_change_the_walker_count(self, medium):
        cfg = tg.walk_config_for(medium, 0.01, 0.5, 10000, seed=5)
        meas = tg.simulate_walk(cfg)
        assert abs(meas.mass_breakdown().total - 1.0) < 1e-12

    def test_never_flip_statistic_over_seeds(self, medium):
        # fraction within 3 sigma of p^(n-1) in at least 18 of 20 seeded runs
        n_walkers = 20000
        hits = 0
        for seed in range(20):
            cfg = tg.walk_config_for(medium, 0.005, 1.0, n_walkers, seed=seed)
            expect = tg.expected_never_flip(cfg)
            sigma = math.sqrt(expect * (1 - expect) / n_walkers)
            meas = tg.simulate_walk(cfg)
            frac = sum(w for _, w in meas.atoms)
            if abs(frac - expect) <= 3 * sigma:
                hits += 1
        assert hits >= 18

    def test_histogram_bins_are_parity_lattice(self, medium):
        cfg = tg.walk_config_for(medium, 0.01, 0.1, 1000, seed=3)
        meas = tg.simulate_walk(cfg)
        g = meas.density.grid
        assert g.n == cfg.n_steps + 1
        assert g.dx == 2 * cfg.dx
        assert g.x0 == -cfg.n_steps * cfg.dx


class TestBinnedTV:
    def test_small_run_agrees_roughly(self, medium):
        cfg = tg.walk_config_for(medium, 2e-3, 1.0, 100_000, seed=11,
                                 first_step="symmetric")
        estimate = tg.simulate_walk(cfg)
        ref_grid = tg.SpaceGrid(-1.25, 2.5 / 2048, 2049)
        reference = tg.point_source_solution("delta_position", 1.0, medium, ref_grid)
        assert tg.binned_tv_distance(estimate, reference) < 0.06

    def test_requires_closed_form_reference(self, medium):
        cfg = tg.walk_config_for(medium, 0.01, 0.1, 100, seed=0)
        est = tg.simulate_walk(cfg)
        with pytest.raises(tg.UsageError):
            tg.binned_tv_distance(est, est)


class TestDuhamel:
    def test_zero_data(self, medium):
        grid = tg.SpaceGrid(-4.0, 1.0 / 64, 513)
        z = tg.zeros(grid)
        assert tg.duhamel_residual(z, z, 1.0, medium,
                                   tg.DuhamelConfig(n_slabs=4)) == 0.0

    def test_undamped_reduces_to_dalembert_identity(self):
        m = tg.MediumParams(k=0.0, c=1.0)
        grid = tg.SpaceGrid(-4.0, 1.0 / 128, 1025)
        f = gaussian(grid, width=0.8)
        g = gaussian(grid, center=0.3, width=0.9)
        assert tg.duhamel_residual(f, g, 1.0, m, tg.DuhamelConfig(n_slabs=4)) < 1e-8

    def test_refinement_decreases_residual(self, medium):
        grid = tg.SpaceGrid(-4.0, 1.0 / 128, 1025)
        f = gaussian(grid)
        g = tg.zeros(grid)
        cache = {}
        residuals = [tg.duhamel_residual(f, g, 1.0, medium,
                                         tg.DuhamelConfig(n_slabs=n), cache=cache)
                     for n in (4, 8, 16)]
        floor = 1e-9
        for coarse, fine in zip(residuals, residuals[1:]):
            if coarse < floor:
                break
            assert coarse / fine >= 2.0

    def test_cone_must_fit(self, medium):
        grid = tg.SpaceGrid(-0.4, 0.01, 81)
        f = gaussian(grid, width=0.1)
        with pytest.raises(tg.UsageError):
            tg.duhamel_residual(f, tg.zeros(grid), 1.0, medium)

    def test_needs_positive_time(self, medium):
        grid = tg.SpaceGrid(-4.0, 1.0 / 64, 513)
        z = tg.zeros(grid)
        with pytest.raises(tg.UsageError):
            tg.duhamel_residual(z, z, 0.0, medium)


class TestValidationReport:
    @given(value=st.floats(min_value=0, max_value=10),
           tol=st.floats(min_value=0, max_value=10))
    def test_pass_iff_within_tolerance(self, value, tol):
        report = tg.ValidationReport("x", "max_abs", value, tol)
        assert report.passed == (value <= tol)

    def test_unknown_metric_rejected(self):
        with pytest.raises(tg.UsageError):
            tg.ValidationReport("x", "chebyshev", 0.0, 1.0)


class TestRelL2:
    def test_zero_reference_returns_absolute(self, grid_coarse):
        a = tg.SampledField(grid_coarse, np.full(grid_coarse.n, 2.0))
        z = tg.zeros(grid_coarse)
        assert tg.rel_l2_error(a, z) == math.sqrt(4.0 * grid_coarse.n)

    def test_window_restriction(self, grid_coarse):
        x = grid_coarse.points()
        a = tg.SampledField(grid_coarse, np.where(np.abs(x) > 2, 5.0, 1.0))
        b = tg.SampledField(grid_coarse, np.ones(grid_coarse.n))
        assert tg.rel_l2_error(a, b, window=(-1.0, 1.0)) == 0.0
