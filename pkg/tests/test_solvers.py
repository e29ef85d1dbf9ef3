import numpy as np
import pytest

from rowaction import (
    ElasticNet,
    HalfSpace,
    Hyperplane,
    InstanceSpec,
    Interval,
    RowMatrix,
    SolverConfig,
    SquaredNorm,
    canonical_method,
    fit_linear_rate,
    gen_gaussian_instance,
    rbpsfp_run,
    run,
    solve_dual,
)


class TestMethodNames:
    def test_aliases(self):
        assert canonical_method("sk") == "sk_cyclic"
        assert canonical_method("rsk-smoothed") == "rsk_smoothed"
        with pytest.raises(ValueError):
            canonical_method("gauss_seidel")

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(method="rsk", lam=0.0).validate()
        with pytest.raises(ValueError):
            SolverConfig(max_iters=0).validate()
        with pytest.raises(ValueError):
            SolverConfig(epsilon=-1.0).validate()


class TestRun:
    def test_rsk_hand_iteration(self):
        # 2x = 2 with lam = 0.5: xstar walks 0, 1, 1.5 and stays
        A = RowMatrix([[2.0]])
        b = np.array([2.0])
        xstars, xs = [0.0], [0.0]
        for iters in (1, 2, 3, 4):
            state, _ = run(A, b, SolverConfig(method="rsk", lam=0.5, max_iters=iters, log_every=1, tol_residual=0.0))
            xstars.append(state.xstar[0])
            xs.append(state.x[0])
        assert xstars == pytest.approx([0.0, 1.0, 1.5, 1.5, 1.5])
        assert xs == pytest.approx([0.0, 0.5, 1.0, 1.0, 1.0])

    def test_rk_identity_system(self):
        A = RowMatrix(np.eye(2))
        b = np.array([1.0, 1.0])
        state, log = run(A, b, SolverConfig(method="rk", max_iters=50, log_every=1, tol_residual=0.0))
        assert np.allclose(state.x, b)
        assert log.residual[-1] == 0.0

    def test_ersk_single_row_feasible_in_one_step(self):
        A = RowMatrix([[3.0, -1.0, 2.0]])
        b = np.array([4.0])
        state, _ = run(A, b, SolverConfig(method="ersk", lam=1.0, max_iters=1, log_every=1))
        assert abs(float(A.rows[0] @ state.x) - 4.0) <= 1e-9

    def test_cyclic_visits_rows_in_order(self):
        # rows are orthogonal, so after one sweep of sk_cyclic with tiny lam
        # every coordinate has been touched exactly once
        A = RowMatrix(np.diag([1.0, 1.0, 1.0]))
        b = np.array([5.0, 5.0, 5.0])
        cfg = SolverConfig(method="sk", lam=1e-9, max_iters=3, log_every=1, tol_residual=0.0)
        state, log = run(A, b, cfg)
        assert np.allclose(state.x, b - 1e-9)
        # after k=1 only the first coordinate moved
        partial, _ = run(A, b, SolverConfig(method="sk", lam=1e-9, max_iters=1, log_every=1))
        assert partial.x[0] != 0.0 and partial.x[1] == 0.0 and partial.x[2] == 0.0

    def test_zero_rhs_rejected(self):
        with pytest.raises(ValueError):
            run(RowMatrix(np.eye(2)), np.zeros(2), SolverConfig(method="rk"))

    def test_determinism_bit_identical_logs(self):
        A, x_hat, b, _ = gen_gaussian_instance(InstanceSpec(m=30, n=10, s=3, seed=5))
        cfg = SolverConfig(method="rsk", lam=1.0, max_iters=300, log_every=7, seed=99)
        _, log1 = run(A, b, cfg, reference=x_hat)
        _, log2 = run(A, b, cfg, reference=x_hat)
        assert np.array_equal(log1.ks, log2.ks)
        assert np.array_equal(log1.residual, log2.residual)
        assert np.array_equal(log1.error, log2.error)
        assert np.array_equal(log1.bregman, log2.bregman)

    def test_log_indices_strictly_increasing(self):
        A, _, b, _ = gen_gaussian_instance(InstanceSpec(m=20, n=8, s=3, seed=6))
        _, log = run(A, b, SolverConfig(method="rk", max_iters=103, log_every=10))
        assert np.all(np.diff(log.ks) > 0)
        assert log.ks[0] == 0 and log.ks[-1] == 103

    def test_coupling_at_logged_iterations(self):
        A, _, b, _ = gen_gaussian_instance(InstanceSpec(m=25, n=10, s=4, seed=7))
        for method, lam in (("rsk", 1.0), ("ersk", 0.5), ("rsk-smoothed", 1.0)):
            cfg = SolverConfig(method=method, lam=lam, max_iters=200, log_every=1)
            state, _ = run(A, b, cfg)
            f = ElasticNet(lam) if method != "rsk-smoothed" else None
            if f is not None:
                assert np.max(np.abs(state.x - f.conjugate_gradient(state.xstar))) < 1e-10

    def test_ersk_satisfies_selected_row_each_step(self):
        # replay the sampler stream to learn which row step k touched,
        # then rerun k steps (determinism) and check that row is met
        from rowaction.rng import CumulativeSampler, Xoshiro256pp

        A, _, b, _ = gen_gaussian_instance(InstanceSpec(m=18, n=7, s=3, seed=14))
        seed = 42
        replay_rng = Xoshiro256pp(seed)
        sampler = CumulativeSampler(A.row_norm_sq / A.frob_sq)
        rows_hit = [sampler.draw(replay_rng) for _ in range(40)]
        for k in range(1, 41):
            cfg = SolverConfig(
                method="ersk", lam=0.8, max_iters=k, log_every=k, seed=seed, tol_residual=0.0
            )
            state, _ = run(A, b, cfg)
            i = rows_hit[k - 1]
            assert abs(float(A.rows[i] @ state.x) - b[i]) <= 1e-9 * (1.0 + abs(b[i]))

    def test_smoothed_variant_converges(self):
        # full column rank and consistent: every potential targets the
        # planted solution, the smoothing only changes the link map
        A, x_hat, b, _ = gen_gaussian_instance(InstanceSpec(m=60, n=12, s=4, seed=15))
        cfg = SolverConfig(method="rsk-smoothed", lam=1.0, max_iters=5000, seed=1, log_every=100)
        state, log = run(A, b, cfg, reference=x_hat)
        assert log.error[-1] <= 1e-8

    def test_dual_iterate_stays_in_row_space(self):
        A, _, b, _ = gen_gaussian_instance(InstanceSpec(m=12, n=30, s=5, seed=8))
        for method in ("rk", "rsk", "ersk"):
            cfg = SolverConfig(method=method, lam=0.8, max_iters=400, seed=3)
            state, _ = run(A, b, cfg)
            coeffs, _, _, _ = np.linalg.lstsq(A.rows.T, state.xstar, rcond=None)
            resid = np.linalg.norm(A.rows.T @ coeffs - state.xstar)
            assert resid <= 1e-8 * max(np.linalg.norm(state.xstar), 1e-12)

    def test_monotone_bregman_decrease_small_instance(self):
        A, _, b, _ = gen_gaussian_instance(InstanceSpec(m=40, n=12, s=4, seed=9))
        x_bp = solve_dual(A, b, ElasticNet(1.0), tol=1e-11 * np.linalg.norm(b)).x_hat
        for method in ("rsk", "ersk"):
            cfg = SolverConfig(method=method, lam=1.0, max_iters=2000, log_every=1, seed=4)
            _, log = run(A, b, cfg, reference=x_bp)
            assert np.all(np.diff(log.bregman) <= 1e-9)

    def test_rk_expected_contraction_smoke(self):
        # compressed version of the acceptance run: 40 seeds, 30 steps
        from rowaction import smallest_positive_singular_value

        A, x_hat, b, _ = gen_gaussian_instance(InstanceSpec(m=30, n=10, s=10, seed=21))
        bound = 1.0 - smallest_positive_singular_value(A) ** 2 / A.frob_sq
        sq_err = []
        for t in range(40):
            cfg = SolverConfig(method="rk", max_iters=31, log_every=1, seed=100 + t, tol_residual=0.0)
            _, log = run(A, b, cfg, reference=x_hat)
            sq_err.append((np.asarray(log.error) * np.linalg.norm(x_hat)) ** 2)
        mean_sq = np.mean(sq_err, axis=0)
        ratios = mean_sq[2:31] / mean_sq[1:30]
        assert ratios.mean() <= bound + 0.08


class TestRbpsfp:
    def test_feasible_start_is_noop(self):
        constraints = [
            Interval(np.array([1.0, 0.0]), 0.0, 1.0),
            HalfSpace(np.array([0.0, 1.0]), 2.0),
        ]
        cfg = SolverConfig(method="rbpsfp", lam=1.0, max_iters=20, log_every=1)
        state, log = rbpsfp_run(SquaredNorm(), constraints, cfg)
        assert np.all(state.x == 0.0)
        assert np.all(log.violation == 0.0)

    def test_single_interval_projects_to_nearest_boundary(self):
        constraints = [Interval(np.array([1.0, 0.0]), 1.0, 0.5)]
        cfg = SolverConfig(method="rbpsfp", lam=1.0, max_iters=1, log_every=1)
        state, _ = rbpsfp_run(SquaredNorm(), constraints, cfg)
        assert np.allclose(state.x, [0.5, 0.0])

    def test_hyperplane_only_reproduces_ersk(self):
        A, _, b, _ = gen_gaussian_instance(InstanceSpec(m=15, n=6, s=3, seed=10))
        cfg = SolverConfig(method="ersk", lam=0.7, max_iters=150, log_every=10, seed=17, tol_residual=0.0)
        state_e, log_e = run(A, b, cfg)
        constraints = [Hyperplane(A.rows[i], b[i]) for i in range(A.m)]
        cfg_b = SolverConfig(
            method="rbpsfp", lam=0.7, max_iters=150, log_every=10, seed=17,
            step_mode="exact", tol_residual=0.0,
        )
        state_b, _ = rbpsfp_run(ElasticNet(0.7), constraints, cfg_b)
        assert np.array_equal(state_e.xstar, state_b.xstar)
        assert np.array_equal(state_e.x, state_b.x)

    def test_mixed_constraints_converge_to_feasibility(self):
        constraints = [
            Hyperplane(np.array([1.0, 1.0]), 2.0),
            Interval(np.array([1.0, -1.0]), 0.0, 0.25),
            HalfSpace(np.array([0.0, 1.0]), 1.5),
        ]
        cfg = SolverConfig(method="rbpsfp", lam=0.5, max_iters=400, log_every=10, seed=2)
        state, log = rbpsfp_run(ElasticNet(0.5), constraints, cfg)
        assert log.violation[-1] <= 1e-6

    def test_inexact_mode_also_converges(self):
        constraints = [
            Hyperplane(np.array([1.0, 1.0]), 2.0),
            Interval(np.array([1.0, -1.0]), 0.0, 0.25),
        ]
        cfg = SolverConfig(
            method="rbpsfp", lam=0.5, max_iters=800, log_every=10, seed=2, step_mode="inexact"
        )
        _, log = rbpsfp_run(ElasticNet(0.5), constraints, cfg)
        assert log.violation[-1] <= 1e-6

    def test_empty_constraints_rejected(self):
        with pytest.raises(ValueError):
            rbpsfp_run(SquaredNorm(), [], SolverConfig(method="rbpsfp"))


class TestFitLinearRate:
    def test_exact_geometric(self):
        assert fit_linear_rate([1.0, 0.5, 0.25]) == pytest.approx(0.5)

    def test_constant(self):
        assert fit_linear_rate([0.7, 0.7, 0.7, 0.7]) == pytest.approx(1.0)

    def test_noisy_geometric(self):
        rng = np.random.default_rng(12)
        q = 0.9
        e = q ** np.arange(200) * (1.0 + 0.01 * rng.normal(size=200))
        assert fit_linear_rate(e) == pytest.approx(q, abs=0.02)

    def test_rejects_nonpositive_and_short(self):
        with pytest.raises(ValueError):
            fit_linear_rate([1.0, 0.0, 0.5])
        with pytest.raises(ValueError):
            fit_linear_rate([1.0, 0.5])
