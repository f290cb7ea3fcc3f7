import numpy as np
import pytest

from conftest import scalar_problem
from splitvi.hilbert import scaled_identity
from splitvi.operators import (
    make_affine_gradient,
    make_scaled_identity_monotone,
    make_scaled_strongly_monotone,
    make_zero_ism,
)
from splitvi.problems import SviProblem, example1_initial
from splitvi.solvers import (
    Constant,
    PowerAlpha,
    Schedule,
    SolverConfig,
    example1_schedule,
    example2_schedule,
    regularization_path,
    run,
    solve_rsvi_fixed_alpha,
    step_forward_backward,
    step_moudafi,
    step_regularized,
    validate_schedule,
)

T1 = 0.9 / 1.7  # T(1) for the 1-D instance at lam = 0.1


def test_step_values_1d(one_d):
    assert step_regularized(one_d, [1.0], 0.1, 0.5)[0] == pytest.approx((1 - 0.2 - 0.1 * (1 - T1) - 0.2) / 1.3, abs=1e-15)
    assert step_regularized(one_d, [1.0], 0.1, 0.5)[0] == pytest.approx(0.4253394, abs=1e-7)
    assert step_forward_backward(one_d, [1.0], 0.1)[0] == pytest.approx(0.5791855, abs=1e-7)
    assert step_moudafi(one_d, [1.0], 0.1, 0.1)[0] == pytest.approx(0.5864253, abs=1e-7)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.9])
def test_steps_fix_example1_solution(ex1, alpha):
    z = np.zeros(200)
    np.testing.assert_array_equal(step_regularized(ex1, z, 0.1, alpha), z)
    np.testing.assert_array_equal(step_moudafi(ex1, z, 0.1, 0.1), z)


@pytest.mark.parametrize("lam", [0.01, 1 / 15, 0.09])
def test_steps_fix_example2_solution(ex2, lam):
    u = ex2.known_solution
    np.testing.assert_allclose(step_forward_backward(ex2, u, lam), u, atol=1e-12)
    np.testing.assert_allclose(step_moudafi(ex2, u, lam, 1 / 15), u, atol=1e-12)
    # F(u) != 0, so the regularized step only fixes u when alpha = 0
    np.testing.assert_allclose(step_regularized(ex2, u, lam, 0.0), u, atol=1e-12)


def test_regularized_alpha_zero_is_forward_backward_bitwise(ex1, ex2):
    rng = np.random.default_rng(0)
    for p in (ex1, ex2):
        for _ in range(50):
            z = 10 * rng.standard_normal(p.n1)
            lam = rng.uniform(0.01, 0.2)
            assert np.array_equal(step_regularized(p, z, lam, 0.0), step_forward_backward(p, z, lam))


def test_moudafi_with_identity_T_is_single_space_forward_backward():
    B1 = make_scaled_identity_monotone(3, 2)
    f1 = make_affine_gradient(2.0, [1.0, -1.0])
    p = SviProblem(B1, make_scaled_identity_monotone(0, 2), f1, make_zero_ism(2),
                   scaled_identity(1.5, 2), make_scaled_strongly_monotone(1.0, 2))
    z = np.array([0.7, -2.0])
    lam = 0.2
    np.testing.assert_array_equal(step_moudafi(p, z, lam, 0.3), B1(lam, z - lam * f1(z)))


def test_step_argument_checks(one_d):
    with pytest.raises(ValueError):
        step_regularized(one_d, [1.0], 0.0, 0.1)
    with pytest.raises(ValueError):
        step_regularized(one_d, [1.0], 0.1, -0.1)
    with pytest.raises(ValueError):
        step_moudafi(one_d, [1.0], 0.1, 0.0)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig("newton")
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolverConfig(tol=0)
    with pytest.raises(ValueError):
        SolverConfig(stop_rule="gap")
    assert SolverConfig(moudafi_lambda=0.3).gamma == 0.3


def test_run_trace_and_convergence_flag(ex1):
    cfg = SolverConfig("regularized", max_iter=500, tol=1e-6)
    res = run(ex1, example1_schedule(), cfg, example1_initial("Ia"))
    assert res.converged
    assert res.iterations == len(res.trace)
    assert [r.n for r in res.trace.rows] == list(range(1, res.iterations + 1))
    assert res.final_tol <= cfg.tol
    assert all(r.tol_value > cfg.tol for r in res.trace.rows[:-1])
    assert res.trace.rows[0].lam == pytest.approx(0.1)
    assert res.trace.rows[0].alpha == pytest.approx(0.75)
    assert res.trace.rows[0].iterate is None  # dim 200 keeps norms only


def test_run_max_iter_one(ex1):
    res = run(ex1, example1_schedule(), SolverConfig(max_iter=1), example1_initial("Ia"))
    assert not res.converged and res.iterations == 1


def test_run_forward_backward_and_moudafi_alpha_columns(ex2):
    for variant in ("forward_backward", "moudafi"):
        cfg = SolverConfig(variant, max_iter=300, tol=1e-4, stop_rule="distance",
                           moudafi_lambda=1 / 15)
        res = run(ex2, example2_schedule(), cfg, [1, -2, 16])
        assert res.converged
        assert all(r.alpha == 0.0 for r in res.trace.rows)
        assert res.trace.rows[0].iterate is not None


def test_run_moudafi_gamma_warning(ex2):
    cfg = SolverConfig("moudafi", max_iter=5, moudafi_lambda=0.05, moudafi_gamma=0.3,
                       stop_rule="distance")
    res = run(ex2, example2_schedule(), cfg, [1, 1, 1])
    assert res.warnings and "gamma" in res.warnings[0]
    ok = run(ex2, example2_schedule(), SolverConfig("moudafi", max_iter=5, moudafi_lambda=1 / 15,
                                                    stop_rule="distance"), [1, 1, 1])
    assert ok.warnings == []


def test_distance_rule_needs_known_solution(one_d):
    with pytest.raises(ValueError):
        run(one_d, example1_schedule(), SolverConfig(stop_rule="distance"), [1.0])


def test_fejer_monotone_forward_backward_example2(ex2):
    for z1 in ([1, -2, 16], [15, 9, 0], [1, 0, 6], [11, 1, -3]):
        cfg = SolverConfig("forward_backward", max_iter=3000, tol=1e-14, stop_rule="distance")
        res = run(ex2, example2_schedule(), cfg, z1)
        d = np.concatenate([[res.trace.initial_dist], res.trace.column("dist_to_known")])
        assert np.all(np.diff(d) <= 1e-12)
        assert res.trace.column("step_norm").min() < 1e-8


def test_vanishing_steps_example1(ex1):
    cfg = SolverConfig("forward_backward", max_iter=2000, tol=1e-300)
    res = run(ex1, example1_schedule(), cfg, example1_initial("Ic"))
    assert res.trace.column("step_norm").min() < 1e-8


def test_validate_schedule_example1(ex1):
    rep = validate_schedule(example1_schedule(), ex1, horizon=10_000)
    assert rep.all_passed, rep.checks
    # |da|/a^2 ~ n^{-1/2}/6
    n = 10_000
    a = example1_schedule().alpha_at
    assert abs(a(n + 1) - a(n)) / a(n) ** 2 == pytest.approx(n ** -0.5 / 6, rel=0.02)


def test_validate_schedule_example2(ex2):
    assert validate_schedule(example2_schedule(), ex2, horizon=10_000).all_passed


def test_validate_schedule_negative_controls(ex1):
    lam = example1_schedule().lambda_at
    const = validate_schedule(Schedule(Constant(0.5), lam), ex1, 1000)
    assert const.by_name("alpha-to-zero").status == "advisory-fail"
    assert not const.hard_failed
    summable = validate_schedule(Schedule(PowerAlpha(1.0, 2.0), lam), ex1, 10_000)
    assert summable.by_name("alpha-sum-diverges").status == "advisory-fail"
    # alpha_1 = 1 is outside (0, 1)
    assert summable.by_name("alpha-range").status == "fail"
    rho2 = validate_schedule(Schedule(example1_schedule().alpha_at, lam, rho=2.0), ex1, 100)
    assert rho2.hard_failed
    wide = validate_schedule(Schedule(Constant(0.1), Constant(0.3)), ex1, 100)
    assert wide.by_name("lambda-band").status == "fail"
    with pytest.raises(ValueError):
        validate_schedule(example1_schedule(), ex1, horizon=5)


def test_fixed_alpha_example1_is_zero(ex1):
    for alpha in (1.0, 0.1, 1e-3):
        sol = solve_rsvi_fixed_alpha(ex1, alpha, 0.1, z0=example1_initial("Ia"))
        assert sol.converged
        assert np.linalg.norm(sol.x) < 1e-10


def _bisect(g, lo, hi, tol=1e-15):
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("shift", [0.0, -1.0, 2.5])
def test_fixed_alpha_1d_matches_bisection(shift):
    # B1=3x, f1=2x+shift, B2=7x, f2=x, A=1, F=4x; x_alpha solves
    # 0 = 3x + 2x + shift + (x - T x) + alpha*4x with T x = (x - lam x) / (1 + 7 lam)
    lam, alpha = 0.1, 0.5
    base = scalar_problem()
    p = SviProblem(base.B1, base.B2, make_affine_gradient(2.0, [shift]), base.f2, base.A, base.F)
    g = lambda x: 3 * x + 2 * x + shift + (x - (x - lam * x) / (1 + 7 * lam)) + alpha * 4 * x
    expected = _bisect(g, -10.0, 10.0)
    sol = solve_rsvi_fixed_alpha(p, alpha, lam, tol=1e-15)
    assert sol.converged
    assert sol.x[0] == pytest.approx(expected, abs=1e-12)


def test_fixed_alpha_example2_approaches_solution(ex2):
    u = ex2.known_solution
    d = [np.linalg.norm(solve_rsvi_fixed_alpha(ex2, a, 1 / 15).x - u) for a in (0.1, 0.01, 1e-3, 1e-4)]
    assert all(b < a for a, b in zip(d, d[1:]))
    assert d[-1] < 1e-3


@pytest.mark.parametrize("alpha", [0.5, 0.1, 0.01])
def test_fixed_alpha_variational_inequality_probe(ex2, alpha):
    x = solve_rsvi_fixed_alpha(ex2, alpha, 1 / 15).x
    u = ex2.known_solution
    assert ex2.F(x) @ (u - x) >= -1e-6


def test_fixed_alpha_rejects_nonpositive_alpha(ex2):
    with pytest.raises(ValueError):
        solve_rsvi_fixed_alpha(ex2, 0.0, 0.05)


def test_fixed_alpha_nonconvergence_flag(ex2):
    sol = solve_rsvi_fixed_alpha(ex2, 0.1, 1 / 15, tol=1e-300, max_iter=3)
    assert not sol.converged and sol.iterations == 3


def test_regularization_path_example2(ex2):
    rep = regularization_path(ex2, [0.1, 0.05, 0.01, 0.001], 1 / 15)
    assert rep.complete
    d = rep.dists
    assert all(b <= a for a, b in zip(d, d[1:]))
    ratios = [r.ratio for r in rep.rows[1:]]
    assert rep.rows[0].ratio is None
    assert max(ratios) == rep.m_estimate < 1.0
    assert rep.max_norm <= 1.0 + 1e-12


def test_regularization_path_example1_is_zero(ex1):
    rep = regularization_path(ex1, [0.5, 0.1, 0.01], 0.1)
    assert rep.max_norm == 0.0
    assert rep.m_estimate == 0.0


def test_regularization_path_input_checks(ex2):
    with pytest.raises(ValueError):
        regularization_path(ex2, [0.1, 0.2], 0.05)
    with pytest.raises(ValueError):
        regularization_path(ex2, [0.1, -0.01], 0.05)
    single = regularization_path(ex2, [0.1], 0.05)
    assert single.m_estimate is None
