import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from splitvi.operators import (
    ConvexSet,
    ResolventOperator,
    check_firmly_nonexpansive_sampled,
    check_ism_sampled,
    check_nonexpansive_sampled,
    forward_backward_map,
    make_affine_gradient,
    make_diagonal_ism,
    make_l1_resolvent,
    make_normal_cone_resolvent,
    make_scaled_identity_monotone,
    make_zero_ism,
    project_convex,
    prox_l1,
    resolvent_eval,
)
from splitvi.solvers import _split_correction

vec3 = arrays(float, 3, elements=st.floats(-50, 50, allow_nan=False))


def test_scaled_identity_resolvent():
    np.testing.assert_allclose(resolvent_eval(make_scaled_identity_monotone(3, 1), 1.0, [4.0]), [1.0])
    np.testing.assert_allclose(resolvent_eval(make_scaled_identity_monotone(7, 1), 0.1, [1.7]), [1.0])
    np.testing.assert_allclose(make_scaled_identity_monotone(3, 2)(1.0, [13.0, 0.0]), [3.25, 0.0])
    np.testing.assert_allclose(make_scaled_identity_monotone(7, 1)(0.5, [9.0]), [2.0])
    x = np.array([1.5, -2.0])
    np.testing.assert_array_equal(make_scaled_identity_monotone(0, 2)(0.3, x), x)


def test_resolvent_fixes_zeros():
    B = make_scaled_identity_monotone(5, 3)
    np.testing.assert_array_equal(B(0.7, np.zeros(3)), np.zeros(3))


def test_resolvent_rejects_bad_lambda():
    with pytest.raises(ValueError):
        resolvent_eval(make_l1_resolvent(2), 0.0, [1.0, 2.0])
    with pytest.raises(ValueError):
        make_scaled_identity_monotone(-1, 2)


def test_diagonal_ism():
    f = make_diagonal_ism([1, 1 / 2, 1 / 3])
    np.testing.assert_allclose(f([3, 4, 6]), [3, 2, 2])
    assert f.tau == 1.0
    g = make_diagonal_ism([2.0, 2.0])
    assert g.tau == 0.5
    np.testing.assert_array_equal(g(np.zeros(2)), np.zeros(2))
    with pytest.raises(ValueError):
        make_diagonal_ism([1.0, 0.0])


def test_prox_l1_examples():
    np.testing.assert_array_equal(prox_l1(1.0, [2, -0.5, 0]), [1, 0, 0])
    np.testing.assert_array_equal(prox_l1(0.25, [-1, 1]), [-0.75, 0.75])
    np.testing.assert_array_equal(prox_l1(0.3, np.zeros(4)), np.zeros(4))


@settings(max_examples=200, deadline=None)
@given(vec3, st.floats(0.01, 5))
def test_prox_l1_is_minimizer(x, lam):
    # p minimizes lam*|t| + (t - x)^2 / 2 iff x - p lies in lam * subdiff|p|
    p = prox_l1(lam, x)
    r = x - p
    for pi, ri in zip(p, r):
        if pi != 0:
            assert ri == pytest.approx(lam * np.sign(pi), abs=1e-9)
        else:
            assert abs(ri) <= lam + 1e-12


def test_projection_examples():
    np.testing.assert_array_equal(project_convex(ConvexSet.box([0, 0], [1, 1]), [2, -1]), [1, 0])
    np.testing.assert_allclose(project_convex(ConvexSet.ball([0, 0], 1), [3, 4]), [0.6, 0.8])
    x = np.array([7.0, -3.0])
    np.testing.assert_array_equal(project_convex(ConvexSet.whole_space(), x), x)


def test_convex_set_validation():
    with pytest.raises(ValueError):
        ConvexSet.box([0, 2], [1, 1])
    with pytest.raises(ValueError):
        ConvexSet.ball([0, 0], -1)


@settings(max_examples=200, deadline=None)
@given(vec3)
def test_projection_idempotent(x):
    box = ConvexSet.box([-1, 0, 2], [1, 3, 2.5])
    px = project_convex(box, x)
    np.testing.assert_array_equal(project_convex(box, px), px)
    ball = ConvexSet.ball([1, -1, 0], 2.0)
    px = project_convex(ball, x)
    np.testing.assert_allclose(project_convex(ball, px), px, atol=1e-12)


def test_forward_backward_map_examples():
    B2 = make_scaled_identity_monotone(7, 1)
    f2 = make_diagonal_ism([1.0])
    assert forward_backward_map(B2, f2, 0.1, [1.0])[0] == pytest.approx(0.9 / 1.7, abs=1e-15)
    assert forward_backward_map(B2, f2, 0.1, [0.0])[0] == 0.0
    zero = make_zero_ism(1)
    assert forward_backward_map(B2, zero, 0.1, [1.7])[0] == pytest.approx(1.0)


CATALOG = [
    make_scaled_identity_monotone(3, 5),
    make_scaled_identity_monotone(7, 5),
    make_scaled_identity_monotone(0, 5),
    make_l1_resolvent(5),
    make_normal_cone_resolvent(ConvexSet.box(-np.ones(5), np.ones(5)), 5),
    make_normal_cone_resolvent(ConvexSet.ball(np.zeros(5), 2.0), 5),
    make_normal_cone_resolvent(ConvexSet.whole_space(), 5),
]


@pytest.mark.parametrize("B", CATALOG, ids=lambda B: B.label)
@pytest.mark.parametrize("lam", [0.01, 0.1, 1.0])
def test_catalog_resolvents_firmly_nonexpansive(B, lam):
    rep = check_firmly_nonexpansive_sampled(B, lam, samples=1000, seed=1)
    assert rep.passed, rep


def test_firm_nonexpansiveness_negative_control():
    fake = ResolventOperator(3, lambda lam, x: 2 * x, label="2x")
    assert not check_firmly_nonexpansive_sampled(fake, 1.0, samples=50).passed


@pytest.mark.parametrize("f", [
    make_diagonal_ism(np.full(10, 2.0)),
    make_diagonal_ism(1 / np.arange(1, 11)),
    make_affine_gradient(2.0, np.linspace(-3, 3, 10)),
], ids=["2x", "diag(1/i)", "2x+b"])
def test_catalog_ism_moduli(f):
    assert check_ism_sampled(f, f.dim, f.tau, samples=1000, seed=2).passed


@pytest.mark.parametrize("lam", [0.05, 0.5, 0.99])
def test_forward_backward_map_nonexpansive(lam):
    # tau = 1/2 for f = 2x + b, so lam < 1 is admissible
    B = make_l1_resolvent(4)
    f = make_affine_gradient(2.0, [1, -1, 2, 0])
    rep = check_nonexpansive_sampled(lambda x: forward_backward_map(B, f, lam, x), 4,
                                     samples=1000, seed=4)
    assert rep.passed, rep


@pytest.mark.parametrize("lam", [0.01, 0.1, 0.2])
def test_split_correction_ism_example1(ex1, lam):
    tau = 1 / (2 * ex1.norm_sq)
    rep = check_ism_sampled(lambda x: _split_correction(ex1, x, lam), ex1.n1, tau,
                            samples=300, seed=5, threshold=1e-9)
    assert rep.passed, rep
