import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    correlation_by_quadrature,
    extreme_discrepancy_brute,
    gtilde_by_loop,
    star_discrepancy_brute,
)
from zeckprimes.errors import ResourceLimitError, ToleranceViolation
from zeckprimes.golden import PHI, GoldenInt, gfrac, multiples_of
from zeckprimes.harmonic import (
    StepFn,
    bounded_quotient_bound,
    build_g_lambda,
    correlation,
    correlation_identity_check,
    discrepancy_1d,
    discrepancy_nalpha,
    discrepancy_star_1d,
    etk_bound_1d,
    etk_parallelotope_bound,
    fit_decay,
    fourier_G,
    fourier_G_all,
    fourier_Gtilde_direct,
    fourier_Gtilde_matrix,
    gowers_u2_exact,
    gowers_u2_fourier,
    gowers_u3_drop,
    gowers_u3_estimate,
    gtilde_block_norm,
    gtilde_sup,
    koksma_check,
    nphi_points,
    omega,
    stepfn_integral,
    unimodular,
    vaaler,
    vdc_check,
    vdc_general_check,
    vinogradov_check,
    wide_blocks,
)
from zeckprimes.harmonic.vaaler import coefficient_bounds_hold, envelope_violation
from zeckprimes.numeration import fib, sz, sz_array

PHI_F = (1 + math.sqrt(5)) / 2
offsets = st.builds(GoldenInt, st.integers(-50, 50), st.integers(-50, 50))


def random_stepfn(rng, arcs):
    breaks = [gfrac(GoldenInt(0, int(j))) for j in rng.choice(500, size=arcs, replace=False)]
    vals = rng.normal(size=arcs) + 1j * rng.normal(size=arcs)
    return StepFn.from_arcs(breaks, vals)


# step functions ---------------------------------------------------------------

def test_g2_is_constant_zero():
    g = build_g_lambda(2)
    assert len(g) == 1 and g.values[0] == 0


def test_g4_arcs():
    g = build_g_lambda(4)
    assert len(g) == 3
    assert sorted(g.values.real) == [0, 1, 1]
    assert sum(g.lengths) == pytest.approx(1.0)


@pytest.mark.parametrize("lam", [1, 26])
def test_g_lambda_range(lam):
    with pytest.raises(ValueError):
        build_g_lambda(lam)


@pytest.mark.parametrize("lam", [3, 7, 11, 15])
def test_g_lambda_reproduces_truncated_digit_sum(lam):
    g = build_g_lambda(lam)
    assert len(g) == fib(lam)
    n = np.arange(100_000)
    x = multiples_of(PHI, n).frac().to_float()
    assert np.array_equal(g(x).real, sz_array(n, lam))


def test_g_lambda_exact_evaluation():
    g = build_g_lambda(9)
    for n in range(0, 2000, 7):
        assert g.value_at(gfrac(GoldenInt(0, n))) == sz_array(np.array([n]), 9)[0]


def test_integral_of_constant():
    assert stepfn_integral(StepFn.constant(2 - 1j)) == 2 - 1j


def test_integral_matches_frequencies():
    g = build_g_lambda(10)
    mean = sz_array(np.arange(200_000), 10).mean()
    assert stepfn_integral(g).real == pytest.approx(mean, abs=1e-3)


def test_unimodular_correlation_at_zero():
    assert correlation(unimodular(build_g_lambda(4), 0.5), 0) == pytest.approx(1)


@pytest.mark.parametrize("seed", range(4))
def test_correlation_against_quadrature(seed):
    rng = np.random.default_rng(seed)
    f = random_stepfn(rng, 9)
    t = GoldenInt(int(rng.integers(-5, 5)), int(rng.integers(-5, 5)))
    assert correlation(f, t) == pytest.approx(correlation_by_quadrature(f, float(t)), abs=1e-3)


@settings(max_examples=30, deadline=None)
@given(offsets, offsets)
def test_products_and_rotations_are_pointwise(s, t):
    rng = np.random.default_rng(abs(hash((s, t))) % 2**32)
    f, g = random_stepfn(rng, 6), random_stepfn(rng, 5)
    x = rng.random(500)
    prod = f.rotate(s) * g.rotate(t).conj()
    expect = f(x + float(s)) * np.conj(g(x + float(t)))
    # skip samples within rounding distance of a breakpoint
    near = np.min(np.abs(((x[:, None] - prod.positions[None, :]) + 0.5) % 1 - 0.5), axis=1) < 1e-9
    assert np.allclose(prod(x)[~near], expect[~near])


def test_total_variation_is_jump_sum():
    f = StepFn.from_arcs([GoldenInt(0), gfrac(PHI)], [0, 3])
    assert f.total_variation() == 6


def test_duplicate_breakpoints_rejected():
    with pytest.raises(ValueError):
        StepFn.from_arcs([GoldenInt(0), GoldenInt(1)], [1, 2])


# Gowers norms ------------------------------------------------------------------

def test_u2_of_constant():
    assert gowers_u2_exact(StepFn.constant(1)) == pytest.approx(1)
    assert gowers_u2_exact(unimodular(build_g_lambda(2), 0.5)) == pytest.approx(1)


def test_u2_strictly_decreasing():
    norms = [gowers_u2_exact(unimodular(build_g_lambda(lam), 0.5)) for lam in range(4, 15)]
    assert all(a > b for a, b in zip(norms, norms[1:]))


@pytest.mark.parametrize("lam", [4, 7, 10])
def test_u2_exact_matches_fourier_route(lam):
    f = unimodular(build_g_lambda(lam), 0.5)
    fourier, tail = gowers_u2_fourier(f, 1 << 12)
    assert abs(gowers_u2_exact(f) - fourier) <= 1e-4 + tail


@pytest.mark.parametrize("seed", range(3))
def test_u2_exact_random_stepfn_matches_fourier_route(seed):
    f = random_stepfn(np.random.default_rng(seed), 12)
    fourier, tail = gowers_u2_fourier(f, 1 << 12)
    exact = gowers_u2_exact(f)
    assert abs(exact**4 - fourier**4) <= 1e-4 * exact**4 + tail


def test_u2_tends_to_one_for_character_approximations():
    previous = 0.0
    for m in (20, 80, 320):
        breaks = multiples_of(PHI, np.arange(m)).frac()
        vals = np.exp(2j * math.pi * breaks.to_float())
        u2 = gowers_u2_exact(StepFn.from_arcs(breaks, vals))
        assert u2 > previous
        previous = u2
    assert previous > 0.999


@settings(max_examples=20, deadline=None)
@given(offsets)
def test_u2_rotation_invariance(t):
    f = unimodular(build_g_lambda(8), 0.5)
    assert gowers_u2_exact(f.rotate(t)) == pytest.approx(gowers_u2_exact(f), rel=1e-9)


def test_u2_arc_budget():
    breaks = multiples_of(PHI, np.arange(1300)).frac()
    with pytest.raises(ResourceLimitError):
        gowers_u2_exact(StepFn.from_arcs(breaks, np.ones(1300)))


def test_u3_of_constant():
    assert gowers_u3_estimate(StepFn.constant(1), 16) == (pytest.approx(1.0), 0.0)


def test_u3_needs_samples():
    with pytest.raises(ValueError):
        gowers_u3_estimate(StepFn.constant(1), 8)


def test_u3_in_unit_interval_and_above_u2():
    f = unimodular(build_g_lambda(7), 0.5)
    est, se = gowers_u3_estimate(f, 64)
    assert 0 <= est <= 1 and se > 0
    # U3 dominates U2
    assert est > gowers_u2_exact(f) - 3 * se


def test_u3_drop_is_significant():
    f, g = unimodular(build_g_lambda(5), 0.5), unimodular(build_g_lambda(7), 0.5)
    drop, se = gowers_u3_drop(f, g, 64)
    assert drop > 3 * se


# Zeckendorf Fourier sums -----------------------------------------------------

def test_gtilde_trivial_frequency():
    for lam in (2, 5, 12):
        assert fourier_Gtilde_direct(lam, 0, 0) == pytest.approx(fib(lam) / PHI_F**lam)


@pytest.mark.parametrize("lam", [2, 3, 6, 11])
def test_gtilde_direct_against_loop(lam):
    rnd = random.Random(lam)
    theta, beta = rnd.random(), rnd.random()
    assert fourier_Gtilde_direct(lam, theta, beta) == pytest.approx(gtilde_by_loop(lam, theta, beta), abs=1e-12)


def test_gtilde_matrix_matches_direct():
    rnd = random.Random(0)
    for lam in range(2, 21):
        for _ in range(25):
            theta, beta = rnd.random(), rnd.random()
            assert abs(fourier_Gtilde_matrix(lam, theta, beta) - fourier_Gtilde_direct(lam, theta, beta)) <= 1e-9


def test_gtilde_matrix_handles_huge_index():
    value = fourier_Gtilde_matrix(300, 0.5, 0.1234)
    assert abs(value) < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.integers(6, 60), st.floats(0, 1), st.floats(0, 1))
def test_gtilde_block_norm_at_most_one(lam, theta, beta):
    assert gtilde_block_norm(lam, theta, beta) <= 1 + 1e-12


def test_gtilde_sup_decays():
    lams = list(range(5, 21))
    _, rate = fit_decay(lams, [gtilde_sup(lam, 0.5, 256) for lam in lams])
    assert rate > 0.05


def test_fourier_G_parseval_and_agreement():
    g = fourier_G_all(12, 0.3)
    assert np.sum(np.abs(g) ** 2) == pytest.approx(1.0)
    for h in (0, 1, 50, fib(12) - 1):
        assert fourier_G(12, 0.3, h) == pytest.approx(g[h])
    with pytest.raises(ValueError):
        fourier_G(12, 0.3, fib(12))


def test_omega_trivial_shift_and_symmetry():
    assert omega(0.37, 0, 1000, 12) == pytest.approx(1)
    for t in (1, 4, 9):
        assert abs(omega(0.37, t, 5000, 12)) == pytest.approx(abs(omega(-0.37, t, 5000, 12)))


@pytest.mark.parametrize("lam", [10, 12, 14])
@pytest.mark.parametrize("t", [1, 2, 3, 5])
def test_correlation_identity(lam, t):
    i = wide_blocks(lam, 5)[0]
    assert correlation_identity_check(lam, t, i) <= 4 * t / fib(lam)


def test_correlation_identity_rejects_short_block():
    lam = 8
    w_short = next(i for i in range(20) if i not in wide_blocks(lam, 20))
    with pytest.raises(ValueError):
        correlation_identity_check(lam, 1, w_short)


# discrepancy -------------------------------------------------------------------

def test_discrepancy_trivial_cases():
    assert discrepancy_star_1d([0.0]) == 1.0
    assert discrepancy_1d([0.0]) == 1.0
    assert discrepancy_1d(np.arange(17) / 17) == pytest.approx(1 / 17)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=25))
def test_discrepancy_against_brute_force(points):
    assert discrepancy_star_1d(points) == pytest.approx(star_discrepancy_brute(points), abs=1e-12)
    assert discrepancy_1d(points) == pytest.approx(extreme_discrepancy_brute(points), abs=1e-12)


def test_nalpha_uses_exact_positions():
    pts = nphi_points(50)
    assert np.allclose(pts, [math.modf(n * PHI_F)[0] for n in range(1, 51)])


@pytest.mark.parametrize("N", [10**3, 10**4, 10**5])
def test_bounded_quotient_bound(N):
    assert N * discrepancy_nalpha(N) <= bounded_quotient_bound(N)


def test_etk_shape_dominates_discrepancy():
    ratios = []
    for N in (500, 2000, 8000):
        pts = nphi_points(N)
        H = int(math.isqrt(N))
        ratios.append(discrepancy_1d(pts) / etk_bound_1d(pts, H))
    assert max(ratios) <= 1.0


def test_etk_one_over_h_term_vanishes():
    pts = np.arange(64) / 64
    # equally spaced points kill every frequency below 64
    assert etk_bound_1d(pts, 50) == pytest.approx(1 / 50)


def test_parallelotope_axis_edges_give_classical_form():
    rng = np.random.default_rng(2)
    pts = rng.random((300, 2))
    H = 6
    expect = 1 / H
    for h1 in range(-H, H + 1):
        for h2 in range(-H, H + 1):
            if h1 or h2:
                s = abs(np.mean(np.exp(2j * math.pi * (h1 * pts[:, 0] + h2 * pts[:, 1]))))
                expect += s / (max(1, abs(h1)) * max(1, abs(h2)))
    assert etk_parallelotope_bound(pts, H, np.eye(2)) == pytest.approx(expect)


def test_parallelotope_rejects_dependent_edges():
    with pytest.raises(ValueError):
        etk_parallelotope_bound(np.zeros((3, 2)), 3, [[1, 0], [1, 0]])


# Vaaler ------------------------------------------------------------------------

def test_vaaler_mean_values():
    A, B = vaaler((0.2, 0.45), 10)
    assert A.coefficient(0) == pytest.approx(0.25, abs=0)
    assert B.coefficient(0).real <= 1 / 11 + 1e-15


def test_vaaler_polynomials_are_real():
    A, B = vaaler((0.1, 0.7), 9)
    for poly in (A, B):
        assert np.allclose(poly.coeffs, np.conj(poly.coeffs[::-1]))


def test_vaaler_envelope_and_coefficients():
    rnd = random.Random(11)
    for _ in range(20):
        alpha, length, H = rnd.random(), rnd.uniform(0.01, 0.99), rnd.randint(1, 64)
        A, B = vaaler((alpha, alpha + length), H)
        assert coefficient_bounds_hold(A, B, length)
        assert envelope_violation((alpha, alpha + length), H) <= 1e-12


@pytest.mark.parametrize("interval", [(0.3, 0.3), (0.0, 1.0), (0.5, 0.2)])
def test_vaaler_degenerate(interval):
    with pytest.raises(ValueError):
        vaaler(interval, 4)


# Koksma, van der Corput, Vinogradov -----------------------------------------------

def test_koksma_constant():
    lhs, rhs = koksma_check(StepFn.constant(3), nphi_points(100))
    assert lhs == pytest.approx(0, abs=1e-12) and rhs == 0


@pytest.mark.parametrize("seed", range(5))
def test_koksma_random(seed):
    rng = np.random.default_rng(seed)
    f = random_stepfn(rng, 10)
    for pts in (rng.random(200), nphi_points(300)):
        lhs, rhs = koksma_check(f, pts)
        assert lhs <= rhs + 1e-12


def test_koksma_with_g_lambda():
    lhs, rhs = koksma_check(build_g_lambda(9), nphi_points(1000))
    assert lhs <= rhs


def test_vdc_equality_case():
    assert vdc_check(np.ones(12), 1) == (pytest.approx(144), pytest.approx(144))


def test_vdc_random():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        n = int(rng.integers(1, 50))
        z = np.exp(2j * math.pi * rng.random(n)) * (rng.random(n) if rng.random() < 0.3 else 1)
        for R in range(1, 9):
            lhs, rhs = vdc_check(z, R)
            assert lhs <= rhs * (1 + 1e-9) + 1e-9
        K = rng.choice(np.arange(-12, 13), size=int(rng.integers(1, 7)), replace=False)
        lhs, rhs = vdc_general_check(z, K)
        assert lhs <= rhs * (1 + 1e-9) + 1e-9


def test_vdc_general_single_shift_is_cauchy_schwarz():
    z = np.exp(2j * math.pi * np.random.default_rng(1).random(30))
    lhs, rhs = vdc_general_check(z, [4])
    assert rhs == pytest.approx(30 * 30) and lhs <= rhs


def test_vinogradov_trivial():
    assert vinogradov_check(np.zeros(100), 0, 50, 100, 1000) == (0.0, 0.0)


def test_vinogradov_random():
    rng = np.random.default_rng(8)
    for _ in range(100):
        a = rng.choice([-1.0, 1.0], 1000)
        x = rng.uniform(0, 300)
        y = rng.uniform(x, 900)
        z = rng.uniform(y, 1000)
        lhs, rhs = vinogradov_check(a, x, y, z, 1024)
        assert lhs <= rhs
    a = rng.choice([-1.0, 1.0], 1000)
    lhs, rhs = vinogradov_check(a, 0, 1000, 1000, 2048)
    assert lhs <= rhs


def test_vinogradov_violation_raises():
    # a coarse grid cannot be forced to fail on genuine data, so probe the guard directly
    with pytest.raises(ValueError):
        vinogradov_check(np.ones(10), 0, 5, 10, grid=100)
    with pytest.raises(ValueError):
        vinogradov_check(np.ones(10), 5, 2, 10)
    assert issubclass(ToleranceViolation, AssertionError)
