"""Burst-law and series-coefficient tests.

The geometric-law summation route is cross-checked against the closed
hypergeometric form (exact rational arithmetic, no shared code); the
finite-support laws are checked for exact series reproduction of the
generating function, which their coefficients never touch directly.
"""

import cmath
import math
import random

import pytest

from bursty.burst import (
    BurstDist,
    convergence_threshold,
    fmgf_minus_one,
    laurent_coefficients,
    mean,
    second_moment,
    taylor_coefficients,
    taylor_coefficients_hypergeometric,
)


def series_value(coeffs, u: complex) -> complex:
    return sum(c * u**p for c, p in zip(coeffs.values, coeffs.powers))


# ---------------------------------------------------------------- fmgf


def test_fmgf_examples():
    assert fmgf_minus_one(BurstDist("geometric", 1.0), -1.0) == -0.5
    assert abs(fmgf_minus_one(BurstDist("bstep", 2), 0.1) - 0.21) < 1e-15
    for dist in (
        BurstDist("geometric", 2.0),
        BurstDist("shifted_geometric", 3.0),
        BurstDist("bstep", 4),
        BurstDist("uniform", 5, a=2),
    ):
        assert fmgf_minus_one(dist, 0.0) == 0.0


def test_fmgf_pole():
    with pytest.raises(ZeroDivisionError):
        fmgf_minus_one(BurstDist("geometric", 2.0), 0.5)
    with pytest.raises(ZeroDivisionError):
        fmgf_minus_one(BurstDist("shifted_geometric", 3.0), 0.5)


def test_fmgf_matches_pmf_expectation():
    # E[(1+u)^B] - 1 summed directly over the PMF.
    u = complex(-0.21, 0.33)
    b = 3.0
    p = 1.0 / (1.0 + b)
    acc = sum(p * (1 - p) ** k * (1 + u) ** k for k in range(4000)) - 1.0
    assert abs(fmgf_minus_one(BurstDist("geometric", b), u) - acc) < 1e-12

    p = 1.0 / b
    acc = sum(p * (1 - p) ** (k - 1) * (1 + u) ** k for k in range(1, 4000)) - 1.0
    assert abs(fmgf_minus_one(BurstDist("shifted_geometric", b), u) - acc) < 1e-12

    acc = sum((1 + u) ** k for k in range(1, 4)) / 3.0 - 1.0
    assert abs(fmgf_minus_one(BurstDist("uniform", 3, a=1), u) - acc) < 1e-14


# ---------------------------------------------------------------- moments


def test_means():
    assert mean(BurstDist("geometric", 7.5)) == 7.5
    assert mean(BurstDist("shifted_geometric", 7.5)) == 7.5
    assert mean(BurstDist("bstep", 4)) == 4.0
    assert mean(BurstDist("uniform", 5, a=1)) == 3.0


def test_second_moments_against_pmf_sums():
    b = 3.0
    p = 1.0 / (1.0 + b)
    direct = sum(k * k * p * (1 - p) ** k for k in range(4000))
    assert abs(second_moment(BurstDist("geometric", b)) - direct) < 1e-10

    p = 1.0 / b
    direct = sum(k * k * p * (1 - p) ** (k - 1) for k in range(1, 4000))
    assert abs(second_moment(BurstDist("shifted_geometric", b)) - direct) < 1e-10

    assert second_moment(BurstDist("bstep", 4)) == 16.0
    assert second_moment(BurstDist("uniform", 3, a=1)) == (1 + 4 + 9) / 3.0


def test_convergence_threshold():
    assert math.isclose(
        convergence_threshold(BurstDist("geometric", 19.0)), (1 + math.sqrt(3)) / 38.0
    )
    assert math.isclose(
        convergence_threshold(BurstDist("shifted_geometric", 3.0)),
        (1 + math.sqrt(3)) / 4.0,
    )
    assert convergence_threshold(BurstDist("bstep", 3)) == math.inf
    assert convergence_threshold(BurstDist("uniform", 2, a=1)) == math.inf


# ---------------------------------------------------------------- validation


def test_burst_dist_validation():
    with pytest.raises(ValueError):
        BurstDist("poisson", 2.0)
    with pytest.raises(ValueError):
        BurstDist("geometric", 0.0)
    with pytest.raises(ValueError):
        BurstDist("shifted_geometric", 1.0)
    with pytest.raises(ValueError):
        BurstDist("bstep", 2.5)
    with pytest.raises(ValueError):
        BurstDist("bstep", 0)
    with pytest.raises(ValueError):
        BurstDist("uniform", 2, a=3)
    with pytest.raises(ValueError):
        BurstDist("uniform", 2, a=-1)


# ---------------------------------------------------------------- coefficients


def test_taylor_examples():
    cs = taylor_coefficients(BurstDist("bstep", 3), 99)
    assert cs.powers == (1, 2, 3)
    assert cs.values == (3.0, 3.0, 1.0)

    cs = taylor_coefficients(BurstDist("uniform", 2, a=1), 99)
    assert cs.powers == (1, 2)
    assert cs.values == (1.5, 0.5)

    cs = taylor_coefficients(BurstDist("geometric", 2.0), 1)
    assert cs.powers == (1,)
    assert abs(cs.values[0] - 0.5) < 1e-15


def test_laurent_examples():
    cs = laurent_coefficients(BurstDist("geometric", 2.0), 0)
    assert cs.powers == (0,)
    assert cs.values == (-1.0,)

    cs = laurent_coefficients(BurstDist("geometric", 2.0), 2)
    assert cs.powers == (0, -1, -2)
    for got, want in zip(cs.values, (-1.0, -0.5, -0.25)):
        assert abs(got - want) < 1e-15

    cs = laurent_coefficients(BurstDist("shifted_geometric", 3.0), 1)
    for got, want in zip(cs.values, (-1.5, -0.75)):
        assert abs(got - want) < 1e-15

    for dist in (BurstDist("bstep", 3), BurstDist("uniform", 2, a=1)):
        with pytest.raises(ValueError):
            laurent_coefficients(dist, 2)


def test_dropped_constant_term_vanishes():
    # The truncated re-expansion's i=0 coefficient is sum_j 2^{-j-1} - 1
    # = -2^{-N_T-1}; it is dropped from the stored series, which is only
    # legitimate because it dies exponentially in N_T.
    for n_t in (1, 4, 10, 30):
        const = sum(2.0 ** (-j - 1) for j in range(n_t + 1)) - 1.0
        assert abs(const + 2.0 ** (-n_t - 1)) < 1e-18


def test_log_representation_consistency():
    for dist, make in (
        (BurstDist("geometric", 19.0), lambda d: taylor_coefficients(d, 9)),
        (BurstDist("shifted_geometric", 5.0), lambda d: taylor_coefficients(d, 9)),
        (BurstDist("geometric", 19.0), lambda d: laurent_coefficients(d, 9)),
        (BurstDist("bstep", 6), lambda d: taylor_coefficients(d, 1)),
        (BurstDist("uniform", 6, a=2), lambda d: taylor_coefficients(d, 1)),
    ):
        cs = make(dist)
        for val, la, sg in zip(cs.values, cs.log_abs, cs.signs):
            assert sg in (-1.0, 1.0)
            assert abs(val - sg * math.exp(la)) <= 1e-14 * abs(val)


def test_coefficients_finite_at_b_300():
    dist = BurstDist("geometric", 300.0)
    cs = taylor_coefficients(dist, 150)
    assert all(math.isfinite(la) for la in cs.log_abs)
    assert all(s in (-1.0, 1.0) for s in cs.signs)
    cl = laurent_coefficients(dist, 150)
    assert all(math.isfinite(la) for la in cl.log_abs)


# ------------------------------------------------------- series convergence


def _taylor_error(dist, n_t, u):
    cs = taylor_coefficients(dist, n_t)
    return abs(series_value(cs, u) - fmgf_minus_one(dist, u))


def _laurent_error(dist, n_l, u):
    cs = laurent_coefficients(dist, n_l)
    return abs(series_value(cs, u) - fmgf_minus_one(dist, u))


@pytest.mark.parametrize("kind,b", [("geometric", 2.0), ("shifted_geometric", 4.0)])
def test_taylor_series_converges_in_the_lens(kind, b):
    dist = BurstDist(kind, b)
    scale = b if kind == "geometric" else b - 1.0
    rng = random.Random(5)
    orders = (2, 4, 8, 16, 32)
    for _ in range(100):
        # Draw w = scale*u inside |1+w| < 2 with Re u <= 0.
        while True:
            w = cmath.rect(rng.uniform(0.05, 1.6), rng.uniform(0, 2 * math.pi))
            if abs(1 + w) < 1.8 and w.real <= 0:
                break
        u = w / scale
        errs = [_taylor_error(dist, n_t, u) for n_t in orders]
        for lo, hi in zip(errs[1:], errs[:-1]):
            assert lo <= hi * (1 + 1e-9) + 1e-13


@pytest.mark.parametrize("kind,b", [("geometric", 2.0), ("shifted_geometric", 4.0)])
def test_laurent_series_converges_above_threshold(kind, b):
    dist = BurstDist(kind, b)
    alpha = convergence_threshold(dist)
    rng = random.Random(6)
    orders = (2, 4, 8, 16, 32)
    for _ in range(100):
        r = alpha * math.exp(rng.uniform(math.log(1.05), math.log(40.0)))
        th = rng.uniform(math.pi / 2, 3 * math.pi / 2)  # Re u <= 0
        u = cmath.rect(r, th)
        errs = [_laurent_error(dist, n_l, u) for n_l in orders]
        for lo, hi in zip(errs[1:], errs[:-1]):
            assert lo <= hi * (1 + 1e-9) + 1e-15


@pytest.mark.parametrize(
    "dist",
    [BurstDist("bstep", 5), BurstDist("uniform", 6, a=2), BurstDist("uniform", 3, a=0)],
)
def test_finite_support_series_exact(dist):
    cs = taylor_coefficients(dist, 1)
    rng = random.Random(9)
    for _ in range(100):
        u = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        want = fmgf_minus_one(dist, u)
        got = series_value(cs, u)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


# ------------------------------------------------- hypergeometric cross-check


def test_hypergeometric_route_examples():
    got = taylor_coefficients_hypergeometric(BurstDist("geometric", 2.0), 1)
    assert abs(got.values[0] - 0.5) < 5e-15

    a = taylor_coefficients(BurstDist("geometric", 1.0), 5)
    h = taylor_coefficients_hypergeometric(BurstDist("geometric", 1.0), 5)
    assert abs(a.values[4] - h.values[4]) <= 1e-12 * abs(a.values[4])

    a = taylor_coefficients(BurstDist("shifted_geometric", 2.0), 3)
    h = taylor_coefficients_hypergeometric(BurstDist("shifted_geometric", 2.0), 3)
    assert abs(a.values[1] - h.values[1]) <= 1e-12 * abs(a.values[1])


@pytest.mark.parametrize("b", [2.0, 19.0, 300.0])
def test_hypergeometric_route_cross_check(b):
    dist = BurstDist("geometric", b)
    for n_t in range(1, 21):
        a = taylor_coefficients(dist, n_t)
        h = taylor_coefficients_hypergeometric(dist, n_t)
        for la, lh in zip(a.log_abs, h.log_abs):
            assert abs(la - lh) <= 1e-10 * max(1.0, abs(la))


def test_hypergeometric_route_rejects_finite_support():
    with pytest.raises(ValueError):
        taylor_coefficients_hypergeometric(BurstDist("bstep", 3), 5)
