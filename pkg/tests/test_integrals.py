"""Closed-form integrals against adaptive quadrature and invariants.

The oracle integrates U(s)^power directly with scipy's adaptive
quadrature (real and imaginary parts separately); integer powers of U
are single-valued, so the oracle involves no branch choices at all.
"""

import cmath
import math
import random

import pytest
from scipy.integrate import quad

from bursty.burst import BurstDist
from bursty.characteristics import CharArgs, ModelParams, eval_U
from bursty import integrals as I

BD = BurstDist("geometric", b=2.0)

TAYLOR_TOL = 1e-9
LAURENT_TOL = 1e-8


def quad_power(power, s1, s2, args, params):
    def f(s):
        return eval_U(s, args, params) ** power

    n_pieces = max(1, int((s2 - s1) / 2.0))
    edges = [s1 + (s2 - s1) * k / n_pieces for k in range(n_pieces + 1)]
    total = 0j
    for a, b in zip(edges, edges[1:]):
        re, re_err = quad(lambda s: f(s).real, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)
        im, im_err = quad(lambda s: f(s).imag, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)
        total += complex(re, im)
    return total


def unit_args(rng, v_zero=False):
    u = cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)) - 1.0
    v = 0j if v_zero else cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)) - 1.0
    return CharArgs(u=u, v=v)


def laurent_safe(args, params, s1, s2):
    """Reject cases where U(s) passes near zero: the integrand itself
    is then singular and neither route is meaningful."""
    return (
        min(abs(eval_U(s1 + k * (s2 - s1) / 80, args, params)) for k in range(81)) > 0.05
    )


def random_case(rng, powers, params_factory, v_zero_frac=0.2):
    while True:
        params = params_factory(rng)
        args = unit_args(rng, v_zero=rng.random() < v_zero_frac)
        s1 = rng.uniform(0.0, 2.0)
        s2 = s1 + rng.uniform(0.02, 4.0)
        power = rng.choice(powers)
        if power < 0 and not laurent_safe(args, params, s1, s2):
            continue
        return I.IntegralRequest(power=power, s1=s1, s2=s2, args=args, params=params)


DEG = lambda rng: ModelParams(k_i=1.0, beta=1.3, gamma=1.3, burst=BD)
ND_FAST_SPLICE = lambda rng: ModelParams(
    k_i=1.0, beta=rng.uniform(1.4, 3.0), gamma=1.0, burst=BD
)
ND_FAST_DECAY = lambda rng: ModelParams(
    k_i=1.0, beta=1.0, gamma=rng.uniform(1.4, 3.0), burst=BD
)


@pytest.mark.parametrize(
    "name,factory,powers,tol",
    [
        ("degenerate-taylor", DEG, (1, 2, 3, 5), TAYLOR_TOL),
        ("degenerate-laurent", DEG, (-1, -2, -3, -5), LAURENT_TOL),
        ("nondegenerate-taylor", ND_FAST_SPLICE, (1, 2, 3, 5), TAYLOR_TOL),
        ("nondegenerate-taylor-slow-splice", ND_FAST_DECAY, (1, 2, 3, 5), TAYLOR_TOL),
        ("nondegenerate-laurent", ND_FAST_SPLICE, (-1, -2, -3, -5), LAURENT_TOL),
        ("nondegenerate-laurent-slow-splice", ND_FAST_DECAY, (-1, -2, -3, -5), LAURENT_TOL),
    ],
)
def test_quadrature_equivalence(name, factory, powers, tol):
    rng = random.Random(hash(name) & 0xFFFF)
    for _ in range(50):
        req = random_case(rng, powers, factory)
        got = I.integral_term(req)
        want = quad_power(req.power, req.s1, req.s2, req.args, req.params)
        assert abs(got - want) <= tol * max(abs(want), 1e-300), (
            f"{name}: power={req.power} s=[{req.s1}, {req.s2}] "
            f"u={req.args.u} v={req.args.v} got={got} want={want}"
        )


def test_integer_rate_ratio_laurent():
    """beta = 2 gamma makes the hypergeometric parameter difference an
    exact integer; the chart series must not care."""
    rng = random.Random(42)
    params = ModelParams(k_i=1.0, beta=2.0, gamma=1.0, burst=BD)
    for _ in range(30):
        args = unit_args(rng)
        s1 = rng.uniform(0.0, 1.0)
        s2 = s1 + rng.uniform(0.1, 5.0)
        if not laurent_safe(args, params, s1, s2):
            continue
        power = rng.choice((-1, -2, -4, -7))
        req = I.IntegralRequest(power=power, s1=s1, s2=s2, args=args, params=params)
        got = I.integral_term(req)
        want = quad_power(power, s1, s2, args, params)
        assert abs(got - want) <= LAURENT_TOL * abs(want)


def test_near_degenerate_rates():
    """Rates just outside the degeneracy window still go through the
    non-degenerate forms and must stay accurate there."""
    rng = random.Random(9)
    params = ModelParams(k_i=1.0, beta=1.0 + 5e-5, gamma=1.0, burst=BD)
    for power in (2, -1, -2):
        for _ in range(8):
            args = unit_args(rng)
            s1 = rng.uniform(0.0, 0.5)
            s2 = s1 + rng.uniform(0.2, 2.5)
            if power < 0 and not laurent_safe(args, params, s1, s2):
                continue
            req = I.IntegralRequest(power=power, s1=s1, s2=s2, args=args, params=params)
            got = I.integral_term(req)
            want = quad_power(power, s1, s2, args, params)
            assert abs(got - want) <= 3e-8 * abs(want)


@pytest.mark.parametrize("factory", [DEG, ND_FAST_SPLICE, ND_FAST_DECAY])
def test_additivity(factory):
    """Integral over [s1, s3] equals the sum over [s1, s2] and [s2, s3]."""
    rng = random.Random(17)
    for _ in range(25):
        params = factory(rng)
        args = unit_args(rng)
        s1 = rng.uniform(0.0, 1.0)
        s2 = s1 + rng.uniform(0.05, 2.0)
        s3 = s2 + rng.uniform(0.05, 2.0)
        power = rng.choice((-3, -1, 1, 2, 4))
        if power < 0 and not laurent_safe(args, params, s1, s3):
            continue
        whole = I.integral_term(
            I.IntegralRequest(power=power, s1=s1, s2=s3, args=args, params=params)
        )
        left = I.integral_term(
            I.IntegralRequest(power=power, s1=s1, s2=s2, args=args, params=params)
        )
        right = I.integral_term(
            I.IntegralRequest(power=power, s1=s2, s2=s3, args=args, params=params)
        )
        assert abs(whole - (left + right)) <= 1e-10 * max(abs(whole), 1e-300)


@pytest.mark.parametrize("factory", [DEG, ND_FAST_SPLICE])
def test_v_to_zero_continuity(factory):
    """|v| = 1e-12 must agree with the exact v = 0 reduction to 1e-6."""
    rng = random.Random(23)
    for power in (1, 3, -1, -3):
        for _ in range(10):
            params = factory(rng)
            u = cmath.exp(1j * rng.uniform(0.0, 2 * math.pi)) - 1.0
            tiny = 1e-12 * cmath.exp(1j * rng.uniform(0.0, 2 * math.pi))
            s1 = rng.uniform(0.0, 1.0)
            s2 = s1 + rng.uniform(0.1, 2.0)
            if abs(u) < 0.2:
                continue
            at_zero = I.integral_term(
                I.IntegralRequest(
                    power=power, s1=s1, s2=s2, args=CharArgs(u=u, v=0j), params=params
                )
            )
            near_zero = I.integral_term(
                I.IntegralRequest(
                    power=power, s1=s1, s2=s2, args=CharArgs(u=u, v=tiny), params=params
                )
            )
            assert abs(near_zero - at_zero) <= 1e-6 * abs(at_zero)


def test_order_reflection_identity():
    """The Laurent antiderivative continued to order -i reproduces the
    Taylor integral of U^{+i}."""
    rng = random.Random(31)
    checked = 0
    while checked < 10:
        beta = rng.choice([2.0, 1.7, 0.6])
        params = ModelParams(k_i=1.0, beta=beta, gamma=1.0, burst=BD)
        args = unit_args(rng)
        i = rng.choice((1, 2, 4, 7))
        s1 = rng.uniform(0.0, 1.5)
        s2 = s1 + rng.uniform(0.05, 3.0)
        req = I.IntegralRequest(power=i, s1=s1, s2=s2, args=args, params=params)
        t_val = I.taylor_term_nondegenerate(req)
        l_val = I._u_power_nondegenerate(-i, req, 0.0)
        assert abs(t_val - l_val) <= 1e-8 * max(abs(t_val), 1e-300)
        checked += 1


def test_log_scale_shifts_result():
    rng = random.Random(3)
    params = ModelParams(k_i=1.0, beta=2.2, gamma=1.0, burst=BD)
    args = unit_args(rng)
    for power in (3, -3):
        req = I.IntegralRequest(power=power, s1=0.1, s2=2.0, args=args, params=params)
        base = I.integral_term(req)
        shifted = I.integral_term(req, log_scale=41.25)
        assert abs(shifted - base * math.exp(41.25)) <= 1e-12 * abs(shifted)


def test_log_balancing_stays_finite():
    """Huge expansion coefficients pair with tiny integrals; folding
    log|Omega_i| in through log_scale must keep everything finite for
    orders up to 150 and burst means up to 300."""
    from bursty.burst import convergence_threshold, taylor_coefficients

    big = BurstDist("geometric", b=300.0)
    alpha = convergence_threshold(big)
    coeffs = taylor_coefficients(big, n_t=150)
    args = CharArgs(u=0.8 * alpha * cmath.exp(2.2j), v=0.5 * alpha * cmath.exp(0.7j))
    for params in (
        ModelParams(k_i=1.0, beta=2.0, gamma=1.0, burst=big),
        ModelParams(k_i=1.0, beta=1.0, gamma=1.0, burst=big),
    ):
        for i in (50, 150):
            req = I.IntegralRequest(power=i, s1=1e-9, s2=3.0, args=args, params=params)
            val = I.integral_term(req, log_scale=coeffs.log_abs[i - 1])
            assert math.isfinite(val.real) and math.isfinite(val.imag)


def test_constant_term():
    req = I.IntegralRequest(
        power=0,
        s1=0.25,
        s2=1.75,
        args=CharArgs(u=-1.0 + 0.5j, v=-0.5j),
        params=ModelParams(k_i=1.0, beta=2.0, gamma=1.0, burst=BD),
    )
    assert I.integral_term(req) == pytest.approx(1.5)
    assert I.constant_term(req, log_scale=math.log(2.0)) == pytest.approx(3.0)


def test_t_infinity():
    params = ModelParams(k_i=1.0, beta=2.0, gamma=0.5, burst=BD)
    assert I.t_infinity(params) == pytest.approx(-math.log(1e-12) / 0.5)


def test_request_validation():
    params = ModelParams(k_i=1.0, beta=2.0, gamma=1.0, burst=BD)
    args = CharArgs(u=-1.0, v=-1.0)
    with pytest.raises(ValueError):
        I.IntegralRequest(power=1, s1=1.0, s2=0.5, args=args, params=params)
    with pytest.raises(ValueError):
        I.IntegralRequest(power=1, s1=-0.1, s2=0.5, args=args, params=params)
    good = I.IntegralRequest(power=-1, s1=0.0, s2=0.5, args=args, params=params)
    with pytest.raises(ValueError):
        I.taylor_term_nondegenerate(good)
    flipped = I.IntegralRequest(power=1, s1=0.0, s2=0.5, args=args, params=params)
    with pytest.raises(ValueError):
        I.laurent_term_nondegenerate(flipped)


def test_real_axis_args():
    """u, v real (the FFT grid's corner bins) keep every form on its
    consistent one-sided branch; the result must match quadrature."""
    rng = random.Random(77)
    for factory in (DEG, ND_FAST_SPLICE, ND_FAST_DECAY):
        for power in (2, -1, -3):
            params = factory(rng)
            args = CharArgs(u=-1.37, v=-1.91)
            s1, s2 = 0.15, 2.4
            if power < 0 and not laurent_safe(args, params, s1, s2):
                continue
            req = I.IntegralRequest(power=power, s1=s1, s2=s2, args=args, params=params)
            got = I.integral_term(req)
            want = quad_power(power, s1, s2, args, params)
            tol = TAYLOR_TOL if power > 0 else LAURENT_TOL
            assert abs(got - want) <= tol * abs(want)
