"""Characteristic-curve and domain-partition tests.

Extrema are verified by central finite differences and dense sampling;
partitions are verified by counting sign changes of |U| - alpha on a
dense grid, an oracle that never calls the Newton/bisection machinery
under test.
"""

import cmath
import math
import random
from types import SimpleNamespace

import pytest

from bursty.burst import BurstDist
from bursty.characteristics import (
    EPS_DEG,
    CharArgs,
    DomainPartition,
    ModelParams,
    eval_U,
    eval_V,
    extrema_of_absU,
    is_degenerate,
    partition_domain,
)
from bursty.errors import PartitionError


GEOM = BurstDist("geometric", 19.0)


def spec_with(alpha: float) -> SimpleNamespace:
    return SimpleNamespace(alpha=alpha)


def random_halfplane(rng: random.Random, lo: float, hi: float) -> complex:
    r = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    th = rng.uniform(math.pi / 2, 3 * math.pi / 2)
    return cmath.rect(r, th)


# ---------------------------------------------------------------- eval


def test_eval_U_at_zero_is_u():
    rng = random.Random(1)
    for params in (ModelParams(1.0, 1.3, 1.3, GEOM), ModelParams(1.0, 2.0, 0.7, GEOM)):
        for _ in range(20):
            args = CharArgs(random_halfplane(rng, 0.01, 5), random_halfplane(rng, 0.01, 5))
            assert abs(eval_U(0.0, args, params) - args.u) < 1e-14


def test_eval_U_degenerate_example():
    params = ModelParams(1.0, 1.0, 1.0, GEOM)
    args = CharArgs(-1.0, 0.0)
    assert abs(eval_U(math.log(2.0), args, params) - (-0.5)) < 1e-15


def test_eval_U_uses_degenerate_form_inside_switch():
    params = ModelParams(1.0, 1.0 + 1e-9, 1.0, GEOM)
    assert is_degenerate(params)
    args = CharArgs(complex(-0.4, 0.8), complex(-0.2, -0.5))
    g = params.gamma
    for s in (0.3, 1.7, 6.0):
        want = cmath.exp(-g * s) * (args.u + g * args.v * s)
        assert eval_U(s, args, params) == want


def test_eval_U_continuous_across_degeneracy_switch():
    # Just outside the switch the exact two-exponential formula must sit
    # close to the degenerate limit it is approaching.
    delta = 3e-6
    params = ModelParams(1.0, 1.0 + delta, 1.0, GEOM)
    assert not is_degenerate(params)
    rng = random.Random(2)
    for _ in range(50):
        args = CharArgs(random_halfplane(rng, 0.05, 1.0), random_halfplane(rng, 0.05, 1.0))
        for s in (0.2, 1.0, 3.0):
            got = eval_U(s, args, params)
            lim = cmath.exp(-s) * (args.u + args.v * s)
            assert abs(got - lim) < 1e-4


def test_eval_V():
    params = ModelParams(1.0, 1.5, 2.0, GEOM)
    assert eval_V(0.0, CharArgs(0.0, -0.3 + 0.1j), params) == -0.3 + 0.1j
    assert eval_V(7.0, CharArgs(-1.0, 0.0), params) == 0.0
    got = eval_V(0.5, CharArgs(0.0, -1.0), params)
    assert abs(got - (-math.exp(-1.0))) < 1e-15


def test_is_degenerate_threshold():
    assert is_degenerate(ModelParams(1.0, 1.0, 1.0, GEOM))
    assert is_degenerate(ModelParams(1.0, 1.0 + 0.99 * EPS_DEG, 1.0, GEOM))
    assert not is_degenerate(ModelParams(1.0, 1.0 + 1.01 * EPS_DEG, 1.0, GEOM))


# ---------------------------------------------------------------- extrema


def test_extrema_v_zero_monotone():
    params = ModelParams(1.0, 1.0, 1.0, GEOM)
    assert extrema_of_absU(CharArgs(-2.0 + 1.0j, 0.0), params) == []


def test_extrema_degenerate_example():
    params = ModelParams(1.0, 1.0, 1.0, GEOM)
    roots = extrema_of_absU(CharArgs(0.0, -1.0), params)
    assert len(roots) == 1
    assert abs(roots[0] - 1.0) < 1e-12
    # Dense-sampling confirmation: |U| peaks at s = 1.
    qs = [abs(eval_U(s, CharArgs(0.0, -1.0), params)) for s in (0.8, 1.0, 1.2)]
    assert qs[1] > qs[0] and qs[1] > qs[2]


def _absU2(s, args, params):
    return abs(eval_U(s, args, params)) ** 2


@pytest.mark.parametrize("degenerate", [False, True])
def test_extrema_are_stationary_by_finite_difference(degenerate):
    rng = random.Random(17)
    checked = 0
    for _ in range(300):
        if degenerate:
            g = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
            params = ModelParams(1.0, g, g, GEOM)
        else:
            while True:
                b = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
                g = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
                if abs(b - g) >= 0.1 * max(b, g):
                    break
            params = ModelParams(1.0, b, g, GEOM)
        args = CharArgs(random_halfplane(rng, 0.1, 3.0), random_halfplane(rng, 0.1, 3.0))
        roots = extrema_of_absU(args, params)
        assert len(roots) <= 2
        assert roots == sorted(roots)
        for s in roots:
            assert s > 0
            h = 3e-6 * max(1.0, s)
            d = (_absU2(s + h, args, params) - _absU2(s - h, args, params)) / (2 * h)
            scale = max(1.0, abs(args.u) ** 2 + abs(args.v) ** 2)
            assert abs(d) < 1e-8 * scale, (params, args, s, d)
            checked += 1
    assert checked > 50


# ---------------------------------------------------------------- partition


def test_partition_validation():
    with pytest.raises(PartitionError):
        DomainPartition(boundaries=(0.0, 1.0), regimes=("taylor', 'laurent",))
    with pytest.raises(PartitionError):
        DomainPartition(boundaries=(0.0, 2.0, 1.0), regimes=("taylor", "laurent"))
    with pytest.raises(PartitionError):
        DomainPartition(boundaries=(0.0, 1.0, 2.0), regimes=("taylor",))


def test_partition_small_args_single_taylor():
    params = ModelParams(1.0, 1.0, 1.0, GEOM)
    args = CharArgs(-1e-3, 1e-3j)
    part = partition_domain(10.0, args, params, spec_with(0.0719))
    assert part.boundaries == (0.0, 10.0)
    assert part.regimes == ("taylor",)


def test_partition_infinite_alpha_single_taylor():
    params = ModelParams(1.0, 2.0, 1.0, GEOM)
    args = CharArgs(-1.9, 0.4j)
    part = partition_domain(25.0, args, params, spec_with(math.inf))
    assert part.regimes == ("taylor",)


def test_partition_large_args_start_laurent():
    params = ModelParams(1.0, 1.0, 1.0, GEOM)
    args = CharArgs(-1.0, 0.0)
    alpha = 0.0719
    part = partition_domain(30.0, args, params, spec_with(alpha))
    # |U| = e^{-s} crosses alpha once, at s = -ln(alpha).
    assert part.regimes == ("laurent", "taylor")
    assert abs(part.boundaries[1] - (-math.log(alpha))) < 1e-6


def _crossing_count(t, args, params, alpha, n=4001):
    prev = None
    count = 0
    for k in range(n):
        s = t * k / (n - 1)
        side = abs(eval_U(s, args, params)) > alpha
        if prev is not None and side != prev:
            count += 1
        prev = side
    return count


@pytest.mark.parametrize("seed", [3, 4, 5])
def test_partition_fuzz(seed):
    rng = random.Random(seed)
    for _ in range(700):
        if rng.random() < 0.3:
            g = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
            params = ModelParams(1.0, g, g, GEOM)
        else:
            params = ModelParams(
                1.0,
                math.exp(rng.uniform(math.log(0.3), math.log(3.0))),
                math.exp(rng.uniform(math.log(0.3), math.log(3.0))),
                GEOM,
            )
        args = CharArgs(random_halfplane(rng, 1e-3, 3.0), random_halfplane(rng, 1e-3, 3.0))
        alpha = math.exp(rng.uniform(math.log(0.02), math.log(0.9)))
        t = math.exp(rng.uniform(math.log(0.5), math.log(30.0)))
        part = partition_domain(t, args, params, spec_with(alpha))

        assert part.boundaries[0] == 0.0
        assert part.boundaries[-1] == t
        assert 1 <= len(part.regimes) <= 4
        for a, b in zip(part.regimes, part.regimes[1:]):
            assert a != b

        # Interior boundaries are true crossings.
        for s in part.boundaries[1:-1]:
            assert abs(abs(eval_U(s, args, params)) - alpha) <= 1e-6 * alpha

        # Labels match the side |U| actually lies on.
        for j, regime in enumerate(part.regimes):
            lo, hi = part.boundaries[j], part.boundaries[j + 1]
            for k in range(50):
                s = lo + (hi - lo) * (k + 0.5) / 50
                au = abs(eval_U(s, args, params))
                if regime == "laurent":
                    assert au >= alpha * (1 - 1e-6)
                else:
                    assert au <= alpha * (1 + 1e-6)

        # Domain count agrees with a dense-grid crossing count.
        assert len(part.regimes) == _crossing_count(t, args, params, alpha) + 1
