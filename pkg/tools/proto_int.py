"""Scratch: shake down integrals.py against direct mpmath quadrature."""

import math
import cmath
import random

import mpmath as mp

import sys
sys.path.insert(0, "/root/pkg/src")

from bursty.burst import BurstDist
from bursty.characteristics import CharArgs, ModelParams, eval_U
from bursty import integrals as I

mp.mp.dps = 30

BD = BurstDist("geometric", b=2.0)


def quad_power(power, s1, s2, args, params):
    beta, gamma = params.beta, params.gamma
    u, v = args.u, args.v
    deg = abs(beta - gamma) <= 1e-6 * max(beta, gamma)

    def U(s):
        s = mp.mpf(s)
        if deg:
            return mp.e ** (-gamma * s) * (u + gamma * v * s)
        f = beta / (beta - gamma)
        return v * f * mp.e ** (-gamma * s) + (u - v * f) * mp.e ** (-beta * s)

    val = mp.quad(lambda s: U(s) ** power, [s1, s2])
    return complex(val)


def rnd_uv(rng, allow_zero_v=False):
    th = rng.uniform(0, 2 * math.pi)
    ph = rng.uniform(0, 2 * math.pi)
    u = cmath.exp(1j * th) - 1.0
    v = cmath.exp(1j * ph) - 1.0
    if allow_zero_v:
        v = 0j
    return CharArgs(u=u, v=v)


def check(tag, power, s1, s2, args, params, tol=5e-9):
    req = I.IntegralRequest(power=power, s1=s1, s2=s2, args=args, params=params)
    got = I.integral_term(req)
    want = quad_power(power, s1, s2, args, params)
    denom = max(abs(want), 1e-300)
    rel = abs(got - want) / denom
    ok = rel < tol
    if not ok:
        print(f"FAIL {tag}: power={power} s=[{s1:.4f},{s2:.4f}] "
              f"u={args.u:.4f} v={args.v:.4f} beta={params.beta:.4f} "
              f"gamma={params.gamma:.4f} got={got} want={want} rel={rel:.3e}")
    return rel, ok


def run_block(tag, make_params, powers, n, rng, allow_v0=False, tol=5e-9):
    worst = 0.0
    bad = 0
    for _ in range(n):
        params = make_params(rng)
        args = rnd_uv(rng, allow_zero_v=allow_v0 and rng.random() < 0.3)
        s1 = rng.uniform(0.0, 2.0)
        s2 = s1 + rng.uniform(0.01, 4.0)
        power = rng.choice(powers)
        # keep the Laurent integrand away from zeros of U
        if power < 0:
            umin = min(
                abs(eval_U(s1 + k * (s2 - s1) / 60, args, params)) for k in range(61)
            )
            if umin < 0.05:
                continue
        rel, ok = check(tag, power, s1, s2, args, params, tol)
        worst = max(worst, rel)
        bad += 0 if ok else 1
    print(f"{tag:34s} worst rel = {worst:.3e}  fails = {bad}")
    return bad


def main():
    rng = random.Random(7)
    fails = 0

    deg = lambda r: ModelParams(k_i=1.0, beta=1.3, gamma=1.3, burst=BD)
    nd1 = lambda r: ModelParams(k_i=1.0, beta=r.uniform(1.5, 3.0), gamma=1.0, burst=BD)
    nd2 = lambda r: ModelParams(k_i=1.0, beta=1.0, gamma=r.uniform(1.5, 3.0), burst=BD)
    res = lambda r: ModelParams(k_i=1.0, beta=2.0, gamma=1.0, burst=BD)  # rho = i
    nde = lambda r: ModelParams(k_i=1.0, beta=1.0 + 3e-5, gamma=1.0, burst=BD)

    fails += run_block("deg taylor", deg, [1, 2, 3, 6], 60, rng, allow_v0=True)
    fails += run_block("deg laurent", deg, [-1, -2, -3, -6], 60, rng, allow_v0=True)
    fails += run_block("nondeg taylor b>g", nd1, [1, 2, 3, 6], 60, rng, allow_v0=True)
    fails += run_block("nondeg taylor b<g", nd2, [1, 2, 3, 6], 60, rng, allow_v0=True)
    fails += run_block("nondeg laurent b>g", nd1, [-1, -2, -3, -6], 80, rng, allow_v0=True)
    fails += run_block("nondeg laurent b<g", nd2, [-1, -2, -3, -6], 80, rng, allow_v0=True)
    fails += run_block("nondeg laurent rho=i int", res, [-1, -2, -5], 60, rng)
    fails += run_block("near-degenerate laurent", nde, [-1, -2], 10, rng, tol=2e-7)

    # B = 0 special: u = v f exactly
    p = ModelParams(k_i=1.0, beta=2.2, gamma=1.0, burst=BD)
    f = p.beta / (p.beta - p.gamma)
    v = cmath.exp(1j * 2.1) - 1.0
    args = CharArgs(u=v * f, v=v)
    for pw in (-1, -3, 2):
        rel, ok = check("B=0", pw, 0.3, 1.7, args, p)
        fails += 0 if ok else 1
    print("B=0 special checked")

    # constant term
    req = I.IntegralRequest(power=0, s1=0.2, s2=1.9, args=args, params=p)
    assert abs(I.constant_term(req) - 1.7) < 1e-15
    print("constant term ok")

    # log_scale consistency
    args2 = rnd_uv(rng)
    for pw in (3, -3):
        req = I.IntegralRequest(power=pw, s1=0.1, s2=2.0, args=args2, params=p)
        a = I.integral_term(req, log_scale=0.0)
        bshift = I.integral_term(req, log_scale=37.5)
        rel = abs(bshift - a * math.exp(37.5)) / abs(bshift)
        print(f"log_scale pw={pw}: rel={rel:.3e}")
        fails += 0 if rel < 1e-13 else 1

    print("TOTAL FAILS:", fails)


if __name__ == "__main__":
    main()
