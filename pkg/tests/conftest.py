"""Shared oracles for the test suite.

The CME integrator here is deliberately independent of the package: it
builds the truncated master-equation generator state by state from the
reaction scheme (bursts add B to n, splicing moves one n to m at rate
beta*n, degradation removes one m at rate gamma*m) and integrates it
with scipy.  Probability leaving the truncation box is dropped, so the
result is a finite-state projection whose mass deficit bounds the
truncation error.
"""

import numpy as np
from scipy.integrate import solve_ivp


def burst_pmf(dist, jmax: int) -> np.ndarray:
    """P(B = j) for j = 0..jmax, straight from the law definitions."""
    p = np.zeros(jmax + 1)
    j = np.arange(jmax + 1)
    if dist.kind == "geometric":
        q = dist.b / (1.0 + dist.b)
        p = (1.0 - q) * q**j
    elif dist.kind == "shifted_geometric":
        q = (dist.b - 1.0) / dist.b
        p[1:] = (1.0 / dist.b) * q ** (j[1:] - 1)
    elif dist.kind == "bstep":
        p[int(dist.b)] = 1.0
    elif dist.kind == "uniform":
        a, b = int(dist.a), int(dist.b)
        p[a : b + 1] = 1.0 / (b - a + 1)
    else:
        raise ValueError(dist.kind)
    return p


def cme_ode_joint(params, shape, t, initial=(0, 0), rtol=1e-10, atol=1e-13):
    """P(n, m, t) on an N x M truncation box by direct ODE integration."""
    N, M = shape
    k, beta, gamma = params.k_i, params.beta, params.gamma
    pB = burst_pmf(params.burst, N - 1)
    exit_rate = k * (1.0 - pB[0])  # j = 0 bursts change nothing

    narr = np.arange(N)[:, None]
    marr = np.arange(M)[None, :]

    def rhs(_t, y):
        P = y.reshape(N, M)
        out = np.zeros_like(P)
        for j in range(1, N):
            if pB[j] != 0.0:
                out[j:, :] += (k * pB[j]) * P[: N - j, :]
        out -= exit_rate * P
        flux = beta * narr * P
        out -= flux
        out[: N - 1, 1:] += flux[1:, : M - 1]
        dflux = gamma * marr * P
        out -= dflux
        out[:, : M - 1] += dflux[:, 1:]
        return out.ravel()

    y0 = np.zeros(N * M)
    y0[initial[0] * M + initial[1]] = 1.0
    sol = solve_ivp(rhs, (0.0, t), y0, method="DOP853", rtol=rtol, atol=atol)
    return sol.y[:, -1].reshape(N, M)


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def ks_statistic(p, q) -> float:
    """Max CDF gap under row-major state ordering."""
    return float(np.max(np.abs(np.cumsum(np.ravel(p)) - np.cumsum(np.ravel(q)))))


def multinomial_tv_null(pmf, n_samples: int, n_rep: int = 200, seed: int = 0, q: float = 0.99):
    """q-quantile of TV(resample, pmf) under pure multinomial sampling noise."""
    rng = np.random.default_rng(seed)
    flat = np.ravel(np.asarray(pmf))
    flat = np.clip(flat, 0.0, None)
    flat = flat / flat.sum()
    tvs = np.empty(n_rep)
    for r in range(n_rep):
        draw = rng.multinomial(n_samples, flat) / n_samples
        tvs[r] = 0.5 * np.abs(draw - flat).sum()
    return float(np.quantile(tvs, q))
