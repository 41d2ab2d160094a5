"""Gillespie simulation of the bursty two-stage chain.

Three channels: bursts arrive at rate k_i and add a random number of
nascent molecules, each nascent molecule splices at rate beta, each
mature molecule degrades at rate gamma.  The simulator is exact; it
exists to validate the generating-function solver and to produce
synthetic datasets for inference.

Every cell runs on its own counter-based SplitMix64 stream keyed by
(seed, cell index), so serial and parallel runs agree bit for bit and
any one cell can be replayed in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .burst import BurstDist
from .characteristics import ModelParams
from .errors import ConfigError, EventLimitError

__all__ = [
    "RECORD_MODES",
    "SampleSet",
    "SsaConfig",
    "endpoint_histogram",
    "simulate",
]

RECORD_MODES = ("endpoint", "trajectory")

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U01 = 1.0 / 9007199254740992.0  # 2^-53

_KIND_CODES = {"geometric": 0, "shifted_geometric": 1, "bstep": 2, "uniform": 3}


@dataclass(frozen=True)
class SsaConfig:
    """One simulation request."""

    params: ModelParams
    t_final: float
    n_cells: int
    seed: int
    record: str = "endpoint"
    event_cap: int = 10_000_000

    def __post_init__(self) -> None:
        if not self.t_final > 0:
            raise ConfigError(f"t_final must be > 0, got {self.t_final}")
        if self.n_cells < 1:
            raise ConfigError(f"n_cells must be >= 1, got {self.n_cells}")
        if self.record not in RECORD_MODES:
            raise ConfigError(f"record must be one of {RECORD_MODES}, got {self.record!r}")
        if not isinstance(self.seed, int):
            raise ConfigError(f"seed must be an integer, got {type(self.seed).__name__}")
        if self.event_cap < 1:
            raise ConfigError(f"event_cap must be >= 1, got {self.event_cap}")


@dataclass(frozen=True)
class SampleSet:
    """Simulation output with its seed provenance in ``config``.

    ``counts`` holds the state of each cell at t_final.  In trajectory
    mode ``trajectories[c]`` additionally holds one row (t, n, m) for
    the initial state and for each event of cell c.
    """

    config: SsaConfig
    counts: np.ndarray
    trajectories: tuple[np.ndarray, ...] | None = None


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _cell_state(seed, cell):
    return seed ^ _mix64(_GOLDEN * (np.uint64(cell) + np.uint64(1)))


@njit(cache=True)
def _next_u01(state):
    state = state + _GOLDEN
    u = float(_mix64(state) >> np.uint64(11)) * _U01
    return state, u


@njit(cache=True)
def _draw_burst(state, kind, logq, lo, hi):
    if kind == 2:
        return state, hi
    state, u = _next_u01(state)
    if kind == 3:
        j = lo + int(u * float(hi - lo + 1))
        return state, min(j, hi)
    if u <= 0.0:
        u = _U01
    if logq == 0.0:  # shifted_geometric at its b -> 1 limit
        return state, 1
    j = int(math.log(u) / logq)
    if kind == 1:
        j += 1
    return state, j


@njit(cache=True)
def _draw_burst_many(seed, cell, kind, logq, lo, hi, out):
    """Fill ``out`` with burst draws from one cell's stream (testing seam).

    The uint64 state must stay inside compiled code: crossing the
    Python boundary re-boxes it through int64 and corrupts the stream.
    """
    state = _cell_state(seed, cell)
    for i in range(out.size):
        state, b = _draw_burst(state, kind, logq, lo, hi)
        out[i] = b


@njit(cache=True)
def _run_cell(state, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, traj, rows):
    """Advance one cell to tf; optionally record (t, n, m) rows.

    Returns (n, m, events, ok); with traj=True also fills ``rows``,
    whose capacity the caller guarantees via a prior counting pass.
    """
    t = 0.0
    n = n0
    m = m0
    events = 0
    if traj:
        rows[0, 0] = 0.0
        rows[0, 1] = float(n)
        rows[0, 2] = float(m)
    while True:
        a = k + be * n + ga * m
        if a <= 0.0:
            break
        state, u1 = _next_u01(state)
        t -= math.log(1.0 - u1) / a
        if t >= tf:
            break
        state, u2 = _next_u01(state)
        r = u2 * a
        if r < k:
            state, b = _draw_burst(state, kind, logq, lo, hi)
            n += b
        elif r < k + be * n:
            n -= 1
            m += 1
        else:
            m -= 1
        events += 1
        if traj:
            rows[events, 0] = t
            rows[events, 1] = float(n)
            rows[events, 2] = float(m)
        if events >= cap:
            return n, m, events, False
    return n, m, events, True


@njit(parallel=True, cache=True)
def _endpoint_kernel(seed, n_cells, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, out, ok):
    for c in prange(n_cells):
        state = _cell_state(seed, c)
        none = np.empty((0, 3))
        n, m, _, good = _run_cell(
            state, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, False, none
        )
        out[c, 0] = n
        out[c, 1] = m
        ok[c] = good


@njit(parallel=True, cache=True)
def _count_kernel(seed, n_cells, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, nev, ok):
    for c in prange(n_cells):
        state = _cell_state(seed, c)
        none = np.empty((0, 3))
        _, _, events, good = _run_cell(
            state, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, False, none
        )
        nev[c] = events
        ok[c] = good


@njit(parallel=True, cache=True)
def _traj_kernel(seed, n_cells, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, offsets, flat, out):
    for c in prange(n_cells):
        state = _cell_state(seed, c)
        rows = flat[offsets[c] : offsets[c + 1]]
        n, m, _, _ = _run_cell(
            state, k, be, ga, tf, n0, m0, kind, logq, lo, hi, cap, True, rows
        )
        out[c, 0] = n
        out[c, 1] = m


def _burst_codes(dist: BurstDist) -> tuple[int, float, int, int]:
    """(kind code, log of the geometric ratio, low, high) for the kernel."""
    kind = _KIND_CODES[dist.kind]
    if dist.kind == "geometric":
        return kind, math.log(dist.b / (1.0 + dist.b)), 0, 0
    if dist.kind == "shifted_geometric":
        return kind, math.log((dist.b - 1.0) / dist.b), 0, 0
    if dist.kind == "bstep":
        return kind, 0.0, int(dist.b), int(dist.b)
    return kind, 0.0, dist.a, int(dist.b)


def simulate(config: SsaConfig) -> SampleSet:
    """Run the exact SSA for every cell in the config."""
    p = config.params
    kind, logq, lo, hi = _burst_codes(p.burst)
    seed = np.uint64(config.seed & 0xFFFFFFFFFFFFFFFF)
    n0, m0 = 0, 0
    args = (
        seed,
        config.n_cells,
        p.k_i,
        p.beta,
        p.gamma,
        config.t_final,
        n0,
        m0,
        kind,
        logq,
        lo,
        hi,
        config.event_cap,
    )
    counts = np.zeros((config.n_cells, 2), dtype=np.int64)
    ok = np.ones(config.n_cells, dtype=np.bool_)
    if config.record == "endpoint":
        _endpoint_kernel(*args, counts, ok)
        _check_cap(ok, config)
        return SampleSet(config=config, counts=counts)

    nev = np.zeros(config.n_cells, dtype=np.int64)
    _count_kernel(*args, nev, ok)
    _check_cap(ok, config)
    offsets = np.zeros(config.n_cells + 1, dtype=np.int64)
    np.cumsum(nev + 1, out=offsets[1:])
    flat = np.zeros((offsets[-1], 3), dtype=np.float64)
    _traj_kernel(*args, offsets, flat, counts)
    trajectories = tuple(flat[offsets[c] : offsets[c + 1]] for c in range(config.n_cells))
    return SampleSet(config=config, counts=counts, trajectories=trajectories)


def _check_cap(ok: np.ndarray, config: SsaConfig) -> None:
    if not ok.all():
        cell = int(np.flatnonzero(~ok)[0])
        raise EventLimitError(
            f"cell {cell} exceeded the event cap of {config.event_cap} "
            f"before reaching t_final={config.t_final}"
        )


def endpoint_histogram(samples: SampleSet, shape: tuple[int, int]) -> tuple[np.ndarray, float]:
    """Empirical joint PMF of endpoint states on an (n, m) grid.

    Returns (pmf, out_of_grid) where pmf is normalized by the total
    number of cells, so its sum is 1 minus the out-of-grid fraction.
    """
    n, m = shape
    c = samples.counts
    inside = (c[:, 0] < n) & (c[:, 1] < m)
    kept = c[inside]
    flat = np.bincount(kept[:, 0] * m + kept[:, 1], minlength=n * m)
    pmf = flat.reshape(n, m).astype(np.float64) / len(c)
    return pmf, 1.0 - float(inside.mean())
