"""Data-model divergences and parameter-landscape sweeps.

Three distances are implemented: Kullback-Leibler divergence of the
data histogram from a solved model, a Kolmogorov-Smirnov statistic on
joint (or marginal) CDFs, and a characteristic-function distance that
compares the forward DFT of the data histogram against e^phi on the
same unit-circle grid.  The CF route never inverts or solves anything,
so a candidate costs one generating-function evaluation per grid node;
the empirical CF is computed once and reused across candidates.

``sweep`` evaluates one divergence over a (k_i, b) grid with beta,
gamma, and the burst kind held fixed, timing each cell.  Cells far
from the truth may alias badly on the data-sized grid; that misfit is
the landscape's signal, so the solver's boundary guard is disabled and
only genuine numerical failures are flagged (never raised).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .burst import BurstDist
from .characteristics import ModelParams
from .errors import ConfigError, NumericalError, SupportError
from .solver import (
    CLAMP_FLOOR,
    ExpansionSpec,
    GridSpec,
    JointDist,
    expansion_spec_for,
    gf_grid,
    solve_joint,
)

__all__ = [
    "MAX_OUT_OF_GRID",
    "METRICS",
    "Landscape",
    "ParamGrid",
    "cf_distance",
    "empirical_cf",
    "kl_divergence",
    "ks_error",
    "sweep",
]

METRICS = ("kl", "ks", "cf")
MAX_OUT_OF_GRID = 1e-3


def _as_pmf(x) -> np.ndarray:
    p = np.asarray(getattr(x, "p", x), dtype=float)
    if p.ndim != 2:
        raise ConfigError(f"expected a 2-D joint PMF, got shape {p.shape}")
    if (p < 0).any():
        raise ConfigError("PMF entries must be non-negative")
    return p


def kl_divergence(data_hist, model: JointDist) -> float:
    """sum q ln(q/p) over the data support, model clamped like the solver."""
    q = _as_pmf(data_hist)
    p = model.p
    if q.shape[0] > p.shape[0] or q.shape[1] > p.shape[1]:
        outside = float(q.sum() - q[: p.shape[0], : p.shape[1]].sum())
        if outside > 0.0:
            raise SupportError(f"data mass {outside:.3e} lies outside the model grid")
        q = q[: p.shape[0], : p.shape[1]]
    mask = q > 0.0
    pc = np.clip(p[: q.shape[0], : q.shape[1]][mask], CLAMP_FLOOR, None)
    return float((q[mask] * np.log(q[mask] / pc)).sum())


def ks_error(p1, p2, mode: str = "joint") -> float:
    """Max CDF gap between two distributions on one grid.

    ``joint`` accumulates the CDF in row-major lexicographic state
    order (an artifact policy: no canonical 2-D CDF ordering exists);
    ``marginal`` takes the larger of the two 1-D marginal statistics.
    """
    a, b = _as_pmf(p1), _as_pmf(p2)
    if a.shape != b.shape:
        raise ConfigError(f"shape mismatch: {a.shape} vs {b.shape}")
    if mode == "joint":
        return float(np.abs(np.cumsum(a.ravel()) - np.cumsum(b.ravel())).max())
    if mode == "marginal":
        ks_n = np.abs(np.cumsum(a.sum(1)) - np.cumsum(b.sum(1))).max()
        ks_m = np.abs(np.cumsum(a.sum(0)) - np.cumsum(b.sum(0))).max()
        return float(max(ks_n, ks_m))
    raise ConfigError(f"mode must be 'joint' or 'marginal', got {mode!r}")


def empirical_cf(data_hist) -> np.ndarray:
    """Forward DFT of the histogram: the empirical CF on the solver grid."""
    return np.fft.fft2(_as_pmf(data_hist))


def cf_distance(
    data,
    params: ModelParams,
    spec: ExpansionSpec,
    t: float | None = None,
    initial: tuple[int, int] = (0, 0),
    threads: int | None = None,
) -> float:
    """Mean squared modulus gap between empirical and model CFs.

    ``data`` is a joint histogram, or its precomputed ``empirical_cf``
    (pass that when scoring many candidates against one dataset).
    """
    cf = np.asarray(data) if np.iscomplexobj(data) else empirical_cf(data)
    G = gf_grid(params, cf.shape, spec, t=t, initial=initial, threads=threads)
    return float(np.mean(np.abs(cf - G) ** 2))


@dataclass(frozen=True)
class ParamGrid:
    """Trial (k_i, b) combinations with beta, gamma, and kind fixed."""

    k_axis: tuple[float, ...]
    b_axis: tuple[float, ...]
    beta: float
    gamma: float
    kind: str = "geometric"
    a: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "k_axis", tuple(float(k) for k in self.k_axis))
        object.__setattr__(self, "b_axis", tuple(float(b) for b in self.b_axis))
        for name, axis in (("k_axis", self.k_axis), ("b_axis", self.b_axis)):
            if len(axis) == 0:
                raise ConfigError(f"{name} must be non-empty")
            if any(y <= x for x, y in zip(axis, axis[1:])):
                raise ConfigError(f"{name} must be strictly increasing, got {axis}")
        try:
            for ik in range(len(self.k_axis)):
                self.params(ik, 0)
            for ib in range(len(self.b_axis)):
                self.dist(self.b_axis[ib])
        except (ValueError, TypeError) as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def log_spaced(
        cls,
        k_range: tuple[float, float],
        b_range: tuple[float, float],
        shape: tuple[int, int],
        beta: float,
        gamma: float,
        kind: str = "geometric",
    ) -> "ParamGrid":
        """Axes geometrically spaced over [lo, hi], (n_k, n_b) points."""
        ks = np.geomspace(k_range[0], k_range[1], shape[0])
        bs = np.geomspace(b_range[0], b_range[1], shape[1])
        return cls(tuple(ks), tuple(bs), beta, gamma, kind)

    def dist(self, b: float) -> BurstDist:
        return BurstDist(self.kind, b, self.a)

    def params(self, ik: int, ib: int) -> ModelParams:
        return ModelParams(self.k_axis[ik], self.beta, self.gamma, self.dist(self.b_axis[ib]))


@dataclass(frozen=True)
class Landscape:
    """Divergence matrix over a ParamGrid, rows b_axis x cols k_axis."""

    k_axis: tuple[float, ...]
    b_axis: tuple[float, ...]
    values: np.ndarray
    metric: str
    method: str
    cell_seconds: np.ndarray
    flags: np.ndarray
    out_of_grid: float

    def argmin(self) -> tuple[int, int]:
        """(ib, ik) of the smallest unflagged cell."""
        masked = np.where(self.flags, np.inf, self.values)
        ib, ik = np.unravel_index(int(np.argmin(masked)), masked.shape)
        return int(ib), int(ik)


def sweep(
    data,
    grid: ParamGrid,
    spec: ExpansionSpec,
    metric: str = "kl",
    t: float | None = None,
    threads: int | None = None,
) -> Landscape:
    """Score every ParamGrid cell against the data histogram.

    ``spec`` contributes its orders and method; each cell re-derives
    the expansion threshold alpha from its own burst law, since no
    single alpha is valid across a decades-wide b axis.
    """
    if metric not in METRICS:
        raise ConfigError(f"metric must be one of {METRICS}, got {metric!r}")
    q = _as_pmf(data)
    out_of_grid = max(0.0, 1.0 - float(q.sum()))
    if out_of_grid > MAX_OUT_OF_GRID:
        raise SupportError(
            f"data mass {out_of_grid:.3e} off the grid exceeds {MAX_OUT_OF_GRID}"
        )
    cf = empirical_cf(q) if metric == "cf" else None
    shape = (len(grid.b_axis), len(grid.k_axis))
    values = np.full(shape, np.nan)
    seconds = np.zeros(shape)
    flags = np.zeros(shape, dtype=bool)

    def run_cell(cell: tuple[int, int]) -> None:
        ib, ik = cell
        params = grid.params(ik, ib)
        cell_spec = expansion_spec_for(params.burst, spec.n_t, spec.n_l, method=spec.method)
        start = time.perf_counter()
        try:
            if metric == "cf":
                values[ib, ik] = cf_distance(cf, params, cell_spec, t=t)
            else:
                gspec = GridSpec(q.shape[0], q.shape[1], t=t, boundary_tol=2.0)
                sol = solve_joint(params, gspec, cell_spec)
                if metric == "kl":
                    values[ib, ik] = kl_divergence(q, sol)
                else:
                    values[ib, ik] = ks_error(q, sol.p)
        except NumericalError:
            flags[ib, ik] = True
        seconds[ib, ik] = time.perf_counter() - start

    cells = [(ib, ik) for ib in range(shape[0]) for ik in range(shape[1])]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_cell, cells))
    else:
        for cell in cells:
            run_cell(cell)
    return Landscape(
        k_axis=grid.k_axis,
        b_axis=grid.b_axis,
        values=values,
        metric=metric,
        method=spec.method,
        cell_seconds=seconds,
        flags=flags,
        out_of_grid=out_of_grid,
    )
