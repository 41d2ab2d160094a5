"""Characteristic curves U(s), V(s) and the Taylor/Laurent domain split.

Along the characteristics the generating-function PDE reduces to an
ODE, so the log generating function becomes a time integral of the
burst law evaluated at U(s).  The series route needs to know where
|U(s)| sits relative to the switching threshold alpha: below it the
Taylor expansion converges, above it the Laurent expansion does.

|U(s)|^2 has at most two stationary points (its derivative is a
quadratic in e^{(gamma-beta)s}, or in s when beta = gamma), so [0, t]
splits into at most three monotone pieces and at most four regime
domains.  Crossings |U| = alpha are located per monotone piece by
Newton iteration with a bisection fallback.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .burst import BurstDist
from .errors import ConvergenceError, PartitionError

__all__ = [
    "EPS_DEG",
    "ModelParams",
    "CharArgs",
    "DomainPartition",
    "is_degenerate",
    "eval_U",
    "eval_V",
    "extrema_of_absU",
    "partition_domain",
]

# relative |beta - gamma| below which the degenerate formulas are used;
# f = beta/(beta-gamma) amplifies roundoff near the pole
EPS_DEG = 1e-6

_NEWTON_ITERS = 20


@dataclass(frozen=True)
class ModelParams:
    """Kinetic parameters: burst frequency k_i, splicing rate beta,
    degradation rate gamma, and the burst-size law."""

    k_i: float
    beta: float
    gamma: float
    burst: BurstDist

    def __post_init__(self) -> None:
        if not self.k_i >= 0:
            raise ValueError(f"k_i must be >= 0, got {self.k_i}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not isinstance(self.burst, BurstDist):
            raise TypeError(f"burst must be a BurstDist, got {type(self.burst).__name__}")


@dataclass(frozen=True)
class CharArgs:
    """Generating-function arguments (u, v).

    Arguments coming from the unit circle satisfy Re(u) <= 0 and
    Re(v) <= 0; this is not enforced so oracles may probe elsewhere.
    """

    u: complex
    v: complex


@dataclass(frozen=True)
class DomainPartition:
    """Ordered split of [0, t] into regime-tagged sub-intervals.

    ``boundaries`` has one more entry than ``regimes``; sub-interval j
    is [boundaries[j], boundaries[j+1]] with regime ``regimes[j]``.
    """

    boundaries: tuple[float, ...]
    regimes: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.boundaries) != len(self.regimes) + 1:
            raise PartitionError("boundaries must have exactly one more entry than regimes")
        if any(b >= c for b, c in zip(self.boundaries, self.boundaries[1:])):
            raise PartitionError(f"boundaries must be strictly increasing: {self.boundaries}")
        if any(r not in ("taylor", "laurent") for r in self.regimes):
            raise PartitionError(f"unknown regime in {self.regimes}")
        if any(r == s for r, s in zip(self.regimes, self.regimes[1:])):
            raise PartitionError(f"adjacent regimes must alternate: {self.regimes}")
        if len(self.regimes) > 4:
            raise PartitionError(f"more than 4 sub-intervals: {len(self.regimes)}")

    def __iter__(self):
        for j, regime in enumerate(self.regimes):
            yield self.boundaries[j], self.boundaries[j + 1], regime


def is_degenerate(params: ModelParams) -> bool:
    """True when beta and gamma are close enough to use the beta = gamma
    formulas."""
    return abs(params.beta - params.gamma) <= EPS_DEG * max(params.beta, params.gamma)


def eval_V(s: float, args: CharArgs, params: ModelParams) -> complex:
    """V(s) = v e^{-gamma s}."""
    return args.v * math.exp(-params.gamma * s)


def eval_U(s: float, args: CharArgs, params: ModelParams) -> complex:
    """U(s), switching to the degenerate formula when beta = gamma."""
    g = params.gamma
    if is_degenerate(params):
        return cmath.exp(-g * s) * (args.u + g * args.v * s)
    f = params.beta / (params.beta - params.gamma)
    vf = args.v * f
    return vf * math.exp(-g * s) + (args.u - vf) * math.exp(-params.beta * s)


def _absU2(s: float, args: CharArgs, params: ModelParams) -> tuple[float, float]:
    """(|U(s)|^2, d|U(s)|^2/ds)."""
    g = params.gamma
    if is_degenerate(params):
        ruv = (args.u * args.v.conjugate()).real
        au2, av2 = abs(args.u) ** 2, abs(args.v) ** 2
        q = au2 + 2.0 * g * s * ruv + g * g * s * s * av2
        qp = 2.0 * g * ruv + 2.0 * g * g * s * av2
        e = math.exp(-2.0 * g * s)
        return e * q, e * (qp - 2.0 * g * q)
    b = params.beta
    f = b / (b - g)
    p = args.v * f
    q = args.u - p
    p2, q2, pq = abs(p) ** 2, abs(q) ** 2, (p * q.conjugate()).real
    eg, eb, em = math.exp(-2.0 * g * s), math.exp(-2.0 * b * s), math.exp(-(b + g) * s)
    val = p2 * eg + q2 * eb + 2.0 * pq * em
    der = -2.0 * g * p2 * eg - 2.0 * b * q2 * eb - 2.0 * (b + g) * pq * em
    return val, der


def _quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Real roots of a x^2 + b x + c, stable against cancellation."""
    if a == 0.0:
        if b == 0.0:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else -0.5 * sq
    if q == 0.0:
        return [0.0]
    return [q / a, c / q]


def extrema_of_absU(args: CharArgs, params: ModelParams) -> list[float]:
    """All real positive stationary points of |U(s)|^2, sorted."""
    u, v = args.u, args.v
    g = params.gamma
    suv = 2.0 * (u * v.conjugate()).real  # u v-bar + u-bar v
    au2, av2 = abs(u) ** 2, abs(v) ** 2
    if is_degenerate(params):
        a = -g * g * av2
        b = g * (av2 - suv)
        c = 0.5 * suv - au2
        roots = _quadratic_roots(a, b, c)
        return sorted(s for s in roots if s > 0.0)
    beta = params.beta
    f = beta / (beta - g)
    a = -2.0 * beta * (au2 + f * f * av2 - f * suv)
    b = -(g + beta) * f * (suv - 2.0 * av2 * f)
    c = -2.0 * g * f * f * av2
    out = []
    for z in _quadratic_roots(a, b, c):
        if z > 0.0:
            s = math.log(z) / (g - beta)
            if s > 0.0:
                out.append(s)
    return sorted(out)


def _find_crossing(
    lo: float, hi: float, args: CharArgs, params: ModelParams, alpha2: float
) -> float:
    """Root of |U(s)|^2 - alpha^2 on a bracket with a sign change.

    Newton from the bracket midpoint, falling back to bisection when an
    iterate leaves the bracket or fails to converge.
    """
    tol_f = 1e-12 * alpha2
    s = 0.5 * (lo + hi)
    for _ in range(_NEWTON_ITERS):
        val, der = _absU2(s, args, params)
        f = val - alpha2
        if abs(f) < tol_f:
            return s
        if der == 0.0:
            break
        step = f / der
        s_new = s - step
        if not lo <= s_new <= hi:
            break
        if abs(step) < 1e-16 * max(1.0, abs(s)):
            return s_new
        s = s_new
    # bisection fallback
    flo = _absU2(lo, args, params)[0] - alpha2
    a, b = lo, hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        fmid = _absU2(mid, args, params)[0] - alpha2
        if abs(fmid) < tol_f or (b - a) < 1e-15 * max(1.0, abs(b)):
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            a, flo = mid, fmid
        else:
            b = mid
    raise ConvergenceError(
        f"no |U| = alpha crossing located in [{lo}, {hi}] to tolerance"
    )


def partition_domain(t: float, args: CharArgs, params: ModelParams, spec) -> DomainPartition:
    """Split [0, t] at the crossings |U(s)| = spec.alpha.

    Each sub-interval is tagged ``laurent`` if |U| > alpha throughout
    (decided at the midpoint), else ``taylor``.  An infinite alpha gives
    a single Taylor domain, the finite-support-law case.
    """
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    alpha = spec.alpha
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if math.isinf(alpha):
        return DomainPartition((0.0, t), ("taylor",))
    alpha2 = alpha * alpha

    knots = [0.0] + [s for s in extrema_of_absU(args, params) if 0.0 < s < t] + [t]
    crossings = []
    rate = min(params.beta, params.gamma)
    for j in range(len(knots) - 1):
        lo, hi = knots[j], knots[j + 1]
        flo = _absU2(lo, args, params)[0] - alpha2
        fhi = _absU2(hi, args, params)[0] - alpha2
        if (flo > 0.0) == (fhi > 0.0):
            continue  # monotone piece, same side at both ends
        bhi = hi
        if j == len(knots) - 2 and flo > 0.0:
            # rightmost piece: |U| decays at rate >= min(beta, gamma),
            # so the crossing usually sits within 10/rate of the last
            # knot; widen back toward hi if the window missed it
            bhi = min(hi, lo + 10.0 / rate)
            while _absU2(bhi, args, params)[0] - alpha2 > 0.0 and bhi < hi:
                bhi = min(hi, lo + 2.0 * (bhi - lo))
        crossings.append(_find_crossing(lo, bhi, args, params, alpha2))

    eps = 1e-12 * max(1.0, t)
    bounds = [0.0]
    for s in sorted(crossings):
        if s - bounds[-1] > eps and t - s > eps:
            bounds.append(s)
    bounds.append(t)

    regimes = []
    for a, b in zip(bounds, bounds[1:]):
        mid = 0.5 * (a + b)
        regimes.append("laurent" if _absU2(mid, args, params)[0] > alpha2 else "taylor")
    # merge any same-regime neighbours from tangential near-crossings
    mb, mr = [bounds[0]], []
    for j, r in enumerate(regimes):
        if mr and mr[-1] == r:
            mb[-1] = bounds[j + 1]
        else:
            mr.append(r)
            mb.append(bounds[j + 1])
    return DomainPartition(tuple(mb), tuple(mr))
