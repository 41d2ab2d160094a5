"""Burst-size laws and series expansions of their generating functions.

Each transcription event produces a burst of B molecules.  The solver
needs E[(1+u)^B] - 1 (the factorial-moment generating function minus
one) evaluated along characteristic paths, either directly or as a
truncated series in u:

* a Taylor-style expansion, re-centered on the midpoint of the law's
  convergence lens and truncated at order ``n_t``; truncation happens
  before re-expansion, so each coefficient depends on ``n_t``;
* a Laurent expansion in 1/u for the infinite-support laws, valid
  outside the circle |u| = 1/b (geometric) or 1/(b-1) (shifted).

Finite-support laws (``bstep``, ``uniform``) expand exactly as
polynomials with binomial coefficients; they need no Laurent branch and
report an infinite switching threshold.

Coefficients are returned both as plain floats and as (sign, log-
magnitude) pairs; the log form stays finite where b**i overflows and is
what the integral evaluators consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .specfun import binom

__all__ = [
    "KINDS",
    "BurstDist",
    "SeriesCoefficients",
    "fmgf_minus_one",
    "mean",
    "second_moment",
    "convergence_threshold",
    "taylor_coefficients",
    "laurent_coefficients",
    "taylor_coefficients_hypergeometric",
]

KINDS = ("geometric", "shifted_geometric", "bstep", "uniform")

_FINITE_KINDS = ("bstep", "uniform")


@dataclass(frozen=True)
class BurstDist:
    """A burst-size law.

    Parameters
    ----------
    kind : str
        One of ``geometric`` (support {0,1,...}, mean b),
        ``shifted_geometric`` (support {1,2,...}, mean b),
        ``bstep`` (deterministic burst of exactly b),
        ``uniform`` (uniform integers on [a, b]).
    b : float
        Mean burst size for the geometric laws; the (integer) burst size
        or upper bound for the finite-support laws.
    a : int
        Lower bound for ``uniform``; ignored otherwise.
    """

    kind: str
    b: float
    a: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown burst kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "geometric" and not self.b > 0:
            raise ValueError(f"geometric law requires b > 0, got {self.b}")
        if self.kind == "shifted_geometric" and not self.b > 1:
            raise ValueError(f"shifted_geometric law requires b > 1, got {self.b}")
        if self.kind in _FINITE_KINDS:
            if self.b != int(self.b) or self.b < 1:
                raise ValueError(f"{self.kind} law requires integer b >= 1, got {self.b}")
            if self.kind == "uniform":
                if self.a != int(self.a) or not 0 <= self.a <= self.b:
                    raise ValueError(
                        f"uniform law requires integers 0 <= a <= b, got a={self.a}, b={self.b}"
                    )


@dataclass(frozen=True)
class SeriesCoefficients:
    """Expansion coefficients for one regime.

    ``powers[i]`` is the power of u multiplied by ``values[i]``; Taylor
    powers are positive, Laurent powers run 0, -1, ..., -n_l.  ``values``
    may overflow to inf for extreme b**i; ``signs[i] * exp(log_abs[i])``
    is the overflow-safe representation.
    """

    regime: str
    powers: tuple[int, ...]
    values: tuple[float, ...]
    log_abs: tuple[float, ...]
    signs: tuple[float, ...]


def fmgf_minus_one(dist: BurstDist, u: complex) -> complex:
    """E[(1+u)^B] - 1 for complex u.

    The geometric forms have a pole at u = 1/b (resp. u = 1/(b-1));
    evaluation exactly on the pole raises ZeroDivisionError.
    """
    u = complex(u)
    if dist.kind == "geometric":
        return dist.b * u / (1.0 - dist.b * u)
    if dist.kind == "shifted_geometric":
        return dist.b * u / (1.0 + (1.0 - dist.b) * u)
    if dist.kind == "bstep":
        return (1.0 + u) ** int(dist.b) - 1.0
    # uniform on [a, b]
    a, b = int(dist.a), int(dist.b)
    n = b - a + 1
    p = (1.0 + u) ** a
    total = 0j
    for _ in range(a, b + 1):
        total += p
        p *= 1.0 + u
    return total / n - 1.0


def mean(dist: BurstDist) -> float:
    """E[B]."""
    if dist.kind in ("geometric", "shifted_geometric", "bstep"):
        return float(dist.b)
    return (dist.a + dist.b) / 2.0


def second_moment(dist: BurstDist) -> float:
    """E[B^2], used for grid sizing."""
    b = float(dist.b)
    if dist.kind == "geometric":
        return b * (2.0 * b + 1.0)
    if dist.kind == "shifted_geometric":
        return b * (2.0 * b - 1.0)
    if dist.kind == "bstep":
        return b * b
    a, bb = int(dist.a), int(dist.b)
    return sum(i * i for i in range(a, bb + 1)) / (bb - a + 1)


def convergence_threshold(dist: BurstDist) -> float:
    """Switching radius alpha: Taylor for |U| < alpha, Laurent above.

    Placed between the Laurent circle and the Taylor lens boundary on
    the imaginary axis.  Finite-support laws converge everywhere, so
    their threshold is infinite and no Laurent regime ever arises.
    """
    if dist.kind == "geometric":
        return (1.0 + math.sqrt(3.0)) / (2.0 * dist.b)
    if dist.kind == "shifted_geometric":
        return (1.0 + math.sqrt(3.0)) / (2.0 * (dist.b - 1.0))
    return math.inf


def _tail_sums(n_t: int) -> list[float]:
    """c_i = sum_{j=i}^{n_t} 2^{-j} C(j, i) for i = 1..n_t."""
    out = []
    for i in range(1, n_t + 1):
        acc = 0.0
        for j in range(i, n_t + 1):
            acc += 2.0 ** (-j) * binom(j, i)
        out.append(acc)
    return out


def _from_logs(regime: str, powers, log_abs, signs) -> SeriesCoefficients:
    values = tuple(
        s * (math.exp(la) if la < 709.0 else math.inf) for s, la in zip(signs, log_abs)
    )
    return SeriesCoefficients(regime, tuple(powers), values, tuple(log_abs), tuple(signs))


def _from_values(regime: str, powers, values) -> SeriesCoefficients:
    log_abs = tuple(math.log(abs(v)) for v in values)
    signs = tuple(math.copysign(1.0, v) for v in values)
    return SeriesCoefficients(regime, tuple(powers), tuple(values), log_abs, signs)


def taylor_coefficients(dist: BurstDist, n_t: int) -> SeriesCoefficients:
    """Taylor-regime coefficients Omega_i for powers u^1 .. u^{n_t}.

    For the geometric laws the expansion is truncated at order ``n_t``
    about the lens midpoint and re-expanded, so coefficients shrink as i
    approaches ``n_t``.  Finite-support laws return their exact
    polynomial (all powers 1..b; ``n_t`` is ignored).
    """
    if n_t < 1:
        raise ValueError(f"n_t must be >= 1, got {n_t}")
    if dist.kind == "geometric":
        cs = _tail_sums(n_t)
        powers = range(1, n_t + 1)
        log_abs = [i * math.log(dist.b) + math.log(c / 2.0) for i, c in zip(powers, cs)]
        return _from_logs("taylor", powers, log_abs, [1.0] * n_t)
    if dist.kind == "shifted_geometric":
        cs = _tail_sums(n_t)
        powers = range(1, n_t + 1)
        log_abs = [
            math.log(dist.b / 2.0) + (i - 1) * math.log(dist.b - 1.0) + math.log(c)
            for i, c in zip(powers, cs)
        ]
        return _from_logs("taylor", powers, log_abs, [1.0] * n_t)
    if dist.kind == "bstep":
        b = int(dist.b)
        powers = range(1, b + 1)
        return _from_values("taylor", powers, [binom(b, i) for i in powers])
    a, b = int(dist.a), int(dist.b)
    n = b - a + 1
    powers = range(1, b + 1)
    values = [(binom(b + 1, i + 1) - binom(a, i + 1)) / n for i in powers]
    return _from_values("taylor", powers, values)


def laurent_coefficients(dist: BurstDist, n_l: int) -> SeriesCoefficients:
    """Laurent-regime coefficients for powers u^0, u^-1, ..., u^{-n_l}.

    Only the infinite-support laws have a Laurent regime.
    """
    if n_l < 0:
        raise ValueError(f"n_l must be >= 0, got {n_l}")
    if dist.kind == "geometric":
        powers = [-i for i in range(n_l + 1)]
        log_abs = [-i * math.log(dist.b) for i in range(n_l + 1)]
        return _from_logs("laurent", powers, log_abs, [-1.0] * (n_l + 1))
    if dist.kind == "shifted_geometric":
        powers = [-i for i in range(n_l + 1)]
        log_abs = [
            math.log(dist.b) - (i + 1) * math.log(dist.b - 1.0) for i in range(n_l + 1)
        ]
        return _from_logs("laurent", powers, log_abs, [-1.0] * (n_l + 1))
    raise ValueError(f"{dist.kind} law has an exact polynomial expansion; no Laurent regime")


def _bracket_exact(n_t: int, i: int) -> Fraction:
    """1 - 2^{-n_t-2} C(n_t+1, i) 2F1(1, n_t+2; n_t+2-i; 1/2), exactly.

    The bracket equals the summation-route tail sum c_i / 2 and can be
    ~2^{-n_t}; rational arithmetic keeps full relative accuracy through
    the cancellation, which double precision cannot.
    """
    term = Fraction(1)
    total = Fraction(0)
    k = 0
    cutoff = Fraction(1, 10**30)
    while True:
        total += term
        k += 1
        # term ratio: (1+k-1)(n_t+2+k-1) / ((n_t+2-i+k-1) k) * 1/2
        term *= Fraction(n_t + 1 + k, 2 * (n_t + 1 - i + k))
        if term < cutoff * total:
            total += term * 2  # geometric tail bound, ratio -> 1/2
            break
        if k > 10000:
            raise RuntimeError("2F1 rational series failed to converge")
    return 1 - Fraction(2) ** (-n_t - 2) * math.comb(n_t + 1, i) * total


def taylor_coefficients_hypergeometric(dist: BurstDist, n_t: int) -> SeriesCoefficients:
    """Closed-form route to the geometric-law Taylor coefficients.

    Exists to cross-check :func:`taylor_coefficients`; the two routes
    share no code.  The hypergeometric series is summed in exact
    rational arithmetic because the final subtraction cancels ~n_t bits.
    """
    if n_t < 1:
        raise ValueError(f"n_t must be >= 1, got {n_t}")
    if dist.kind not in ("geometric", "shifted_geometric"):
        raise ValueError(f"hypergeometric route applies to geometric laws, not {dist.kind}")
    powers = range(1, n_t + 1)
    log_abs = []
    for i in powers:
        br = _bracket_exact(n_t, i)
        log_br = math.log(br.numerator) - math.log(br.denominator)
        if dist.kind == "geometric":
            log_abs.append(i * math.log(dist.b) + log_br)
        else:
            log_abs.append(
                math.log(dist.b) + (i - 1) * math.log(dist.b - 1.0) + log_br
            )
    return _from_logs("taylor", powers, log_abs, [1.0] * n_t)
