"""Generate the embedded coefficient tables for the six-region E1 approximation.

Writes src/bursty/_e1_coeffs.py.  Run from the repository root:

    python3 tools/gen_e1_coeffs.py

Constructions (one per dispatch region, in priority order):

1. PADE6_EXTERIOR:   [6/6] Pade, exact rational arithmetic, of the divergent
                     asymptotic series F(w) = sum_k (-1)^k k! w^k, where
                     F(1/z) = z e^z E1(z).
2. PADE10_EXTERIOR:  [10/10] Pade of the same series.
3. PADE10_ELLIPSE:   [10/10] Pade of the entire part
                     A(z) = E1(z) + gamma + log z = sum_{k>=1} (-1)^{k+1} z^k/(k k!).
4. CHEB20_ELLIPSE:   degree-20 Chebyshev expansion of A on [-9, 0]
                     (64-node Chebyshev quadrature at 40 digits).
5. CHEB20_RADIAL:    degree-20 Chebyshev-basis minimax fit (Lawson-weighted
                     least squares) of w e^{-w} Ei(w), w = -z mapped from
                     [8, 24], over the set of points the dispatcher actually
                     routes to this region.
6. SERIES_55:        no table; 55-term ascending series built from factorials
                     at import time.

All fits are checked against the high-precision oracle in
bursty.e1_reference before the file is written.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from pathlib import Path

import mpmath as mp
import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from bursty.e1_reference import expint_e1_reference  # noqa: E402

EULER_GAMMA = 0.5772156649015328606

CHEB_ELLIPSE_INTERVAL = (-9.0, 0.0)
CHEB_RADIAL_INTERVAL = (8.0, 24.0)


def region(x: float, y: float) -> int:
    if (x / 17 + 0.3824) ** 2 + (y / 13) ** 2 > 1:
        return 1
    if ((x + 10) / 15) ** 2 + (y / 9.5) ** 2 > 1:
        return 2
    if ((x + 0.65) / 4.05) ** 2 + (y / 4) ** 2 < 1:
        return 3
    if ((x + 4.5) / 4.5) ** 2 + (y / 2.3) ** 2 < 1:
        return 4
    if x < -8 and abs(y) < (-x - 8) * 0.5294:
        return 5
    return 6


def pade(series: list[Fraction], L: int, M: int) -> tuple[list[float], list[float]]:
    """[L/M] Pade coefficients (numerator, denominator) by exact elimination."""
    c = list(series)
    A = [[c[k - j] if 0 <= k - j < len(c) else Fraction(0) for j in range(1, M + 1)]
         for k in range(L + 1, L + M + 1)]
    rhs = [-c[k] for k in range(L + 1, L + M + 1)]
    for col in range(M):
        piv = max(range(col, M), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise ZeroDivisionError("singular Pade system")
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(col + 1, M):
            f = A[r][col] / A[col][col]
            for cc in range(col, M):
                A[r][cc] -= f * A[col][cc]
            rhs[r] -= f * rhs[col]
    q = [Fraction(0)] * M
    for r in range(M - 1, -1, -1):
        s = rhs[r] - sum(A[r][c2] * q[c2] for c2 in range(r + 1, M))
        q[r] = s / A[r][r]
    den = [Fraction(1)] + q
    num = [sum(den[j] * c[k - j] for j in range(0, min(k, M) + 1)) for k in range(L + 1)]
    return [float(x) for x in num], [float(x) for x in den]


def cheb_expand_entire(deg: int = 20, npts: int = 64) -> list[float]:
    lo, hi = CHEB_ELLIPSE_INTERVAL
    with mp.workdps(40):
        vals, coeffs = [], []
        for j in range(npts):
            t = mp.cos(mp.pi * (j + mp.mpf(1) / 2) / npts)
            x = (hi - lo) / 2 * t + (hi + lo) / 2
            vals.append(mp.euler + mp.log(abs(x)) - mp.ei(-x))
        for k in range(deg + 1):
            s = sum(vals[j] * mp.cos(k * mp.pi * (j + mp.mpf(1) / 2) / npts) for j in range(npts))
            c = 2 * s / npts
            coeffs.append(float(c / 2 if k == 0 else c))
    return coeffs


def fit_radial(deg: int = 20, seed: int = 5, nfit: int = 4000) -> list[float]:
    wlo, whi = CHEB_RADIAL_INTERVAL
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < nfit:
        x = rng.uniform(-24.0, -8.0)
        y = rng.uniform(0.0, 8.5)
        if region(x, y) == 5:
            pts.append(complex(x, y))
    pts += [complex(x, 0.0) for x in np.linspace(-23.5, -8.01, 400)]
    w = -np.array(pts)
    with mp.workdps(40):
        G = np.array([complex(mp.mpc(ww) * mp.exp(-mp.mpc(ww)) * mp.ei(mp.mpc(ww))) for ww in w])
    q = (w - (whi + wlo) / 2) / ((whi - wlo) / 2)
    V = np.polynomial.chebyshev.chebvander(q, deg)
    wt = np.ones(len(pts))
    coeffs = None
    for _ in range(60):
        scale = (wt / np.abs(G))[:, None]
        A2 = np.vstack([(V * scale).real, (V * scale).imag])
        b2 = np.concatenate([(G * scale[:, 0]).real, (G * scale[:, 0]).imag])
        coeffs, *_ = np.linalg.lstsq(A2, b2, rcond=None)
        resid = np.abs(V @ coeffs - G) / np.abs(G)
        wt = wt * np.sqrt(np.maximum(resid, 1e-14))
        wt /= wt.max()
    return [float(c) for c in coeffs]


def check(tag: str, fn, region_id: int, nsample: int, seed: int, bound: float = 10 ** -7.9) -> None:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    while count < nsample:
        z = complex(rng.uniform(-35, 35), rng.uniform(-35, 35))
        if region(z.real, z.imag) != region_id or abs(z) < 1e-9:
            continue
        count += 1
        ref = expint_e1_reference(z)
        worst = max(worst, abs(fn(z) - ref) / abs(ref))
    print(f"  {tag}: max rel err {worst:.3e} over {nsample} samples")
    if worst > bound:
        raise SystemExit(f"{tag} exceeds target bound {bound:.2e}")


def main() -> None:
    euler_series = [Fraction((-1) ** k * math.factorial(k)) for k in range(40)]
    a_series = [Fraction(0)] + [Fraction((-1) ** (k + 1), k * math.factorial(k)) for k in range(1, 30)]

    print("deriving Pade tables (exact rational)...")
    p6n, p6d = pade(euler_series, 6, 6)
    p10n, p10d = pade(euler_series, 10, 10)
    pan, pad = pade(a_series, 10, 10)
    print("expanding Chebyshev table (ellipse)...")
    cheb_e = cheb_expand_entire()
    print("fitting Chebyshev table (radial wedge)...")
    cheb_r = fit_radial()

    def horner(cs, v):
        acc = 0j
        for c in reversed(cs):
            acc = acc * v + c
        return acc

    def clenshaw(cs, t):
        b1 = b2 = 0j
        for c in reversed(cs[1:]):
            b1, b2 = 2 * t * b1 - b2 + c, b1
        return t * b1 - b2 + cs[0]

    import cmath

    print("verifying against reference oracle...")
    check("pade6_exterior", lambda z: cmath.exp(-z) * horner(p6n, 1 / z) / horner(p6d, 1 / z) / z, 1, 400, 11)
    check("pade10_exterior", lambda z: cmath.exp(-z) * horner(p10n, 1 / z) / horner(p10d, 1 / z) / z, 2, 400, 12)
    check("pade10_ellipse", lambda z: horner(pan, z) / horner(pad, z) - EULER_GAMMA - cmath.log(z), 3, 400, 13)
    lo, hi = CHEB_ELLIPSE_INTERVAL
    check("cheb20_ellipse", lambda z: clenshaw(cheb_e, (2 * z - hi - lo) / (hi - lo)) - EULER_GAMMA - cmath.log(z),
          4, 400, 14)
    wlo, whi = CHEB_RADIAL_INTERVAL

    def radial(z):
        w = -z
        ei = clenshaw(cheb_r, (2 * w - whi - wlo) / (whi - wlo)) * cmath.exp(w) / w
        return -ei - (1j if z.imag >= 0 else -1j) * math.pi

    check("cheb20_radial", radial, 5, 400, 15)

    out = ROOT / "src" / "bursty" / "_e1_coeffs.py"
    with out.open("w") as f:
        f.write('"""Coefficient tables for the six-region E1 approximation.\n\n'
                "Generated by tools/gen_e1_coeffs.py; do not edit by hand.\n"
                "See that script for the constructions and accuracy checks.\n"
                '"""\n\n')

        def emit(name, values):
            f.write(f"{name} = (\n")
            for v in values:
                f.write(f"    {v!r},\n")
            f.write(")\n\n")

        emit("PADE6_EXTERIOR_NUM", p6n)
        emit("PADE6_EXTERIOR_DEN", p6d)
        emit("PADE10_EXTERIOR_NUM", p10n)
        emit("PADE10_EXTERIOR_DEN", p10d)
        emit("PADE10_ELLIPSE_NUM", pan)
        emit("PADE10_ELLIPSE_DEN", pad)
        emit("CHEB20_ELLIPSE", cheb_e)
        f.write(f"CHEB20_ELLIPSE_INTERVAL = {CHEB_ELLIPSE_INTERVAL!r}\n\n")
        emit("CHEB20_RADIAL", cheb_r)
        f.write(f"CHEB20_RADIAL_INTERVAL = {CHEB_RADIAL_INTERVAL!r}\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
