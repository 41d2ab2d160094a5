"""Prototype: validate six-region E1 approximation orders before freezing tables."""
import numpy as np
from fractions import Fraction
import math
import mpmath as mp
import sys

sys.path.insert(0, "/root/pkg/src")
from bursty.e1_reference import expint_e1_reference


def region(x, y):
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


def pade(coeffs, L, M):
    """[L/M] Pade of series with exact-rational coefficients."""
    c = [Fraction(x) for x in coeffs]
    # Solve for q_1..q_M:  sum_{j=0}^{M} q_j c_{k-j} = 0, k = L+1..L+M, q_0=1
    A = [[c[k - j] if 0 <= k - j < len(c) else Fraction(0) for j in range(1, M + 1)]
         for k in range(L + 1, L + M + 1)]
    rhs = [-c[k] for k in range(L + 1, L + M + 1)]
    n = M
    # Gaussian elimination with partial pivot (exact)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise ZeroDivisionError("singular Pade system")
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            for cc in range(col, n):
                A[r][cc] -= f * A[col][cc]
            rhs[r] -= f * rhs[col]
    q = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = rhs[r] - sum(A[r][c2] * q[c2] for c2 in range(r + 1, n))
        q[r] = s / A[r][r]
    qq = [Fraction(1)] + q
    pp = [sum(qq[j] * c[k - j] for j in range(0, min(k, M) + 1)) for k in range(L + 1)]
    return [float(x) for x in pp], [float(x) for x in qq]


def horner(cs, w):
    acc = 0j
    for c in reversed(cs):
        acc = acc * w + c
    return acc


# --- exterior Pade of F(w) = sum (-1)^k k! w^k  (F = z e^z E1(z), w = 1/z)
euler_series = [Fraction((-1) ** k * math.factorial(k)) for k in range(40)]
P6, Q6 = pade(euler_series, 6, 6)
P10, Q10 = pade(euler_series, 10, 10)

# --- origin Pade of A(z) = E1 + gamma + log z = sum_{k>=1} (-1)^{k+1} z^k/(k k!)
A_series = [Fraction(0)] + [Fraction((-1) ** (k + 1), k * math.factorial(k)) for k in range(1, 30)]
PA, QA = pade(A_series, 10, 10)

EULER_GAMMA = 0.5772156649015328606


def e1_pade_ext(z, P, Q):
    w = 1.0 / z
    return np.exp(-z) * horner(P, w) / horner(Q, w) / z


def e1_pade_origin(z):
    return horner(PA, z) / horner(QA, z) - EULER_GAMMA - np.log(z)


def sample_region(r, n=1500, seed=0, lo=-35, hi=35):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        x = rng.uniform(lo, hi)
        y = rng.uniform(lo, hi)
        if region(x, y) == r and abs(complex(x, y)) > 1e-6:
            pts.append(complex(x, y))
    return pts


def relerr(approx_fn, pts):
    errs = []
    for z in pts:
        ref = expint_e1_reference(z)
        a = approx_fn(z)
        errs.append(abs(a - ref) / abs(ref))
    return np.array(errs)


if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which in ("1", "all"):
        pts = sample_region(1, 1200, seed=1)
        # add stress points near inner boundary and cut
        extra = [complex(10.6, y) for y in np.linspace(-1, 1, 41)] + \
                [complex(x, y) for x in np.linspace(-35, -23.6, 30) for y in (0.17, -0.17, 0.5, 2.0)] + \
                [complex(10.46 * np.cos(t) * 1.02, 10.46 * np.sin(t) * 1.02) for t in np.linspace(-3.1, 3.1, 60)]
        pts += [z for z in extra if region(z.real, z.imag) == 1]
        e = relerr(lambda z: e1_pade_ext(z, P6, Q6), pts)
        print(f"region1 [6/6]:  n={len(pts)} max={e.max():.3e} argmax={pts[int(e.argmax())]}")
    if which in ("2", "all"):
        pts = sample_region(2, 1200, seed=2)
        extra = [complex(5.15, y) for y in np.linspace(-1, 1, 41)] + \
                [complex(x, y) for x in np.linspace(-25, -23.5, 10) for y in (0.17, -0.3)] + \
                [complex(-10 + 15.2 * np.cos(t), 9.7 * np.sin(t)) for t in np.linspace(-3.1, 3.1, 80)]
        pts += [z for z in extra if region(z.real, z.imag) == 2]
        e = relerr(lambda z: e1_pade_ext(z, P10, Q10), pts)
        print(f"region2 [10/10]: n={len(pts)} max={e.max():.3e} argmax={pts[int(e.argmax())]}")
    if which in ("3", "all"):
        pts = sample_region(3, 1200, seed=3)
        extra = [complex(-0.65 + 4.04 * np.cos(t), 3.99 * np.sin(t)) for t in np.linspace(-3.1, 3.1, 80)]
        pts += [z for z in extra if region(z.real, z.imag) == 3]
        e = relerr(e1_pade_origin, pts)
        print(f"region3 [10/10] origin: n={len(pts)} max={e.max():.3e} argmax={pts[int(e.argmax())]}")


def cheb_nodes_coeffs_A(deg=20, npts=64, lo=-9.0, hi=0.0):
    """Chebyshev coefficients of A(z)=E1+gamma+log z on [lo,hi] via node quadrature (mpmath)."""
    import mpmath as mp
    with mp.workdps(40):
        xs, vals = [], []
        for j in range(npts):
            t = mp.cos(mp.pi * (j + mp.mpf(1) / 2) / npts)
            x = (hi - lo) / 2 * t + (hi + lo) / 2
            # A real-analytic on negative axis: A = gamma + log|x| - Ei(-x)
            v = mp.euler + mp.log(abs(x)) - mp.ei(-x)
            xs.append(t)
            vals.append(v)
        coeffs = []
        for k in range(deg + 1):
            s = mp.mpf(0)
            for j in range(npts):
                s += vals[j] * mp.cos(k * mp.pi * (j + mp.mpf(1) / 2) / npts)
            c = 2 * s / npts
            if k == 0:
                c = c / 2
            coeffs.append(float(c))
    return coeffs


def clenshaw(coeffs, t):
    b1 = b2 = 0j
    for c in reversed(coeffs[1:]):
        b1, b2 = 2 * t * b1 - b2 + c, b1
    return t * b1 - b2 + coeffs[0]


def e1_cheb_ellipse(z, coeffs, lo=-9.0, hi=0.0):
    t = (2 * z - (hi + lo)) / (hi - lo)
    return clenshaw(coeffs, t) - EULER_GAMMA - np.log(z)


def wedge_fit(deg=20, seed=5, nfit=4000, wlo=8.0, whi=24.0):
    """Degree-deg Chebyshev-basis fit of G(w)=w e^{-w} Ei(w) over the reachable wedge (Lawson)."""
    import mpmath as mp
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < nfit:
        x = rng.uniform(-24.0, -8.0)
        y = rng.uniform(0, 8.5)  # fit upper half + real axis; coeffs real
        if region(x, y) == 5:
            pts.append(complex(x, y))
    pts += [complex(x, 0.0) for x in np.linspace(-23.5, -8.01, 400)]
    w = -np.array(pts)
    G = []
    with mp.workdps(40):
        for ww in w:
            wm = mp.mpc(ww)
            G.append(complex(wm * mp.exp(-wm) * mp.ei(wm)))
    G = np.array(G)
    q = (w - (whi + wlo) / 2) / ((whi - wlo) / 2)
    V = np.polynomial.chebyshev.chebvander(q, deg)  # complex ok
    wt = np.ones(len(pts))
    coeffs = None
    for it in range(60):
        Wm = (wt / np.abs(G)) [:, None]
        A2 = np.vstack([(V * Wm).real, (V * Wm).imag])
        b2 = np.concatenate([(G * Wm[:, 0]).real, (G * Wm[:, 0]).imag])
        coeffs, *_ = np.linalg.lstsq(A2, b2, rcond=None)
        r = np.abs(V @ coeffs - G) / np.abs(G)
        wt = wt * np.sqrt(np.maximum(r, 1e-14))
        wt /= wt.max()
    return list(coeffs), float(np.max(np.abs(V @ coeffs - G) / np.abs(G)))


def e1_wedge(z, coeffs, wlo=8.0, whi=24.0):
    w = -z
    q = (w - (whi + wlo) / 2) / ((whi - wlo) / 2)
    Ei = clenshaw(coeffs, q) * np.exp(w) / w
    sgn = 1.0 if (z.imag >= 0) else -1.0
    return -Ei - sgn * 1j * np.pi


SER_C = [(-1) ** (k + 1) / (k * math.factorial(k)) for k in range(1, 56)]


def e1_series55(z):
    acc = 0j
    for c in reversed(SER_C):
        acc = (acc + c) * z
    return acc - EULER_GAMMA - np.log(z)


if __name__ == "__main__" and (len(sys.argv) > 1 and sys.argv[1] in ("4", "5", "6", "rest")):
    which = sys.argv[1]
    if which in ("4", "rest"):
        C4 = cheb_nodes_coeffs_A()
        pts = sample_region(4, 1200, seed=4)
        pts += [z for z in
                (complex(-4.5 + 4.49 * np.cos(t), 2.29 * np.sin(t)) for t in np.linspace(-3.1, 3.1, 120))
                if region(z.real, z.imag) == 4]
        e = relerr(lambda z: e1_cheb_ellipse(z, C4), pts)
        print(f"region4 cheb20[-9,0]: n={len(pts)} max={e.max():.3e} argmax={pts[int(e.argmax())]}")
    if which in ("5", "rest"):
        C5, fitr = wedge_fit()
        print(f"wedge fit residual={fitr:.3e}")
        pts = sample_region(5, 1500, seed=55)
        pts += [complex(x, 0.0) for x in np.linspace(-23.4, -8.05, 120)]
        pts = [z for z in pts if region(z.real, z.imag) == 5]
        e = relerr(lambda z: e1_wedge(z, C5), pts)
        print(f"region5 cheb20 wedge: n={len(pts)} max={e.max():.3e} argmax={pts[int(e.argmax())]}")
    if which in ("6", "rest"):
        pts = sample_region(6, 1500, seed=6)
        e = relerr(e1_series55, pts)
        print(f"region6 series55: n={len(pts)} max={e.max():.3e} argmax={pts[int(e.argmax())]}")
