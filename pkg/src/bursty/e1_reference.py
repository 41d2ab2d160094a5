"""High-precision reference values for the exponential integral E1.

This module is the accuracy anchor for the fast double-precision
approximation in :mod:`bursty.specfun`.  It evaluates E1 with mpmath
arbitrary-precision arithmetic (30 significant digits by default, plus
cancellation guard digits) using two classical routes:

* the ascending series  E1(z) = -euler - log(z) + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
* the continued fraction  E1(z) = e^{-z} / (z+1 - 1^2/(z+3 - 2^2/(z+5 - ...)))

The series converges everywhere; the continued fraction is used in the
right half plane where the series suffers alternating cancellation.  On
the branch cut (z real negative) values are the limit from above,
E1(x + 0i) = -Ei(-x) - i*pi, which is what the principal logarithm in
the series produces.

Nothing here is used by the production solver path; keep it that way so
oracle and implementation stay independent.
"""

from __future__ import annotations

import mpmath as mp

__all__ = ["expint_e1_reference"]


def _series(z: mp.mpc) -> mp.mpc:
    """Ascending series at the current working precision."""
    total = mp.mpc(0)
    term = mp.mpc(1)
    k = 0
    tol = mp.mpf(10) ** (-(mp.mp.dps + 5))
    floor = abs(z) + 10
    while True:
        k += 1
        term = term * z / k
        contrib = term / k
        total = total - contrib if k % 2 == 0 else total + contrib
        if k > floor and abs(contrib) < tol * (abs(total) + 1):
            break
        if k > 100000:
            raise RuntimeError(f"E1 reference series did not converge at z={complex(z)}")
    return total - mp.euler - mp.log(z)


def _continued_fraction(z: mp.mpc) -> mp.mpc:
    """Modified Lentz evaluation of the Stieltjes continued fraction."""
    tiny = mp.mpf(10) ** (-mp.mp.dps * 4)
    tol = mp.mpf(10) ** (-(mp.mp.dps - 5))
    b = z + 1
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, 200000):
        a = -mp.mpf(i) * i
        b = b + 2
        d = 1 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if abs(delta - 1) < tol:
            return h * mp.exp(-z)
    raise RuntimeError(f"E1 reference continued fraction did not converge at z={complex(z)}")


def expint_e1_reference(z: complex, dps: int = 30, scaled: bool = False) -> complex:
    """Reference E1(z) (or e^z E1(z) when scaled) rounded to double precision.

    Parameters
    ----------
    z : complex
        Argument; must be nonzero.  Real negative arguments are treated
        as the limit from the upper half plane.
    dps : int
        Target significant digits.  Guard digits covering the alternating-
        series cancellation (about 0.45 * (|z| + max(Re z, 0))) are added
        internally.
    scaled : bool
        When True, return e^z * E1(z), which stays representable where
        e^z alone would overflow in double precision.
    """
    zc = complex(z)
    if zc == 0:
        raise ValueError("E1 is singular at z = 0")
    guard = int(0.45 * (abs(zc) + max(zc.real, 0.0))) + 15
    with mp.workdps(dps + guard):
        zm = mp.mpc(zc)
        if zc.real >= 0.3 * abs(zc) and abs(zc) >= 3.0:
            value = _continued_fraction(zm)
        else:
            value = _series(zm)
        if scaled:
            value = value * mp.exp(zm)
        return complex(value)
