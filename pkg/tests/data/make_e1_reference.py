"""Freeze high-precision E1 values on the acceptance grid.

Writes e1_reference_grid_200.npz containing the 200x200 grid over
[-35, 35]^2 (axes included as x and y) and the reference E1 values from
bursty.e1_reference.  Regenerate with:

    python3 tests/data/make_e1_reference.py

Runtime is a few minutes; the file is committed so the test suite stays
fast and deterministic.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from bursty.e1_reference import expint_e1_reference


def main() -> None:
    n = 200
    x = np.linspace(-35.0, 35.0, n)
    y = np.linspace(-35.0, 35.0, n)
    values = np.empty((n, n), dtype=np.complex128)
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            values[i, j] = expint_e1_reference(complex(xi, yj))
        if i % 20 == 0:
            print(f"row {i}/{n}", flush=True)
    out = Path(__file__).resolve().parent / "e1_reference_grid_200.npz"
    np.savez_compressed(out, x=x, y=y, e1=values)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
