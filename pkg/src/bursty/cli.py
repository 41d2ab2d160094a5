"""Command-line workflows: solve, simulate, sweep, bench-expint.

Configuration comes from a TOML file with flag overrides; every run
writes its outputs plus a metadata JSON embedding the fully resolved
configuration, so results trace back to exact inputs.  Numeric CSV
output uses 17 significant digits and round-trips float64 losslessly.

Exit codes: 0 success, 2 configuration errors, 3 numerical failures.
Failures emit a one-line JSON description on stderr with the error
type, originating module, and operation.  ``BURSTY_THREADS`` caps the
worker threads handed to the solver; the CLI layer itself is
single-threaded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np
from scipy.special import exp1

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .characteristics import ModelParams
from .burst import BurstDist
from .errors import ConfigError, NumericalError
from .inference import METRICS, ParamGrid, ks_error, sweep
from .solver import GridSpec, expansion_spec_for, solve_joint
from .specfun import E1Region, e1_region, expint_e1
from .ssa import SsaConfig, simulate

__all__ = ["main"]

FMT = "%.17g"


def _load_config(path: str | None) -> dict:
    if path is None:
        raise ConfigError("--config is required for this command")
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        with open(p, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        # tomli reports line and column in the message
        raise ConfigError(f"{p}: {e}") from e


def _section(cfg: dict, name: str) -> dict:
    sec = cfg.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return dict(sec)


def _need(sec: dict, section: str, key: str):
    if key not in sec:
        raise ConfigError(f"missing key [{section}] {key}")
    return sec[key]


def _burst_from(cfg: dict) -> BurstDist:
    sec = _section(cfg, "burst")
    try:
        return BurstDist(
            str(_need(sec, "burst", "kind")),
            float(_need(sec, "burst", "b")),
            int(sec.get("a", 0)),
        )
    except (ValueError, TypeError) as e:
        raise ConfigError(f"[burst] {e}") from e


def _model_from(cfg: dict) -> ModelParams:
    sec = _section(cfg, "model")
    burst = _burst_from(cfg)
    try:
        return ModelParams(
            float(_need(sec, "model", "k_i")),
            float(_need(sec, "model", "beta")),
            float(_need(sec, "model", "gamma")),
            burst,
        )
    except (ValueError, TypeError) as e:
        raise ConfigError(f"[model] {e}") from e


def _spec_from(cfg: dict, args, dist: BurstDist, method: str | None = None):
    sec = _section(cfg, "expansion")
    n_t = int(sec.get("n_t", 7))
    n_l = int(sec.get("n_l", 7))
    if getattr(args, "orders", None) is not None:
        n_l, n_t = args.orders
    if method is None:
        method = getattr(args, "method", None) or sec.get("method", "expansion")
    alpha = sec.get("alpha")
    if alpha is None:
        return expansion_spec_for(dist, n_t, n_l, method=method)
    return expansion_spec_for(dist, n_t, n_l, method=method, alpha=float(alpha))


def _grid_from(cfg: dict, args) -> GridSpec:
    sec = _section(cfg, "grid")
    if getattr(args, "grid", None) is not None:
        n, m = args.grid
    else:
        n = int(_need(sec, "grid", "n"))
        m = int(_need(sec, "grid", "m"))
    kwargs = {}
    if sec.get("t") is not None:
        kwargs["t"] = float(sec["t"])
    if sec.get("initial") is not None:
        kwargs["initial"] = tuple(int(x) for x in sec["initial"])
    if sec.get("boundary_tol") is not None:
        kwargs["boundary_tol"] = float(sec["boundary_tol"])
    return GridSpec(n, m, **kwargs)


def _threads() -> int | None:
    raw = os.environ.get("BURSTY_THREADS")
    if raw is None:
        return None
    try:
        return max(1, int(raw))
    except ValueError as e:
        raise ConfigError(f"BURSTY_THREADS must be an integer, got {raw!r}") from e


def _outdir(args) -> Path:
    out = Path(getattr(args, "out", ".") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_matrix(path: Path, arr: np.ndarray) -> None:
    np.savetxt(path, np.asarray(arr), fmt=FMT, delimiter=",")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def _resolved(params: ModelParams, spec=None, grid: GridSpec | None = None) -> dict:
    out = {
        "model": {"k_i": params.k_i, "beta": params.beta, "gamma": params.gamma},
        "burst": {"kind": params.burst.kind, "b": params.burst.b, "a": params.burst.a},
    }
    if spec is not None:
        out["expansion"] = {
            "n_t": spec.n_t,
            "n_l": spec.n_l,
            "alpha": spec.alpha,
            "method": spec.method,
        }
    if grid is not None:
        out["grid"] = {
            "n": grid.n,
            "m": grid.m,
            "t": grid.t,
            "initial": list(grid.initial),
            "boundary_tol": grid.boundary_tol,
        }
    return out


def cmd_solve(args) -> int:
    cfg = _load_config(args.config)
    params = _model_from(cfg)
    grid = _grid_from(cfg, args)
    want = args.method or _section(cfg, "expansion").get("method", "expansion")
    methods = ["expansion", "quadrature"] if want == "both" else [want]
    outdir = _outdir(args)
    threads = _threads()

    runs = {}
    dists = {}
    for method in methods:
        spec = _spec_from(cfg, args, params.burst, method=method)
        start = time.perf_counter()
        sol = solve_joint(params, grid, spec, threads=threads)
        seconds = time.perf_counter() - start
        name = f"solve_{method}.csv"
        _write_matrix(outdir / name, sol.p)
        dists[method] = sol.p
        runs[method] = {
            "csv": name,
            "seconds": seconds,
            "mass_deficit": sol.mass_deficit,
            "negative_mass": sol.negative_mass,
            "max_imag": sol.max_imag,
            "boundary_mass": float(sol.p[-1, :].sum() + sol.p[:, -1].sum()),
            "expansion": _resolved(params, spec=spec)["expansion"],
        }

    meta = {"command": "solve", "config": _resolved(params, grid=grid), "runs": runs}
    if len(methods) == 2:
        compare = {
            "ks_error": ks_error(dists["expansion"], dists["quadrature"]),
            "seconds": {m: runs[m]["seconds"] for m in methods},
        }
        _write_json(outdir / "solve_compare.json", compare)
        meta["compare"] = compare
    _write_json(outdir / "solve_meta.json", meta)
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    params = _model_from(cfg)
    sec = _section(cfg, "simulate")
    seed = args.seed if args.seed is not None else int(_need(sec, "simulate", "seed"))
    try:
        config = SsaConfig(
            params,
            t_final=float(_need(sec, "simulate", "t_final")),
            n_cells=int(_need(sec, "simulate", "n_cells")),
            seed=int(seed),
            record=str(sec.get("record", "endpoint")),
            event_cap=int(sec.get("event_cap", 10_000_000)),
        )
    except (ValueError, TypeError) as e:
        raise ConfigError(f"[simulate] {e}") from e
    samples = simulate(config)
    outdir = _outdir(args)

    np.savetxt(
        outdir / "simulate_counts.csv",
        samples.counts,
        fmt="%d",
        delimiter=",",
        header="n,m",
        comments="",
    )
    files = {"counts": "simulate_counts.csv"}
    if samples.trajectories is not None:
        rows = np.vstack(
            [
                np.column_stack([np.full(len(tr), cell, dtype=float), tr])
                for cell, tr in enumerate(samples.trajectories)
            ]
        )
        np.savetxt(
            outdir / "simulate_trajectories.csv",
            rows,
            fmt=["%d", FMT, "%d", "%d"],
            delimiter=",",
            header="cell,t,n,m",
            comments="",
        )
        files["trajectories"] = "simulate_trajectories.csv"

    meta = {
        "command": "simulate",
        "config": _resolved(params),
        "simulate": {
            "t_final": config.t_final,
            "n_cells": config.n_cells,
            "seed": config.seed,
            "record": config.record,
            "event_cap": config.event_cap,
        },
        "files": files,
    }
    _write_json(outdir / "simulate_meta.json", meta)
    return 0


def _load_data(path: str) -> np.ndarray:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"data file not found: {p}")
    with open(p) as fh:
        first = fh.readline()
    try:
        [float(tok) for tok in first.strip().split(",")]
        skip = 0
    except ValueError:
        skip = 1
    try:
        return np.loadtxt(p, delimiter=",", skiprows=skip, ndmin=2)
    except ValueError as e:
        raise ConfigError(f"{p}: {e}") from e


def _histogram(arr: np.ndarray, shape=None, wrap=None) -> np.ndarray:
    """Counts (two columns) or an already-binned PMF matrix -> PMF.

    ``wrap`` bins counts modulo the grid: the matching model is then
    the exact law of the wrapped copy numbers (the inversion grid
    aliases periodically), so no mass is lost on heavy tails.
    ``shape`` keeps a plain box instead; samples outside are dropped
    and show up as the sweep's out-of-grid mass.
    """
    two_col = arr.ndim == 2 and arr.shape[1] == 2 and arr.max() > 1.0
    if two_col and not np.array_equal(arr, np.round(arr)):
        raise ConfigError("count data must be integers")
    if not two_col:
        if wrap is not None or shape is not None:
            raise ConfigError("wrap/shape apply to count data, not a PMF matrix")
        return arr
    ns, ms = arr[:, 0].astype(int), arr[:, 1].astype(int)
    if (ns < 0).any() or (ms < 0).any():
        raise ConfigError("counts must be non-negative")
    if wrap is not None:
        n, m = (int(x) for x in wrap)
        ns, ms = ns % n, ms % m
    elif shape is not None:
        n, m = (int(x) for x in shape)
    else:
        n, m = int(ns.max()) + 1, int(ms.max()) + 1
    inside = (ns < n) & (ms < m)
    hist = np.bincount(ns[inside] * m + ms[inside], minlength=n * m).astype(float)
    return hist.reshape(n, m) / len(ns)


def _param_grid_from(cfg: dict) -> ParamGrid:
    model = _section(cfg, "model")
    burst = _section(cfg, "burst")
    sec = _section(cfg, "sweep")
    beta = float(_need(model, "model", "beta"))
    gamma = float(_need(model, "model", "gamma"))
    kind = str(burst.get("kind", "geometric"))
    a = int(burst.get("a", 0))
    try:
        if "k_axis" in sec or "b_axis" in sec:
            return ParamGrid(
                tuple(float(x) for x in _need(sec, "sweep", "k_axis")),
                tuple(float(x) for x in _need(sec, "sweep", "b_axis")),
                beta=beta,
                gamma=gamma,
                kind=kind,
                a=a,
            )
        k_range = [float(x) for x in _need(sec, "sweep", "k_range")]
        b_range = [float(x) for x in _need(sec, "sweep", "b_range")]
        nk, nb = (int(x) for x in sec.get("points", (10, 10)))
        return ParamGrid.log_spaced(
            (k_range[0], k_range[1]),
            (b_range[0], b_range[1]),
            (nk, nb),
            beta=beta,
            gamma=gamma,
            kind=kind,
        )
    except (ValueError, TypeError) as e:
        raise ConfigError(f"[sweep] {e}") from e


def _orders_sweep(args, cfg: dict, outdir: Path) -> int:
    """KS error and runtime of every (N_L, N_T) in {1..7}^2 against the
    quadrature distribution at the configured parameters."""
    params = _model_from(cfg)
    grid = _grid_from(cfg, args)
    threads = _threads()
    spec_q = _spec_from(cfg, args, params.burst, method="quadrature")
    start = time.perf_counter()
    ref = solve_joint(params, grid, spec_q, threads=threads)
    ref_seconds = time.perf_counter() - start

    rows = []
    for n_l in range(1, 8):
        for n_t in range(1, 8):
            spec = expansion_spec_for(params.burst, n_t, n_l)
            start = time.perf_counter()
            sol = solve_joint(params, grid, spec, threads=threads)
            seconds = time.perf_counter() - start
            rows.append((n_l, n_t, ks_error(sol.p, ref.p), seconds))
    out = np.array(rows)
    np.savetxt(
        outdir / "sweep_orders.csv",
        out,
        fmt=["%d", "%d", FMT, FMT],
        delimiter=",",
        header="n_l,n_t,ks_error,seconds",
        comments="",
    )
    meta = {
        "command": "sweep",
        "mode": "orders-sweep",
        "config": _resolved(params, spec=spec_q, grid=grid),
        "quadrature_seconds": ref_seconds,
        "records": len(rows),
        "files": {"orders": "sweep_orders.csv"},
    }
    _write_json(outdir / "sweep_meta.json", meta)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    outdir = _outdir(args)
    if args.orders_sweep:
        return _orders_sweep(args, cfg, outdir)

    if args.data is None:
        raise ConfigError("sweep requires --data (or --orders-sweep)")
    sec = _section(cfg, "sweep")
    data = _histogram(_load_data(args.data), shape=sec.get("shape"), wrap=sec.get("wrap"))
    pgrid = _param_grid_from(cfg)
    spec = _spec_from(cfg, args, pgrid.dist(pgrid.b_axis[0]))
    metric = str(sec.get("metric", "kl"))
    if metric not in METRICS:
        raise ConfigError(f"[sweep] metric must be one of {METRICS}, got {metric!r}")
    t = float(sec["t"]) if sec.get("t") is not None else None

    land = sweep(data, pgrid, spec, metric=metric, t=t, threads=_threads())
    _write_matrix(outdir / "sweep_landscape.csv", land.values)
    ib, ik = land.argmin()
    p50, p90, p99 = np.percentile(land.cell_seconds, [50, 90, 99])
    meta = {
        "command": "sweep",
        "mode": "landscape",
        "data": {"path": args.data, "shape": list(data.shape), "out_of_grid": land.out_of_grid},
        "k_axis": list(land.k_axis),
        "b_axis": list(land.b_axis),
        "metric": land.metric,
        "method": land.method,
        "orders": {"n_t": spec.n_t, "n_l": spec.n_l},
        "t": t,
        "argmin": {"ib": ib, "ik": ik, "k_i": land.k_axis[ik], "b": land.b_axis[ib]},
        "cell_seconds": {
            "p50": float(p50),
            "p90": float(p90),
            "p99": float(p99),
            "total": float(land.cell_seconds.sum()),
        },
        "flagged_cells": int(land.flags.sum()),
        "files": {"landscape": "sweep_landscape.csv"},
    }
    _write_json(outdir / "sweep_meta.json", meta)
    return 0


def cmd_bench_expint(args) -> int:
    """Error and speed of expint_e1 across its dispatch regions.

    scipy.special.exp1 serves as the independent reference; relative
    error is measured where the reference is nonzero.
    """
    cfg = _load_config(args.config) if args.config else {}
    sec = _section(cfg, "bench")
    points = 1000 if args.full else int(sec.get("points", 200))
    extent = float(sec.get("extent", 35.0))
    outdir = _outdir(args)

    axis = np.linspace(-extent, extent, points)
    xs, ys = np.meshgrid(axis, axis, indexing="ij")
    zs = (xs + 1j * ys).ravel()
    zs = zs[zs != 0]

    regions = np.array([e1_region(complex(z)).value for z in zs])
    if args.region is not None:
        keep = regions == args.region
        if not keep.any():
            raise ConfigError(f"no grid points fall in region {args.region!r}")
        zs, regions = zs[keep], regions[keep]

    ours = np.array([expint_e1(complex(z)) for z in zs])
    ref = exp1(zs)
    rel = np.abs(ours - ref) / np.maximum(np.abs(ref), np.finfo(float).tiny)

    per_region = {}
    for name in sorted(set(regions)):
        sel = np.flatnonzero(regions == name)
        sample = sel[:: max(1, len(sel) // 2000)]
        pts = [complex(zs[i]) for i in sample]
        start = time.perf_counter()
        for z in pts:
            expint_e1(z)
        ns = 1e9 * (time.perf_counter() - start) / len(pts)
        per_region[name] = {
            "count": int(len(sel)),
            "ns_per_eval": ns,
            "max_rel_error": float(rel[sel].max()),
        }
    fastest = min(r["ns_per_eval"] for r in per_region.values())
    for rec in per_region.values():
        rec["speed_ratio"] = rec["ns_per_eval"] / fastest

    with open(outdir / "bench_expint.csv", "w") as fh:
        fh.write("x,y,region,rel_error\n")
        for z, name, err in zip(zs, regions, rel):
            fh.write(f"{z.real:.17g},{z.imag:.17g},{name},{err:.17g}\n")
    meta = {
        "command": "bench-expint",
        "points_per_axis": points,
        "extent": extent,
        "region_filter": args.region,
        "reference": "scipy.special.exp1",
        "max_rel_error": float(rel.max()),
        "regions": per_region,
        "files": {"grid": "bench_expint.csv"},
    }
    _write_json(outdir / "bench_meta.json", meta)
    return 0


def _parse_orders(text: str) -> tuple[int, int]:
    try:
        n_l, n_t = (int(x) for x in text.split(","))
        return n_l, n_t
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected NL,NT integers, got {text!r}") from e


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n, m = (int(x) for x in text.lower().split("x"))
        return n, m
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected NxM integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bursty",
        description="Joint nascent/mature mRNA distributions for bursty transcription.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="invert the generating function to P(n, m)")
    solve.add_argument("--config", required=True, help="TOML configuration file")
    solve.add_argument("--out", default=".", help="output directory")
    solve.add_argument("--method", choices=["expansion", "quadrature", "both"])
    solve.add_argument("--orders", type=_parse_orders, metavar="NL,NT")
    solve.add_argument("--grid", type=_parse_grid, metavar="NxM")
    solve.set_defaults(func=cmd_solve)

    sim = sub.add_parser("simulate", help="Gillespie simulation of the bursty chain")
    sim.add_argument("--config", required=True, help="TOML configuration file")
    sim.add_argument("--out", default=".", help="output directory")
    sim.add_argument("--seed", type=int, help="override [simulate] seed")
    sim.set_defaults(func=cmd_simulate)

    swp = sub.add_parser("sweep", help="divergence landscape over a parameter grid")
    swp.add_argument("--config", required=True, help="TOML configuration file")
    swp.add_argument("--out", default=".", help="output directory")
    swp.add_argument("--data", help="counts or PMF CSV to fit against")
    swp.add_argument("--method", choices=["expansion", "quadrature"])
    swp.add_argument("--orders", type=_parse_orders, metavar="NL,NT")
    swp.add_argument("--grid", type=_parse_grid, metavar="NxM")
    swp.add_argument(
        "--orders-sweep",
        action="store_true",
        help="KS error and runtime for every (N_L, N_T) in {1..7}^2",
    )
    swp.set_defaults(func=cmd_sweep)

    bench = sub.add_parser("bench-expint", help="accuracy and speed of expint_e1")
    bench.add_argument("--config", help="TOML configuration file (optional)")
    bench.add_argument("--out", default=".", help="output directory")
    bench.add_argument("--full", action="store_true", help="1000x1000 grid")
    bench.add_argument("--region", choices=[r.value for r in E1Region])
    bench.set_defaults(func=cmd_bench_expint)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        _report_failure(args, e)
        return 2
    except NumericalError as e:
        _report_failure(args, e)
        return 3


def _report_failure(args, exc: Exception) -> None:
    payload = {
        "error": {
            "type": type(exc).__name__,
            "module": type(exc).__module__,
            "operation": getattr(args, "command", None),
            "message": str(exc),
        }
    }
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
