"""Command-line driver: ``obliquebie <mode> --config <path> [--preset ...]``.

Modes
-----
verify     far fields of the point-source scene against the exact ones, per n
converge   L2 far-field errors per n
scatter    far-field patterns for the plane-wave problem over M directions
nearfield  |e| and |h| on the square grid for the plane-wave problem

Exit codes: 0 success, 2 configuration error, 3 numerical or physical infeasibility.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from . import config as cfgmod
from .errors import (ConfigError, DomainError, GeometryError, InfeasibleAngleError,
                     IrregularWavenumberError, ParameterError, PlacementError)
from .fields import computed_farfield, exact_farfield, farfield_error_l2, near_field
from .geometry import REGION_NAMES
from .system import assemble_K, derive_params, rhs_incident, rhs_manufactured, solve

MODES = ("verify", "converge", "scatter", "nearfield")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def fmt(x):
    """12 significant digits; ``nan`` for masked values."""
    x = float(x)
    if np.isnan(x):
        return "nan"
    return f"{x + 0.0:.11e}"


def solve_scene(scene, n, kind, sources=None, tangential="hilbert"):
    """Assemble and solve at ``n`` nodes per curve half-count.

    ``kind`` is ``"manufactured"`` (needs ``sources``) or ``"incident"``.
    """
    scene = scene.with_n(n)
    params = derive_params(scene)
    grids = scene.grids()
    system = assemble_K(params, grids, scene.impedance, tangential=tangential)
    if kind == "manufactured":
        sources.check(scene.outer, scene.inner)
        rhs = rhs_manufactured(params, grids, scene.impedance, sources)
    else:
        rhs = rhs_incident(params, grids, scene.phi_inc)
    return params, grids, solve(system.with_rhs(rhs), params)


def sample_directions(m):
    return 2.0 * np.pi * np.arange(m) / m


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) if isinstance(v, (int, np.integer)) else fmt(v) for v in row))
            fh.write("\n")


def _require_sources(cfg, mode):
    if cfg.sources is None:
        raise ConfigError(f"{mode} mode needs [scene] sources (z1..z4) for the exact reference")


def manufactured_errors(cfg, n):
    params, grids, dens = solve_scene(cfg.scene, n, "manufactured", cfg.sources, cfg.tangential)
    t_all = sample_directions(cfg.directions)
    ff = computed_farfield(params, grids, dens, t_all)
    err_e = farfield_error_l2(ff.e, exact_farfield(params, cfg.sources.z1, t_all))
    err_h = farfield_error_l2(ff.h, exact_farfield(params, cfg.sources.z2, t_all))
    return params, grids, dens, err_e, err_h


def run_verify(cfg, out):
    _require_sources(cfg, "verify")
    rows, lines = [], []
    params = None
    for n in cfg.n_list:
        params, grids, dens, err_e, err_h = manufactured_errors(cfg, n)
        ff = computed_farfield(params, grids, dens, cfg.direction)
        e, h = ff.e[0], ff.h[0]
        ex_e = exact_farfield(params, cfg.sources.z1, cfg.direction)[0]
        ex_h = exact_farfield(params, cfg.sources.z2, cfg.direction)[0]
        rows.append([n, e.real, e.imag, h.real, h.imag, ex_e.real, ex_e.imag, ex_h.real,
                     ex_h.imag, abs(e - ex_e), abs(h - ex_h), err_e, err_h])
        lines.append(f"{n:>4}  {e.real:.12f} {e.imag:+.12f}i  {h.real:.12f} {h.imag:+.12f}i"
                     f"  L2 {err_e:.2e} {err_h:.2e}")
    lines.append(f"exact {ex_e.real:.12f} {ex_e.imag:+.12f}i  {ex_h.real:.12f} {ex_h.imag:+.12f}i")
    path = os.path.join(out, f"{cfg.prefix}_verify.csv")
    _write_csv(path, ["n", "re_e", "im_e", "re_h", "im_h", "re_e_exact", "im_e_exact",
                      "re_h_exact", "im_h_exact", "abs_diff_e", "abs_diff_h", "l2_e", "l2_h"], rows)
    print(f"far field at t = {cfg.direction:.6f}")
    print("\n".join(lines))
    return params, [path]


def run_converge(cfg, out):
    _require_sources(cfg, "converge")
    rows, params = [], None
    for n in cfg.n_list:
        params, _, _, err_e, err_h = manufactured_errors(cfg, n)
        rows.append([n, err_e, err_h])
        print(f"{n:>4}  e {err_e:.3e}  h {err_h:.3e}")
    path = os.path.join(out, f"{cfg.prefix}_converge.csv")
    _write_csv(path, ["n", "l2_error_e", "l2_error_h"], rows)
    return params, [path]


def run_scatter(cfg, out):
    n = cfg.n_list[-1]
    params, grids, dens = solve_scene(cfg.scene, n, "incident", tangential=cfg.tangential)
    t = sample_directions(cfg.directions)
    ff = computed_farfield(params, grids, dens, t)
    rows = [[ti, e.real, e.imag, h.real, h.imag] for ti, e, h in zip(t, ff.e, ff.h)]
    path = os.path.join(out, f"{cfg.prefix}_farfield.csv")
    _write_csv(path, ["t", "re_e", "im_e", "re_h", "im_h"], rows)
    print(f"n = {n}: wrote {len(rows)} directions")
    return params, [path]


def _write_grid(path, values, grid, field_name, variant):
    legend = ", ".join(f"{k}={v}" for k, v in sorted(REGION_NAMES.items()))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# field = |{field_name}|\n")
        fh.write(f"# exterior = {variant}\n")
        fh.write(f"# c = {fmt(grid.c)}\n# m = {grid.m}\n# clearance = {fmt(grid.clearance)}\n")
        fh.write(f"# rows: y ascending, columns: x ascending, x_k = -c + k*2c/(2m-1)\n")
        fh.write(f"# masked cells (hole, near-boundary) = nan; region legend: {legend}\n")
        for row in np.abs(values):
            fh.write(",".join(fmt(v) for v in row) + "\n")


def run_nearfield(cfg, out):
    n = cfg.n_list[-1]
    params, grids, dens = solve_scene(cfg.scene, n, "incident", tangential=cfg.tangential)
    grid = near_field(params, grids, dens, cfg.grid_c, cfg.grid_m,
                      phi_inc=cfg.scene.phi_inc, clearance=cfg.clearance)
    paths = []
    for name, total, scat in (("e", grid.e_total, grid.e), ("h", grid.h_total, grid.h)):
        for variant, values in (("total", total), ("scattered", scat)):
            path = os.path.join(out, f"{cfg.prefix}_{name}_{variant}.csv")
            _write_grid(path, values, grid, name, variant)
            paths.append(path)
    region = os.path.join(out, f"{cfg.prefix}_region.csv")
    with open(region, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# region labels: " + ", ".join(f"{k}={v}" for k, v in sorted(REGION_NAMES.items())) + "\n")
        for row in grid.region:
            fh.write(",".join(str(int(v)) for v in row) + "\n")
    paths.append(region)
    print(f"n = {n}: {2 * grid.m}x{2 * grid.m} grid, {int(grid.mask.sum())} masked cells")
    return params, paths


RUNNERS = {"verify": run_verify, "converge": run_converge,
           "scatter": run_scatter, "nearfield": run_nearfield}


def write_manifest(cfg, mode, params, outputs, timings, out):
    manifest = {
        "version": __version__,
        "mode": mode,
        "config": cfg.echo(),
        "derived": {k: float(v) for k, v in params.as_dict().items()},
        "outputs": sorted(os.path.basename(p) for p in outputs),
        "timings": timings,
    }
    path = os.path.join(out, f"{cfg.prefix}_{mode}_manifest.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def build_parser():
    p = argparse.ArgumentParser(prog="obliquebie", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="INI run configuration")
    p.add_argument("--preset", choices=sorted(cfgmod.PRESETS), help="built-in scene")
    p.add_argument("--n", help="comma-separated node half-counts, e.g. 8,16,32,64")
    p.add_argument("--out", help="output directory")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = cfgmod.load(args.config, args.preset, args.n, args.out)
    except (ConfigError, GeometryError, PlacementError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    t1 = time.perf_counter()
    try:
        os.makedirs(cfg.out_dir, exist_ok=True)
        params, outputs = RUNNERS[args.mode](cfg, cfg.out_dir)
    except (ConfigError, GeometryError, PlacementError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleAngleError, IrregularWavenumberError, DomainError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ParameterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    t2 = time.perf_counter()
    timings = {"config_s": round(t1 - t0, 6), "run_s": round(t2 - t1, 6)}
    path = write_manifest(cfg, args.mode, params, outputs, timings, cfg.out_dir)
    print(f"manifest: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
