"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_core.py [--repeat 5] [--json results.json]

Times ``bessel01`` on a vector of arguments spanning all three evaluation
regimes, ``layer_potentials`` at the size of one near-field grid pass, and a
full example-1 assembly plus solve at n = 64. Results are also checked for
agreement between the backends.
"""

import argparse
import json
import platform
import timeit

import numpy as np

from obliquebie import specfun
from obliquebie.cli import solve_scene
from obliquebie.config import build, preset_raw


def cases(rng):
    x = np.geomspace(1e-3, 150.0, 1_000_000)
    rng.shuffle(x)
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    nodes = 0.5 * np.c_[np.cos(t), np.sin(t)]
    normals = np.c_[np.cos(t), np.sin(t)]
    weights = np.full(t.size, np.pi / 128 * 0.5)
    targets = rng.uniform(-2.0, 2.0, (16_384, 2))
    targets = targets[np.hypot(*targets.T) > 0.6]
    a = np.exp(1j * t)
    b = np.cos(3 * t) + 0j
    example1 = build(preset_raw("example1"))
    return {
        "bessel01 (1e6 args)": (lambda: specfun.bessel01(x), x.size),
        "layer_potentials (%d x 256)" % len(targets): (
            lambda: specfun.layer_potentials(targets, nodes, normals, weights, 3.0, a, b),
            len(targets) * 256),
        "example1 solve n=64": (
            lambda: solve_scene(example1.scene, 64, "manufactured", example1.sources)[2].phi0e,
            None),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="write results to this file")
    args = parser.parse_args(argv)

    backends = specfun.available_backends()
    rng = np.random.default_rng(0)
    table = cases(rng)
    results = {"machine": platform.platform(), "python": platform.python_version(), "cases": {}}
    print(f"{'case':34s}" + "".join(f"{b:>14s}" for b in backends) + "   speedup   max rel diff")
    for name, (fn, count) in table.items():
        timings, outputs = {}, {}
        for backend in backends:
            previous = specfun.set_backend(backend)
            try:
                fn()  # warm-up
                timings[backend] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
                outputs[backend] = np.asarray(fn() if not isinstance(fn(), tuple) else fn()[0])
            finally:
                specfun.set_backend(previous)
        speedup = timings["python"] / timings["compiled"] if len(backends) == 2 else float("nan")
        diff = 0.0
        if len(backends) == 2:
            ref = outputs["python"]
            diff = float(np.max(np.abs(outputs["compiled"] - ref) / np.maximum(1.0, np.abs(ref))))
        cells = "".join(f"{timings[b] * 1e3:12.1f}ms" for b in backends)
        print(f"{name:34s}{cells}   {speedup:6.2f}x   {diff:.1e}")
        results["cases"][name] = {"seconds": timings, "speedup": speedup, "evaluations": count,
                                  "max_rel_diff": diff}
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
