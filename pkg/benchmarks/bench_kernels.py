"""Compare the compiled and the numpy kernels on representative workloads.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--grid 1500] [--n 8]

Both backends are imported directly, so the environment variable that forces
the fallback has no effect here.  Every workload is also checked for
identical output.
"""
import argparse
import statistics
import time

import numpy as np

from lambdadicke import _kernels_py
from lambdadicke.ed_oracle import EDConfig, enumerate_basis
from lambdadicke.meanfield import frame
from lambdadicke.model import ModelParams

try:
    from lambdadicke import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _time(fn, repeat):
    out = None
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b), equal_nan=True)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--grid", type=int, default=1500, help="points per axis of the surface grid")
    ap.add_argument("--n", type=int, default=8, help="particle number for the ED assembly")
    args = ap.parse_args(argv)

    params = ModelParams(delta=0.75, Delta=1.0, omega1=1.0, omega2=0.25, g1=1.0, g2=0.2)
    f = frame(params, 1)
    xs = np.linspace(-1.0, 1.0, args.grid)
    cfg = EDConfig(args.n, params)
    basis = enumerate_basis(cfg)
    c = 1.0 / np.sqrt(args.n)
    workloads = {
        f"reduced_surface {args.grid}x{args.grid}":
            lambda k: k.reduced_surface(xs, xs, *f.args),
        f"reduced_surface_argmin {args.grid}x{args.grid}":
            lambda k: k.reduced_surface_argmin(xs, xs, *f.args),
        f"ed_coupling_triplets N={args.n} dim={cfg.dim}":
            lambda k: k.ed_coupling_triplets(basis.atoms, basis.lookup, basis.cutoff1,
                                             basis.cutoff2, params.g1 * c, params.g2 * c),
    }

    print(f"{'workload':48s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}  equal")
    for name, work in workloads.items():
        tp, outp = _time(lambda: work(_kernels_py), args.repeat)
        if _kernels_c is None:
            print(f"{name:48s} {1e3 * tp:12.2f} {'n/a':>12s} {'n/a':>8s}  n/a")
            continue
        tc, outc = _time(lambda: work(_kernels_c), args.repeat)
        print(f"{name:48s} {1e3 * tp:12.2f} {1e3 * tc:12.2f} {tp / tc:8.1f}  {_same(outp, outc)}")


if __name__ == "__main__":
    main()
