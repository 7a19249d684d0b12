"""Time the numba and pure-numpy kernels side by side on the same inputs.

    python benchmarks/compare_backends.py [--reps 5] [--l 2]

Prints one CSV row per (kernel, n, backend) with the median seconds and
checks that both backends return the same (value, d, index).
"""
import argparse
import statistics
import sys
import time

import numpy as np

from relaycap import kernels
from relaycap.core import Network, build_snr_profile
from relaycap.kernels import _numpy

try:
    from relaycap.kernels import _numba
except ImportError:  # numba not installed
    _numba = None


def median_time(fn, reps):
    fn()
    ts = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def profile(rng, n, l):
    return build_snr_profile(Network(1.0, rng.rayleigh(1.0, n), rng.rayleigh(1.0, (l, n))))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--l", type=int, default=2)
    ap.add_argument("--exhaustive-n", default="12,16,20")
    ap.add_argument("--prefix-n", default="10000,100000,1000000")
    args = ap.parse_args(argv)
    if _numba is None:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1
    impls = {"numba": _numba, "numpy": _numpy}
    rng = np.random.default_rng(0)
    print("kernel,n,l,backend,median_seconds,speedup_vs_numpy")
    mismatch = False

    for n in (int(x) for x in args.exhaustive_n.split(",")):
        p = profile(rng, n, args.l)
        tabs = (kernels.split_tables(p.snr_relay), kernels.split_tables(p.sqrt_dest),
                kernels.split_tables(np.zeros(n)))
        results, times = {}, {}
        for name, impl in impls.items():
            def run(impl=impl):
                return kernels.exhaustive_min(*tabs, bc_scale=1.0, square_mac=True, impl=impl)
            results[name] = run()
            times[name] = median_time(run, args.reps)
        mismatch |= results["numba"] != results["numpy"]
        for name in impls:
            print(f"exhaustive_min,{n},{args.l},{name},{times[name]:.6g},"
                  f"{times['numpy'] / times[name]:.2f}")

    for n in (int(x) for x in args.prefix_n.split(",")):
        p = profile(rng, n, args.l)
        results, times = {}, {}
        for name, impl in impls.items():
            def run(impl=impl):
                return impl.prefix_min(p.suffix_src, p.prefix_dest, 1.0 / n)
            results[name] = tuple(float(x) for x in run())
            times[name] = median_time(run, args.reps)
        mismatch |= results["numba"] != results["numpy"]
        for name in impls:
            print(f"prefix_min,{n},{args.l},{name},{times[name]:.6g},"
                  f"{times['numpy'] / times[name]:.2f}")

    if mismatch:
        print("backends disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
