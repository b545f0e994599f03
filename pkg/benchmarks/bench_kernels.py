"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--zeros 1000]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from riemann_lab import _pykernels as py
from riemann_lab.zeros import load_zeros

try:
    from riemann_lab import _kernels as cy
except ImportError:
    cy = None


def cases(n_zeros: int):
    zs = load_zeros(limit=n_zeros)
    a, alpha = np.asarray(zs.a), np.asarray(zs.alpha)
    x = np.linspace(2.0, 5000.0, 400)
    h = 0.01
    f = (h * np.arange(20001)) ** 2 - 101.0
    return {
        "term_sum": lambda k: k.term_sum(x, a, alpha),
        "li_rho_sum": lambda k: k.li_rho_sum(x[:50], a, alpha),
        "riemann_principal": lambda k: k.riemann_principal(x),
        "si_array": lambda k: k.si_array(x),
        "numerov": lambda k: k.numerov(f, h),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--zeros", type=int, default=1000)
    args = ap.parse_args(argv)
    print(f"{'kernel':<20}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, fn in cases(args.zeros).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<20}{t_py:>14.2f}{'n/a':>14}{'':>10}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{t_py:>14.2f}{t_cy:>14.2f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
