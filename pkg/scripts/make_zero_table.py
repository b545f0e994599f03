"""Regenerate the bundled zero table with mpmath (slow, run once).

Usage: python scripts/make_zero_table.py 2000 src/riemann_lab/data/zeros.txt
"""
import sys
from multiprocessing import Pool

import mpmath


def _height(n):
    mpmath.mp.dps = 20
    return mpmath.nstr(mpmath.zetazero(n).imag, 15, strip_zeros=False)


def main(count, path):
    with Pool() as pool:
        heights = pool.map(_height, range(1, count + 1), chunksize=20)
    with open(path, "w") as fh:
        fh.write(f"# imaginary parts of the first {count} nontrivial zeta zeros (mpmath.zetazero)\n")
        for h in heights:
            fh.write(h + "\n")


if __name__ == "__main__":
    main(int(sys.argv[1]), sys.argv[2])
