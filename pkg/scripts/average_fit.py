"""Envelope fit of the averaged lattice-point error for spheres in Z^n.

    python scripts/average_fit.py 4 500
    python scripts/average_fit.py 5 300 --windows
"""

import argparse
import math

from weyl_lab.envelope import envelope_fit
from weyl_lab.shells import average_error_points


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int)
    ap.add_argument("r_max", type=int)
    ap.add_argument("--windows", action="store_true", help="also print the per-window suprema")
    args = ap.parse_args()

    fit = envelope_fit(average_error_points(args.n, args.r_max))
    print(f"n={args.n} R<={args.r_max}: slope {fit.slope:.4f} (reference n-2 = {args.n - 2}), "
          f"residual {fit.residual:.4f}")
    if args.windows:
        for j, v in fit.windows:
            print(f"  [2^{j}, 2^{j + 1}): log sup {v:.4f}  (sup {math.exp(v):.4g})")


if __name__ == "__main__":
    main()
