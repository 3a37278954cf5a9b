"""Fit the growth exponent of N(lambda) - smooth main term for one group.

    python scripts/weyl_error_fit.py SO8 2000
    python scripts/weyl_error_fit.py SO10 400 800 1600
"""

import argparse
import time

from weyl_lab.counting import error_series, fit_error_series
from weyl_lab.weights import group_params


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("group", help="SO<N>, N >= 2")
    ap.add_argument("lam_max", type=int, nargs="+", help="one or more cut-offs")
    ap.add_argument("--digits", type=int, default=30)
    ap.add_argument("--plain", action="store_true", help="use lambda windows instead of the shifted parameter")
    args = ap.parse_args()

    g = group_params(int(args.group.upper().removeprefix("SO")))
    print(f"# SO({g.N}): d = {g.d}, expected exponent d/2 - 1 = {g.d / 2 - 1}")
    print("lam_max,slope,residual,windows,seconds")
    for lm in args.lam_max:
        t0 = time.perf_counter()
        fit = fit_error_series(error_series(g, lm, digits=args.digits), shifted=not args.plain)
        print(f"{lm},{fit.slope:.4f},{fit.residual:.4f},{len(fit.windows)},{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
