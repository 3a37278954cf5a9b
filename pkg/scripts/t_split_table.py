"""Tabulate the exact three-term split of the SO(4) count at powers of ten."""

import argparse

import mpmath

from weyl_lab.lowrank import t_split


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exp", type=int, default=5)
    ap.add_argument("--digits", type=int, default=40)
    args = ap.parse_args()
    print("lambda,N,T3/R^4,defect")
    for e in range(2, args.max_exp + 1):
        s = t_split(10**e, digits=args.digits)
        print(f"{10**e},{s.N},{mpmath.nstr(s.t3_over_r4, 8)},{mpmath.nstr(s.defect, 3)}")


if __name__ == "__main__":
    main()
