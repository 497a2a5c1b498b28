"""Print the R(h)/h table for f at a, with the symbolic slope or a chosen one.

    python3 scripts/remainder_table.py "exp(x)" 0.3
    python3 scripts/remainder_table.py "exp(x)" 0.3 --slope 1
"""

import argparse

from tangent_rule import expr as ex
from tangent_rule.analysis import halving_steps, remainder_profile
from tangent_rule.parser import parse
from tangent_rule.rules import derivative


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("expr")
    ap.add_argument("point", type=float)
    ap.add_argument("--slope", type=float)
    ap.add_argument("--start", type=float, default=1e-1)
    ap.add_argument("--stop", type=float, default=1e-5)
    args = ap.parse_args()
    e = parse(args.expr)
    k = ex.eval_float(derivative(e), args.point) if args.slope is None else args.slope
    prof = remainder_profile(e, args.point, k, halving_steps(args.start, args.stop))
    print(prof.to_csv(), end="")
    print("# successive ratios:", " ".join(f"{q:.4f}" for q in prof.ratios()))


if __name__ == "__main__":
    main()
