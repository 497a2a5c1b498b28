"""Pick the random compositions of the built-in corpus.

Prints a Python tuple literal to paste into ``corpus.COMPOSITIONS``.  The
selection is deterministic for a given seed.
"""

import argparse
import random

from tangent_rule import expr as ex
from tangent_rule.corpus import BASE_FUNCTIONS, random_expr
from tangent_rule.parser import parse
from tangent_rule.poly import is_polynomial
from tangent_rule.rules import derivative
from tangent_rule.verify import in_domain_points, oracle_self_consistent


def acceptable(e, seen):
    text = str(e)
    if text in seen or text in BASE_FUNCTIONS or len(text) > 48 or not ex.has_var(e) or is_polynomial(e):
        return False
    if ex.depth(e) > 4 or parse(text) != e:
        return False
    if not any(isinstance(n, (ex.Unary, ex.LogBase)) for n in ex.walk(e)):
        return False
    points = in_domain_points(e, derivative(e), 20)
    # the difference oracle must resolve the function at every sample point
    return len(points) == 20 and all(oracle_self_consistent(e, a) for a in points)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    ap.add_argument("--count", type=int, default=25)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    picked, seen = [], set()
    while len(picked) < args.count:
        e = random_expr(rng, max_depth=4, unary_weight=2.0)
        if acceptable(e, seen):
            seen.add(str(e))
            picked.append(str(e))
    print("COMPOSITIONS = (")
    for t in picked:
        print(f"    {t!r},")
    print(")")


if __name__ == "__main__":
    main()
