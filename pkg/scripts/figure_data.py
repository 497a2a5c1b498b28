"""Write the CSV datasets behind the figures: |x| corner, exp and its tangent,
exp and ln reflected across y = x, and the unit circle with its direction vector.

    python3 scripts/figure_data.py --out figure_data
"""

import argparse
import math
from pathlib import Path

from tangent_rule import expr as ex
from tangent_rule.cli import plot_csv, plot_rows
from tangent_rule.parser import parse


def write(path: Path, text: str) -> None:
    path.write_text(text + "\n")
    print(f"wrote {path}")


def exp_ln_rows(n: int):
    """x, e^x, ln x and the mirror line y = x; ln is blank for x <= 0."""
    f, g = parse("exp(x)"), parse("ln(x)")
    for i in range(n):
        x = -3 + 6 * i / (n - 1)
        yield x, ex.eval_float(f, x), ex.try_eval(g, x), x


def circle_rows(n: int):
    """Point (cos t, sin t) and the rotated radius (-sin t, cos t)."""
    for i in range(n):
        t = 2 * math.pi * i / n
        yield t, math.cos(t), math.sin(t), -math.sin(t), math.cos(t)


def table(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("" if v is None else repr(v) for v in row))
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("figure_data"))
    ap.add_argument("-n", type=int, default=201)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    n = args.n

    write(args.out / "abs_corner.csv", plot_csv(plot_rows(parse("abs(x)"), -2, 2, n, at=0.0)))
    write(args.out / "exp.csv", plot_csv(plot_rows(parse("exp(x)"), -3, 2, n, at=0.0)))
    write(args.out / "exp_tangent_at_1.csv", plot_csv(plot_rows(parse("exp(x)"), -1, 2, n, at=1.0)))
    write(args.out / "exp_ln_mirror.csv", table(["x", "exp", "ln", "mirror"], exp_ln_rows(n)))
    write(args.out / "unit_circle.csv", table(["t", "cos", "sin", "dir_x", "dir_y"], circle_rows(n)))


if __name__ == "__main__":
    main()
