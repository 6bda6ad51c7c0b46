#!/usr/bin/env python3
"""Hand-encoded (p, delta) region panels, written out as CSV goldens.

Each panel is two boundary lines delta = a*p + b with a drawing style and an
endpoint marker at p = 1:

  style "weak"     solid line: weak and restricted weak type hold on it (p > 1)
  style "rwt"      dash-dot line: only restricted weak type holds on it
  style "excluded" dashed line: nothing holds on it
  filled           endpoint at p = 1 belongs to the weak (1,1) segment

Between the lines strong type holds for p > 1; at p = 1 only weak and
restricted weak type hold. Arithmetic is exact (fractions), so cells on a line
are decided without tolerance.

Usage: python3 gen_panels.py [output_dir]
"""

import sys
from fractions import Fraction as F
from pathlib import Path

P_GRID = (F(1), F(3), F(1, 4))
DELTA_GRID = (F(-5), F(8), F(1, 8))


def line(a, b):
    return (F(a), F(b))


def panel(theorem, nu, left, left_style, left_filled, right, right_style, right_filled):
    return dict(
        theorem=theorem,
        nu=F(nu),
        left=left,
        left_style=left_style,
        left_filled=left_filled,
        right=right,
        right_style=right_style,
        right_filled=right_filled,
    )


def panels():
    out = []
    # Heat maximal operators.
    nu = F(1, 2)
    out.append(panel("MaxWcls", nu, line(0, -1), "excluded", False, line(2 * nu + 2, -1), "rwt", True))
    for nu in (F(-1, 2), F(1, 2)):
        out.append(panel("MaxWexo", nu, line(2 * nu, -1), "weak", True, line(2, -1), "rwt", True))
    # Riesz transforms below nu = 1/2 and their adjoints.
    for nu in (F(-3, 4), F(-1, 2), F(-1, 4), F(1, 4)):
        half = nu == F(-1, 2)
        out.append(
            panel(
                "Rexo",
                nu,
                line(2 * nu + 1, -1),
                "excluded" if half else "rwt",
                not half,
                line(2, -1),
                "rwt",
                True,
            )
        )
        out.append(panel("RexoStar", nu, line(2 * nu, -1), "rwt", True, line(1, -1), "rwt", True))
    # Riesz transforms with compensated potentials.
    for nu in (F(1, 2), F(3, 4)):
        half = nu == F(1, 2)
        style = "excluded" if half else "rwt"
        out.append(panel("Rexob", nu, line(2 * nu - 1, -1), style, not half, line(2, -1), style, not half))
        out.append(panel("RexobStar", nu, line(2 * nu, -1), style, not half, line(3, -1), "rwt", True))
    return out


def frange(start, stop, step):
    v = start
    while v <= stop:
        yield v
        v += step


def cell(pn, p, d):
    a, b = pn["left"]
    lo = a * p + b
    a, b = pn["right"]
    hi = a * p + b
    if lo < d < hi:
        return (0, 1, 1) if p == 1 else (1, 1, 1)
    for edge, style, filled in ((lo, pn["left_style"], pn["left_filled"]), (hi, pn["right_style"], pn["right_filled"])):
        if d == edge:
            if p == 1:
                return (0, int(filled), int(filled))
            return (0, int(style == "weak"), int(style in ("weak", "rwt")))
    return (0, 0, 0)


def fmt(v):
    return "%.15g" % float(v)


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
    for pn in panels():
        rows = ["p,delta,strong,weak,rwt"]
        for p in frange(*P_GRID):
            for d in frange(*DELTA_GRID):
                s, w, r = cell(pn, p, d)
                rows.append(f"{fmt(p)},{fmt(d)},{s},{w},{r}")
        name = f"{pn['theorem']}_nu{fmt(pn['nu'])}.csv"
        (out_dir / name).write_text("\n".join(rows) + "\n")
        print(name)


if __name__ == "__main__":
    main()
