"""Seminorms attached to apartment points, and telling boundary points apart.

    python3 demos/theta_separation.py
"""

from wonderbt.rootsys import build_root_system
from wonderbt.theta import BigCellPoly, base_point, compactified, gauss_norm, separating_form, theta_eval


def main():
    rs = build_root_system("A2")
    f = BigCellPoly(rs, (({(-1, 0): 1}, 1), ({(-1, -1): 1, (0, 1): 1}, "1/2")))
    x = base_point(2)
    print("Gauss norm", gauss_norm(f), "value at the base point", theta_eval(f, x, x))

    for y in [compactified(2, (), {0: -2, 1: 1}), compactified(2, {0}, {1: 1}), compactified(2, {0, 1}, {})]:
        print("tau", sorted(y.tau), "coords", y.exp_map, "->", theta_eval(f, x, y))

    y1, y2 = compactified(2, {0}, {1: 1}), compactified(2, {0}, {1: 3})
    sep = separating_form(y1, y2, rs)
    print("separator", sep.to_json())


if __name__ == "__main__":
    main()
