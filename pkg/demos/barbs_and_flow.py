"""Walk through the lattice model over Q_p(sqrt p) for n = 3.

Looks for sigma-fixed vertices that are not points of the building over Q_p,
first at p = 2 and then at p = 3, and pushes one of them toward the boundary
with a cocharacter.

    python3 demos/barbs_and_flow.py
"""

from wonderbt.building import (
    barb_search,
    boundary_flow,
    diagonal_vertex,
    example_barb_vertex,
    in_base_building,
    is_fixed,
    wildness,
)


def show(v):
    return "[" + ", ".join("(" + " ".join(row) + ")" for row in v.to_json()) + "]"


def main():
    for p in (2, 3):
        base = diagonal_vertex((0, 0, 1), p)
        rep = barb_search(3, p, 1 if p == 2 else 2, basepoint=base)
        print(f"p={p}  s={wildness(p)}  ball={len(rep.ball)}  fixed={len(rep.fixed)}  "
              f"image={len(rep.image)}  barbs={len(rep.barbs)}")
        for b in sorted(rep.barbs)[:3]:
            print("   barb", show(b), "distance", rep.distances[b])

    x = example_barb_vertex(2)
    print("\nstarting class", show(x), "fixed:", is_fixed(x), "in base:", in_base_building(x))
    flow = boundary_flow(x, (1, -2, 1), 4)
    for step in flow["steps"]:
        print(f"  n={step['n']}  divisors from start {step['divisors_from_start']}  fixed={step['fixed']}")
    for part in flow["levi_limit"]:
        print("  Levi block", [i + 1 for i in part["block"]], show(part["vertex"]),
              "fixed:", part["fixed"], "in base:", part["in_base"])

    y = example_barb_vertex(3)
    print("\nsame class at p=3: fixed:", is_fixed(y))


if __name__ == "__main__":
    main()
