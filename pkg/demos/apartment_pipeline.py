"""Fixed points at the boundary of an apartment, step by step.

An A3 apartment with the diagram swap acting: average the orbit, drop into the
fibre over a boundary point, then flow out along lambda_tau.

    python3 demos/apartment_pipeline.py
"""

from fractions import Fraction

from wonderbt.apartment import (
    AffineGaloisAction,
    ApartmentPoint,
    FiberSpec,
    affine_from_automorphism,
    point_from_json,
    theorem16_pipeline,
)
from wonderbt.rootsys import build_root_system, diagram_automorphisms, lambda_tau


def fmt(v):
    return "(" + ", ".join(str(Fraction(x)) for x in v) + ")"


def main():
    rs = build_root_system("A3")
    swap = AffineGaloisAction(tuple(affine_from_automorphism(g) for g in diagram_automorphisms(rs)[1:]))
    tau = frozenset({0, 2})
    target = point_from_json({"tau": ["a1", "a3"], "coords": {"a2": "4"}}, 3)
    x0 = ApartmentPoint((1, -2, 7))

    rep = theorem16_pipeline(x0, swap, FiberSpec(tau, target), lambda_tau(rs, tau), rs)
    print("orbit        ", [fmt(v) for v in rep.orbit])
    print("circumcenter ", fmt(rep.circumcenter))
    print("in the fibre ", fmt(rep.x_tilde))
    for n, (v, fixed) in enumerate(rep.flow):
        print(f"  flow n={n}  {fmt(v)}  fixed={fixed}")
    print("limit        ", rep.limit.to_json())
    print("flags        ", rep.flags)


if __name__ == "__main__":
    main()
