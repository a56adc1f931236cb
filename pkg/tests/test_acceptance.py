"""Acceptance suite: one PASS/FAIL line per primary criterion.

The lines are printed even when pytest captures output, so
``pytest tests/test_acceptance.py -v`` shows the full scorecard.
"""

import random
import time
from fractions import Fraction

import pytest

from wonderbt.apartment import (
    AffineGaloisAction,
    ApartmentPoint,
    FiberSpec,
    affine_from_automorphism,
    circumcenter,
    circumcenter_bruteforce,
    cochar_flow,
    limit_point,
    log_metric,
    min_enclosing_ball,
    theorem16_pipeline,
    trivial_action,
)
from wonderbt.building import (
    barb_search,
    bfs_layers,
    boundary_flow,
    diagonal_vertex,
    divisor_distance,
    example_barb_vertex,
    fixed_neighbors,
    neighbors,
    standard_vertex,
)
from wonderbt.lattice import LatticeClass, hnf, make_ring, mat_mul
from wonderbt.padic import QuadElt
from wonderbt.rootsys import (
    Coweight,
    LatticeAutomorphism,
    build_root_system,
    diagram_automorphisms,
    generate_group,
    lambda_tau,
    star_action,
    star_permutation,
)
from wonderbt.theta import BigCellPoly, base_point, compactified, gauss_norm, separating_form, theta_eval
from wonderbt.wonderful import (
    adjoint_rep,
    all_subsets,
    anisotropic_index,
    check_star_orbit_identity,
    quasi_split_su3_index,
    rational_boundary_orbits,
    split_index,
)

from graph_oracle import ball, induced_distances
from test_lattice import random_invertible, random_unimodular

TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"]
fr = Fraction


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, tol, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  {name}  (tolerance: {tol})  {detail}".rstrip())
        assert ok, f"{name}: {detail}"
    return emit


def test_lambda_tau_defining_property(verdict):
    bad = []
    count = 0
    for name in TYPES:
        rs = build_root_system(name)
        for tau in all_subsets(rs.rank):
            pair = rs.coweight_pairings(lambda_tau(rs, tau))
            count += 1
            if pair != tuple(1 if i in tau else 0 for i in range(rs.rank)):
                bad.append((name, sorted(tau)))
    verdict("lambda_tau pairs to 1 on tau and 0 elsewhere", not bad, "exact",
            f"{count} (type, tau) cases, failures={bad}")


def test_star_action_is_an_action(verdict):
    problems = []
    for name in ["A2", "A3", "D4"]:
        rs = build_root_system(name)
        group = generate_group(diagram_automorphisms(rs)[1:], rs.rank)
        c = rs.cartan_matrix
        for g in group:
            perm = star_permutation(rs, g)
            if sorted(perm) != list(range(rs.rank)):
                problems.append((name, "not a permutation"))
            if any(c[perm[i]][perm[j]] != c[i][j] for i in range(rs.rank) for j in range(rs.rank)):
                problems.append((name, "Cartan matrix not preserved"))
            for h in group:
                gh = g.compose(h)
                for chi in rs.simple_roots:
                    if star_action(rs, gh, chi) != star_action(rs, g, star_action(rs, h, chi).coords):
                        problems.append((name, "composition law"))
    verdict("*-action is a group action permuting Delta and preserving the Cartan matrix",
            not problems, "exact", f"A2, A3, D4 diagram groups; problems={problems[:3]}")


def _root_automorphisms(rs):
    gens = [LatticeAutomorphism(w.matrix) for w in rs.weyl_group if len(w.word) == 1]
    gens += diagram_automorphisms(rs)[1:]
    gens.append(LatticeAutomorphism(tuple(tuple(-int(i == j) for j in range(rs.rank)) for i in range(rs.rank))))
    return generate_group(gens, rs.rank)


def test_star_orbit_identity(verdict):
    failures, count = [], 0
    for name in ["A2", "A3"]:
        rs = build_root_system(name)
        rep = adjoint_rep(rs)
        for g in _root_automorphisms(rs):
            for tau in all_subsets(rs.rank):
                count += 1
                if not check_star_orbit_identity(rs, rep, g, tau):
                    failures.append((name, g.matrix, sorted(tau)))
    verdict("orbit identity holds for every (gamma, tau) on the adjoint weights", not failures,
            "exact", f"{count} cases over all root-system automorphisms of A2, A3")


def test_rational_boundary_counts(verdict):
    got = {}
    for name in TYPES:
        rs = build_root_system(name)
        got[name] = (len(rational_boundary_orbits(split_index(rs))),
                     len(rational_boundary_orbits(anisotropic_index(rs))))
    su3 = len(rational_boundary_orbits(quasi_split_su3_index()))
    ok = all(s == 2 ** build_root_system(n).rank - 1 and a == 0 for n, (s, a) in got.items()) and su3 == 1
    verdict("rational boundary orbit counts: anisotropic 0, split 2^r - 1, SU3 1", ok, "exact counts",
            f"split/anisotropic={got}, SU3={su3}")


# -- fixed-point pipeline --------------------------------------------------------

def _actions(rs, rnd):
    autos = diagram_automorphisms(rs)
    out = [("trivial", trivial_action(rs.rank))]
    if len(autos) > 1:
        out.append(("diagram", AffineGaloisAction(tuple(affine_from_automorphism(g) for g in autos[1:]))))
    if rs.name == "A3":
        # swap with a translation t satisfying P t = -t, so the group stays of order 2
        a = fr(rnd.randint(-4, 4), rnd.choice([1, 2]))
        out.append(("affine swap", AffineGaloisAction((affine_from_automorphism(autos[1], (a, 0, -a)),))))
    return out


def _invariant_subsets(rs, action):
    perms = [tuple(row.index(1) for row in g.linear) for g in action.maps]
    return [t for t in all_subsets(rs.rank) if all({p[i] for i in t} == set(t) for p in perms)]


def _random_config(rs, action, rnd):
    rank = rs.rank
    rand_vec = lambda: tuple(fr(rnd.randint(-9, 9), rnd.choice([1, 2, 3])) for _ in range(rank))
    tau = frozenset(rnd.choice(_invariant_subsets(rs, action)))
    fixed = circumcenter(action.orbit(rand_vec()), log_metric(rs))
    target = compactified(rank, tau, {i: fixed[i] for i in range(rank) if i not in tau})
    lam = lambda_tau(rs, tau)
    k = rnd.randint(1, 3)
    lam = Coweight(tuple(k * c for c in lam.coords), lam.basis)
    return ApartmentPoint(rand_vec()), FiberSpec(tau, target), lam


def test_fixed_point_pipeline(verdict):
    rnd = random.Random(16)
    runs, failures = 0, []
    for name in ["A2", "A3", "B2", "G2", "D4"]:
        rs = build_root_system(name)
        for label, action in _actions(rs, rnd):
            for _ in range(12):
                x0, fiber, lam = _random_config(rs, action, rnd)
                rep = theorem16_pipeline(x0, action, fiber, lam, rs, steps=5)
                runs += 1
                x_t = ApartmentPoint(rep.x_tilde, x0.q)
                pair = rs.coweight_pairings(lam)
                semigroup = all(
                    cochar_flow(cochar_flow(x_t, lam, m, rs), lam, n, rs) == cochar_flow(x_t, lam, m + n, rs)
                    for m in range(3) for n in range(3))
                # log_q of the value on -beta drops by n <beta, lam>: strictly when the
                # support of beta meets tau, not at all otherwise
                decay = True
                for beta in rs.positive_roots:
                    rate = sum(b * c for b, c in zip(beta, pair))
                    decay &= (rate > 0) == any(b and i in fiber.tau for i, b in enumerate(beta))
                    for n in range(6):
                        e = cochar_flow(x_t, lam, n, rs).exp_map
                        decay &= -sum(b * e[i] for i, b in enumerate(beta)) == \
                            -sum(b * v for b, v in zip(beta, rep.x_tilde)) - n * rate
                vanish = all(
                    (limit_point(x_t, lam, rs).negative_root_value(beta) == 0)
                    == any(b and i in fiber.tau for i, b in enumerate(beta))
                    for beta in rs.positive_roots)
                if not (rep.ok and semigroup and decay and vanish):
                    failures.append((name, label, rep.flags, semigroup, decay, vanish))
    verdict("fixed-point pipeline flags (a) (b) (c), semigroup law and coordinate decay", not failures,
            "exact rationals", f"{runs} configurations; failures={failures[:2]}")


# -- theta -----------------------------------------------------------------------

def _random_poly(rs, rnd, levi=()):
    roots = [r for r in rs.roots if not all(c == 0 or i in levi for i, c in enumerate(r))]
    monos = []
    for _ in range(rnd.randint(1, 5)):
        exps = {rnd.choice(roots): rnd.randint(1, 3) for _ in range(rnd.randint(0, 3))}
        monos.append((exps, fr(rnd.randint(0, 12), rnd.choice([1, 2, 3, 4]))))
    return BigCellPoly(rs, tuple(monos), frozenset(levi))


def test_theta_base_point_and_separation(verdict):
    rnd = random.Random(12)
    types = [build_root_system(n) for n in ["A2", "A3", "B2", "G2", "C3"]]
    mismatches = 0
    for i in range(1000):
        rs = types[i % len(types)]
        levi = tuple(j for j in range(rs.rank) if rnd.random() < 0.3)
        if len(levi) == rs.rank:
            levi = ()
        f = _random_poly(rs, rnd, levi)
        if theta_eval(f, base_point(rs.rank), base_point(rs.rank)) != gauss_norm(f):
            mismatches += 1
    pairs, bad = 0, 0
    while pairs < 600:
        rs = types[pairs % len(types)]
        tau = tuple(j for j in range(rs.rank) if rnd.random() < 0.35)
        if len(tau) == rs.rank:
            continue
        ex = lambda: {j: fr(rnd.randint(-5, 5), rnd.choice([1, 2])) for j in range(rs.rank) if j not in tau}
        y1, y2 = compactified(rs.rank, tau, ex()), compactified(rs.rank, tau, ex())
        if y1 == y2:
            continue
        x = compactified(rs.rank, (), {j: rnd.randint(-3, 3) for j in range(rs.rank)})
        sep = separating_form(y1, y2, rs, x=x)
        poly = sep.form.as_poly(rs)
        if not (sep.values[0] != sep.values[1]
                and sep.values == (theta_eval(poly, x, y1), theta_eval(poly, x, y2))):
            bad += 1
        pairs += 1
    verdict("base-point value equals Gauss norm; separators tell same-stratum points apart",
            mismatches == 0 and bad == 0, "exact",
            f"1000 polynomials (mismatches={mismatches}), {pairs} pairs (failures={bad})")


# -- building --------------------------------------------------------------------

def test_barb_experiment(verdict):
    t0 = time.perf_counter()
    rep2 = barb_search(3, 2, 1, basepoint=diagonal_vertex((0, 0, 1), 2))
    elapsed = time.perf_counter() - t0
    barb = example_barb_vertex(2)
    found = barb in rep2.barbs and rep2.distances.get(barb) == 1
    odd = {p: len(barb_search(3, p, 2, basepoint=diagonal_vertex((0, 0, 1), p)).barbs) for p in (3, 5)}
    ok = found and elapsed < 10 and odd == {3: 0, 5: 0}
    verdict("barb experiment n=3: barb at distance 1 for p=2 r=1, none for p=3,5 r=2", ok,
            "exact; p=2 runtime < 10 s",
            f"p=2: {len(rep2.barbs)} barbs in {elapsed:.1f}s, listed class found={found}; odd p barbs={odd}")


def test_n2_fixed_neighbors(verdict):
    counts = {p: (len(fixed_neighbors(diagonal_vertex((0, 1), p))),
                  len(neighbors(diagonal_vertex((0, 1), p)))) for p in (2, 3, 5)}
    ok = counts[2][0] == counts[2][1] == 3 and counts[3][0] == 2 and counts[5][0] == 2
    verdict("n=2 fixed neighbours: all at p=2, exactly 2 at p odd", ok, "exact",
            f"(fixed, total) by p: {counts}")


def test_boundary_flow_of_barb(verdict):
    rep2 = boundary_flow(example_barb_vertex(2), (1, -2, 1), 5)
    rep3 = boundary_flow(example_barb_vertex(3), (1, -2, 1), 5)
    top2, top3 = rep2["levi_limit"][0], rep3["levi_limit"][0]
    ok = (all(s["fixed"] for s in rep2["steps"]) and len(rep2["steps"]) == 6
          and top2["fixed"] and not top2["in_base"] and not top3["fixed"])
    verdict("flow classes fixed at p=2 for n<=5; Levi class fixed and outside the base image; "
            "not fixed at p=3", ok, "exact booleans",
            f"p=2 Levi {top2['vertex'].to_json()} fixed={top2['fixed']} in_base={top2['in_base']}; "
            f"p=3 fixed={top3['fixed']}")


def test_barb_distances_and_tame_case(verdict):
    runs = [barb_search(3, 2, 1, basepoint=diagonal_vertex((0, 0, 1), 2)),
            barb_search(3, 2, 2),
            barb_search(3, 3, 2), barb_search(3, 5, 1),
            barb_search(2, 3, 3), barb_search(2, 5, 3)]
    finite = all(d is not None for r in runs for d in r.distances.values()) and \
        all(v in r.distances for r in runs for v in r.barbs)
    tame_empty = all(not r.barbs for r in runs if r.s == 0)
    wild = [len(r.barbs) for r in runs if r.s > 0]
    verdict("every barb has a finite distance to the image; no barbs when s = 0", finite and tame_empty,
            "exact", f"wild barb counts={wild}; tame runs={sum(r.s == 0 for r in runs)}")


def test_oracle_equivalences(verdict):
    # The group acts transitively on vertices and preserves both distances, so
    # all pairs at distance <= 3 reduce to pairs with the standard vertex.
    mism, checked = 0, 0
    for n, p in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        start = standard_vertex(n, p)
        for k, layer in enumerate(bfs_layers(start, 3)):
            for v in layer:
                checked += 1
                mism += divisor_distance(start, v) != k
    # BFS inside the ball from other sources bounds the distance from above
    for n, p, r in [(2, 2, 3), (2, 3, 3), (3, 2, 3), (3, 3, 2)]:
        verts = ball(standard_vertex(n, p), r)
        sources = random.Random(n * 10 + p).sample(verts, 6)
        for s, dist in induced_distances(verts, sources).items():
            for v, d in dist.items():
                checked += 1
                mism += d != divisor_distance(s, v)
    rnd = random.Random(11)
    cc_bad = 0
    for i in range(300):
        dim = 1 + i % 3
        m = log_metric(build_root_system(rnd.choice({1: ["A1"], 2: ["A2", "B2", "G2"], 3: ["A3", "B3", "C3"]}[dim])))
        pts = [tuple(fr(rnd.randint(-10, 10), rnd.choice([1, 2])) for _ in range(dim))
               for _ in range(rnd.randint(1, 6))]
        cc_bad += min_enclosing_ball(pts, m) != circumcenter_bruteforce(pts, m)
    verdict("BFS distance = divisor formula; enclosing-ball circumcenter = brute force",
            mism == 0 and cc_bad == 0, "0 (exact arithmetic; inexact fallback never engaged)",
            f"{checked} distance checks (mismatches={mism}), 300 point sets (mismatches={cc_bad})")


def test_hnf_canonical(verdict):
    bad, total = 0, 0
    for n in (2, 3):
        for p in (2, 3, 5):
            rnd = random.Random(1000 * n + p)
            ring = make_ring("quad", p)
            for _ in range(1000):
                m = random_invertible(rnd, n, p)
                h = hnf(m, ring)
                cls = LatticeClass(m, p)
                scale = QuadElt.uniformizer_power(rnd.randint(-3, 3), p)
                scaled = tuple(tuple(x * scale for x in row) for row in m)
                moved = mat_mul(m, random_unimodular(rnd, n, p))
                ok = (hnf(h, ring) == h and hnf(m, ring, homothety=True) == cls.matrix
                      and LatticeClass(cls.matrix, p).matrix == cls.matrix
                      and LatticeClass(scaled, p) == cls and hnf(moved, ring) == h)
                bad += not ok
                total += 1
    verdict("hnf idempotent and homothety invariant", bad == 0, "exact syntactic equality",
            f"{total} random lattices (failures={bad})")
