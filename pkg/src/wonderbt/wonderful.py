"""Orbit combinatorics of the wonderful compactification.

The (G x G)-orbits are indexed by subsets ``tau`` of the simple roots; the
point ``e_tau`` is only ever represented through its weight support, i.e. the
image of the limiting projector ``lim_{t->0} [rho(lambda_tau(t))]`` in
``P(End V)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import ConfigurationError, ContractError
from .rootsys import (
    Coweight,
    LatticeAutomorphism,
    Weight,
    build_root_system,
    check_automorphism,
    lambda_tau,
    opposition_involution,
    parabolic_root_partition,
    parse_root,
    root_name,
    star_element,
    star_on_subset,
)


def all_subsets(r):
    for k in range(r + 1):
        for c in combinations(range(r), k):
            yield frozenset(c)


@dataclass(frozen=True)
class OrbitDescriptor:
    tau: frozenset
    levi_roots: frozenset
    unip_plus: frozenset
    unip_minus: frozenset
    fibration_target: tuple
    codimension: int
    # stabilizer of e_tau: R_u(P x P^opp) . {(x, y) in L x L : x y^-1 in Z(L)}
    stabilizer_condition: str = field(default="x*y^-1 in Z(L_tau)", compare=False)

    @property
    def is_open(self):
        return not self.tau

    def to_json(self):
        return {
            "tau": sorted(i + 1 for i in self.tau),
            "codimension": self.codimension,
            "levi_roots": sorted(root_name(r) for r in self.levi_roots),
            "unip_plus": sorted(root_name(r) for r in self.unip_plus),
            "fibration_target": [sorted(i + 1 for i in t) for t in self.fibration_target],
        }


def orbit_descriptor(rs, tau):
    tau = frozenset(tau)
    part = parabolic_root_partition(rs, lambda_tau(rs, tau))
    return OrbitDescriptor(
        tau=tau,
        levi_roots=part.levi,
        unip_plus=part.unip_plus,
        unip_minus=part.unip_minus,
        fibration_target=(tau, opposition_involution(rs, tau)),
        codimension=len(tau),
    )


def orbit_closure_contains(tau, sigma):
    """Whether ``X(sigma)`` lies in the closure of ``X(tau)``."""
    return frozenset(tau) <= frozenset(sigma)


def orbit_lattice(rs):
    """All ``2**rank`` orbits, open orbit first, closed orbit last."""
    return [orbit_descriptor(rs, t) for t in all_subsets(rs.rank)]


def covering_relations(orbits):
    """Pairs ``(tau, sigma)`` with ``X(sigma)`` a codimension-one boundary piece of ``X(tau)``."""
    return [(a.tau, b.tau) for a in orbits for b in orbits
            if orbit_closure_contains(a.tau, b.tau) and b.codimension == a.codimension + 1]


@dataclass(frozen=True)
class WeightedRep:
    """Weight multiset of a representation, in the simple-root basis."""

    weights: tuple  # of (Weight, multiplicity)

    def __post_init__(self):
        merged = {}
        for w, m in self.weights:
            if m < 1:
                raise ContractError("multiplicities must be positive")
            key = w if isinstance(w, Weight) else Weight(tuple(w))
            merged[key] = merged.get(key, 0) + m
        object.__setattr__(self, "weights", tuple(sorted(merged.items(), key=lambda kv: kv[0].coords)))

    def multiset(self):
        return dict(self.weights)

    def support(self):
        return frozenset(w for w, _ in self.weights)

    def is_stable_under(self, matrix_map):
        ms = self.multiset()
        return all(ms.get(Weight(matrix_map(w.coords)), 0) == m for w, m in ms.items())


def adjoint_rep(rs):
    """Roots with multiplicity 1 and the zero weight with multiplicity ``rank``."""
    weights = [(Weight(r), 1) for r in rs.roots] + [(Weight((0,) * rs.rank), rs.rank)]
    return WeightedRep(tuple(weights))


def weyl_orbit_rep(rs, dominant):
    """The W-orbit of one integral weight, each with multiplicity 1."""
    orbit = {w(tuple(dominant)) for w in rs.weyl_group}
    return WeightedRep(tuple((Weight(v), 1) for v in orbit))


def check_weyl_stable(rs, rep):
    for j in range(rs.rank):
        s = rs.weyl_element((j,))
        if not rep.is_stable_under(s):
            raise ContractError("weight multiset is not Weyl-stable")


def limit_support(rs, rep, lam):
    """Weights surviving in ``lim_{t->0} [rho(lam(t))]``: those minimizing ``<mu, lam>``."""
    if not rep.weights:
        raise ContractError("empty representation")
    values = {w: rs.pairing(w, lam) for w, _ in rep.weights}
    low = min(values.values())
    return frozenset(w for w, v in values.items() if v == low)


def check_star_orbit_identity(rs, rep, gamma, tau):
    """Compare ``supp(e_{gamma*tau})`` with ``w_gamma(gamma(supp(e_tau)))``.

    The left side is an argmin for ``lambda_{gamma*tau}``; the right side
    transports the argmin for ``lambda_tau`` by matrices. They agree exactly
    when the orbit indexing is equivariant for the *-action.
    """
    check_automorphism(rs, gamma)
    if not rep.is_stable_under(gamma):
        raise ContractError("representation is not stable under gamma")
    check_weyl_stable(rs, rep)
    tau = frozenset(tau)
    lhs = limit_support(rs, rep, lambda_tau(rs, star_on_subset(rs, gamma, tau)))
    w = star_element(rs, gamma)
    rhs = frozenset(Weight(w(gamma(mu.coords))) for mu in limit_support(rs, rep, lambda_tau(rs, tau)))
    return lhs == rhs


@dataclass(frozen=True)
class TitsIndex:
    root_system: object
    star_generators: tuple
    anisotropic: frozenset

    def __post_init__(self):
        rs = self.root_system
        gens = tuple(self.star_generators)
        object.__setattr__(self, "star_generators", gens)
        object.__setattr__(self, "anisotropic", frozenset(self.anisotropic))
        if not self.anisotropic <= frozenset(range(rs.rank)):
            raise ContractError("anisotropic set is not a subset of the simple roots")
        for g in gens:
            check_automorphism(rs, g)
            if star_on_subset(rs, g, self.anisotropic) != self.anisotropic:
                raise ContractError("anisotropic set is not *-stable")

    def is_star_stable(self, tau):
        tau = frozenset(tau)
        return all(star_on_subset(self.root_system, g, tau) == tau for g in self.star_generators)

    def star_orbits(self):
        """Orbits of the *-action on simple-root indices."""
        rs = self.root_system
        seen, orbits = set(), []
        for i in range(rs.rank):
            if i in seen:
                continue
            orbit, frontier = {i}, [i]
            while frontier:
                j = frontier.pop()
                for g in self.star_generators:
                    k = next(iter(star_on_subset(rs, g, {j})))
                    if k not in orbit:
                        orbit.add(k)
                        frontier.append(k)
            seen |= orbit
            orbits.append(frozenset(orbit))
        return orbits


def split_index(rs):
    return TitsIndex(rs, (), frozenset())


def anisotropic_index(rs):
    return TitsIndex(rs, (), frozenset(range(rs.rank)))


def quasi_split_su3_index():
    """Quasi-split unitary group in 3 variables: *-action swaps the two simple roots."""
    rs = build_root_system("A", 2)
    return TitsIndex(rs, (LatticeAutomorphism(((0, 1), (1, 0))),), frozenset())


def k_parabolic_exists(index, tau):
    """Parabolics of type ``tau`` are defined over k iff tau is *-stable and misses the anisotropic kernel."""
    tau = frozenset(tau)
    return index.is_star_stable(tau) and not (tau & index.anisotropic)


def rational_boundary_orbits(index):
    return [t for t in all_subsets(index.root_system.rank) if t and k_parabolic_exists(index, t)]


def _simple_index(name, rank):
    vec = parse_root(name, rank)
    if sorted(vec) != [0] * (rank - 1) + [1]:
        raise ConfigurationError(f"{name!r} is not a simple root")
    return vec.index(1)


def tits_index_from_json(data):
    """Parse ``{"type": "A2", "star": [matrix, ...], "anisotropic": ["a1"]}``.

    ``"star": "swap"`` (or a list containing ``"swap"``) is shorthand for the
    nontrivial diagram automorphisms of A_n / D_n.
    """
    from .rootsys import diagram_automorphisms

    if not isinstance(data, dict) or "type" not in data:
        raise ConfigurationError("Tits index JSON needs a 'type' field")
    rs = build_root_system(data["type"])
    raw = data.get("star", [])
    if isinstance(raw, str):
        raw = [raw]
    gens = []
    for item in raw:
        if item == "swap":
            autos = diagram_automorphisms(rs)
            if len(autos) < 2:
                raise ConfigurationError(f"{rs.name} has no nontrivial diagram automorphism")
            gens.extend(autos[1:])
        else:
            try:
                gens.append(LatticeAutomorphism(tuple(tuple(int(x) for x in row) for row in item)))
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"bad star generator {item!r}") from exc
    aniso = frozenset(_simple_index(a, rs.rank) for a in data.get("anisotropic", []))
    try:
        return TitsIndex(rs, tuple(gens), aniso)
    except ContractError as exc:
        raise ConfigurationError(str(exc)) from exc


def coweight_scale(lam, n):
    return Coweight(tuple(Fraction(x) * n for x in lam.coords), lam.basis)
