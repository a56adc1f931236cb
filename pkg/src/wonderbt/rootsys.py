"""Root systems, Weyl groups, cocharacters and the Galois *-action.

Conventions
-----------
* Adjoint convention: the character lattice has the simple roots as a basis,
  so a :class:`Weight` is an integer vector in the simple-root basis.
* ``cartan[i][j] = <alpha_i, alpha_j^vee>``.
* A :class:`Coweight` is stored either in the simple-coroot basis (exact
  rationals) or in the fundamental-coweight basis, where its coordinates are
  the pairings with the simple roots.
* A type ``tau`` is the set of simple roots *cut* by a parabolic: the
  cocharacter ``lambda_tau`` pairs to 1 on ``tau`` and to 0 on the rest, and the
  Levi factor is generated by ``Delta \\ tau``. ``tau = {}`` is G itself and
  ``tau = Delta`` is a Borel subgroup.
"""

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations

from ._linalg import identity, inverse, mat_mul, mat_vec, normalize_vec, transpose
from .errors import ConfigurationError, ContractError

ROOT = "root"
COROOT = "coroot"
FUNDAMENTAL = "fundamental_coweight"

MAX_RANK = 4

_SPEC_RE = re.compile(r"^\s*([ABCDGabcdg])\s*(\d+)\s*$")


def cartan_matrix(type_name, rank):
    t = type_name.upper()
    if t not in "ABCDG" or len(t) != 1:
        raise ConfigurationError(f"unsupported root system type {type_name!r}")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3, "G": 2}[t]
    if rank < minimum or rank > MAX_RANK or (t == "G" and rank != 2):
        raise ConfigurationError(f"unsupported rank {rank} for type {t}")
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    if t == "G":
        # alpha_1 short, alpha_2 long
        c[0][1], c[1][0] = -1, -3
        return tuple(map(tuple, c))
    chain = rank - 1 if t in "ABC" else rank - 2
    for i in range(chain):
        c[i][i + 1] = c[i + 1][i] = -1
    if t == "B":
        c[rank - 2][rank - 1], c[rank - 1][rank - 2] = -2, -1
    elif t == "C":
        c[rank - 2][rank - 1], c[rank - 1][rank - 2] = -1, -2
    elif t == "D":
        c[rank - 3][rank - 1] = c[rank - 1][rank - 3] = -1
    return tuple(map(tuple, c))


def parse_spec(spec):
    """``"A2"`` -> ``("A", 2)``."""
    m = _SPEC_RE.match(spec or "")
    if not m:
        raise ConfigurationError(f"malformed root system spec {spec!r}")
    return m.group(1).upper(), int(m.group(2))


@dataclass(frozen=True)
class Weight:
    coords: tuple
    basis: str = ROOT

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize_vec(self.coords))


@dataclass(frozen=True)
class Coweight:
    coords: tuple
    basis: str = COROOT

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize_vec(self.coords))


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element; ``matrix`` acts on simple-root coordinates (columns)."""

    word: tuple
    matrix: tuple

    def __call__(self, vec):
        return normalize_vec(mat_vec(self.matrix, vec))

    @property
    def length(self):
        return len(self.word)


@dataclass(frozen=True)
class LatticeAutomorphism:
    """Integer matrix acting on the character lattice (simple-root coordinates)."""

    matrix: tuple
    order: int = 0

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        ident = identity(n)
        power, k = m, 1
        while power != ident:
            power = mat_mul(power, m)
            k += 1
            if k > 48:
                raise ContractError("lattice automorphism has no finite order <= 48")
        if self.order and self.order != k:
            raise ContractError(f"declared order {self.order} but matrix has order {k}")
        object.__setattr__(self, "order", k)

    def __call__(self, vec):
        return normalize_vec(mat_vec(self.matrix, vec))

    def compose(self, other):
        return LatticeAutomorphism(mat_mul(self.matrix, other.matrix))

    @classmethod
    def identity(cls, rank):
        return cls(identity(rank))


class RootSystem:
    """Reduced irreducible root system of type A, B, C, D or G (rank <= 4)."""

    def __init__(self, type_name, rank):
        self.type_name = type_name.upper()
        self.rank = rank
        self.cartan_matrix = cartan_matrix(type_name, rank)

    def __repr__(self):
        return f"RootSystem({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.cartan_matrix == other.cartan_matrix

    def __hash__(self):
        return hash(self.cartan_matrix)

    @property
    def name(self):
        return f"{self.type_name}{self.rank}"

    @property
    def simple_roots(self):
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    def simple_reflection(self, j):
        c = self.cartan_matrix
        rows = [list(row) for row in identity(self.rank)]
        rows[j] = [int(i == j) - c[i][j] for i in range(self.rank)]
        return tuple(map(tuple, rows))

    @cached_property
    def roots(self):
        """All roots, generated as the closure of the simple roots under simple reflections."""
        gens = [self.simple_reflection(j) for j in range(self.rank)]
        seen = set(self.simple_roots)
        queue = deque(self.simple_roots)
        while queue:
            beta = queue.popleft()
            for s in gens:
                gamma = mat_vec(s, beta)
                if gamma not in seen:
                    seen.add(gamma)
                    queue.append(gamma)
        return tuple(sorted(seen, key=lambda v: (-sum(v), tuple(-x for x in v))))

    @cached_property
    def positive_roots(self):
        return tuple(r for r in self.roots if all(x >= 0 for x in r))

    @cached_property
    def negative_roots(self):
        return tuple(tuple(-x for x in r) for r in self.positive_roots)

    @cached_property
    def root_set(self):
        return frozenset(self.roots)

    @cached_property
    def cartan_inverse(self):
        return inverse(self.cartan_matrix)

    # -- pairing ---------------------------------------------------------

    def coweight_pairings(self, lam):
        """The vector ``(<alpha_i, lam>)_i``."""
        if lam.basis == FUNDAMENTAL:
            return tuple(Fraction(x) for x in lam.coords)
        if lam.basis != COROOT:
            raise ContractError(f"not a coweight basis: {lam.basis!r}")
        return tuple(Fraction(x) for x in mat_vec(self.cartan_matrix, lam.coords))

    def pairing(self, chi, lam):
        if isinstance(chi, Weight):
            if chi.basis != ROOT:
                raise ContractError(f"weight must be in the simple-root basis, got {chi.basis!r}")
            chi = chi.coords
        if not isinstance(lam, Coweight):
            raise ContractError("second argument must be a Coweight")
        if len(chi) != self.rank or len(lam.coords) != self.rank:
            raise ContractError("dimension mismatch in pairing")
        value = sum(Fraction(a) * b for a, b in zip(chi, self.coweight_pairings(lam)))
        return int(value) if value.denominator == 1 else value

    def to_coroot_basis(self, lam):
        if lam.basis == COROOT:
            return lam
        return Coweight(mat_vec(self.cartan_inverse, self.coweight_pairings(lam)), COROOT)

    # -- Weyl group ------------------------------------------------------

    @cached_property
    def weyl_group(self):
        """All elements, breadth-first by word length (so words are reduced)."""
        gens = [self.simple_reflection(j) for j in range(self.rank)]
        start = WeylElement((), identity(self.rank))
        found = {start.matrix: start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for j, s in enumerate(gens):
                m = mat_mul(s, w.matrix)
                if m not in found:
                    found[m] = WeylElement((j,) + w.word, m)
                    queue.append(found[m])
        return tuple(found.values())

    @cached_property
    def longest_element(self):
        return max(self.weyl_group, key=lambda w: w.length)

    def weyl_element(self, word):
        m = identity(self.rank)
        for j in reversed(word):
            m = mat_mul(self.simple_reflection(j), m)
        return WeylElement(tuple(word), m)

    def support(self, root):
        return frozenset(i for i, x in enumerate(root) if x)

    def subsystem(self, simple_subset):
        """Roots of the standard Levi generated by ``simple_subset``."""
        s = frozenset(simple_subset)
        return frozenset(r for r in self.roots if self.support(r) <= s)

    def root_name(self, root):
        return root_name(root)


def build_root_system(type_name, rank=None):
    """Build from ``("A", 2)`` or from a spec string ``"A2"``."""
    if rank is None:
        type_name, rank = parse_spec(type_name)
    return RootSystem(type_name, rank)


def pairing(rs, chi, lam):
    return rs.pairing(chi, lam)


def lambda_tau(rs, tau):
    """The cocharacter pairing to 1 on ``tau`` and 0 on the other simple roots.

    Returned in the simple-coroot basis; it is the sum of the fundamental
    coweights indexed by ``tau``.
    """
    tau = frozenset(tau)
    if not tau <= frozenset(range(rs.rank)):
        raise ContractError(f"tau={sorted(tau)} is not a subset of the simple roots")
    indicator = tuple(int(i in tau) for i in range(rs.rank))
    lam = Coweight(mat_vec(rs.cartan_inverse, indicator), COROOT)
    # membership of the adjoint coweight lattice: integral pairing with X^*
    assert all(Fraction(x).denominator == 1 for x in rs.coweight_pairings(lam))
    return lam


def weyl_element_to_basis(rs, image_basis):
    """The unique ``w`` in W with ``w(image_basis) = Delta`` (as sets)."""
    image = [tuple(b) for b in image_basis]
    if len(image) != rs.rank or len(set(image)) != rs.rank or not set(image) <= rs.root_set:
        raise ContractError("image_basis is not a set of rank-many distinct roots")
    target = frozenset(rs.simple_roots)
    for w in rs.weyl_group:
        if frozenset(w(b) for b in image) == target:
            return w
    raise ContractError("image_basis is not a basis of the root system")


def check_automorphism(rs, gamma):
    if len(gamma.matrix) != rs.rank:
        raise ContractError("automorphism has the wrong size")
    if frozenset(gamma(r) for r in rs.roots) != rs.root_set:
        raise ContractError("automorphism does not preserve the root system")


def star_element(rs, gamma):
    """``w_gamma``: the Weyl element restoring the basis after ``gamma``."""
    check_automorphism(rs, gamma)
    return weyl_element_to_basis(rs, [gamma(a) for a in rs.simple_roots])


def star_action(rs, gamma, chi):
    """``gamma * chi = w_gamma(gamma(chi))``."""
    coords = chi.coords if isinstance(chi, Weight) else tuple(chi)
    w = star_element(rs, gamma)
    return Weight(w(gamma(coords)))


def star_permutation(rs, gamma):
    """The permutation of simple-root indices induced by the *-action."""
    w = star_element(rs, gamma)
    out = []
    for a in rs.simple_roots:
        image = w(gamma(a))
        out.append(image.index(1))
    return tuple(out)


def star_on_subset(rs, gamma, tau):
    perm = star_permutation(rs, gamma)
    return frozenset(perm[i] for i in tau)


def act_on_coweight(matrix, lam, rs):
    """Contragredient action on coweights: ``<g chi, g lam> = <chi, lam>``."""
    c = rs.coweight_pairings(lam)
    inv_t = transpose(inverse(matrix))
    return rs.to_coroot_basis(Coweight(mat_vec(inv_t, c), FUNDAMENTAL))


def diagram_automorphisms(rs):
    """All Dynkin diagram automorphisms as lattice automorphisms (identity first)."""
    c = rs.cartan_matrix
    r = rs.rank
    out = []
    for perm in permutations(range(r)):
        if all(c[perm[i]][perm[j]] == c[i][j] for i in range(r) for j in range(r)):
            m = [[0] * r for _ in range(r)]
            for i in range(r):
                m[perm[i]][i] = 1
            out.append(LatticeAutomorphism(tuple(map(tuple, m))))
    return out


def generate_group(gens, rank):
    """Closure of a finite set of lattice automorphisms under composition."""
    ident = LatticeAutomorphism.identity(rank)
    seen = {ident.matrix: ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for h in gens:
            gh = h.compose(g)
            if gh.matrix not in seen:
                seen[gh.matrix] = gh
                queue.append(gh)
    return list(seen.values())


def opposition_involution(rs, tau):
    """The type ``(-w_0)(tau)`` of the opposite parabolic."""
    w0 = rs.longest_element
    out = set()
    for i in tau:
        image = tuple(-x for x in w0(rs.simple_roots[i]))
        out.add(image.index(1))
    return frozenset(out)


@dataclass(frozen=True)
class RootPartition:
    levi: frozenset
    unip_plus: frozenset
    unip_minus: frozenset


def parabolic_root_partition(rs, lam):
    """Split the roots by the sign of their pairing with ``lam``."""
    levi, plus, minus = set(), set(), set()
    for r in rs.roots:
        v = rs.pairing(r, lam)
        (levi if v == 0 else plus if v > 0 else minus).add(r)
    return RootPartition(frozenset(levi), frozenset(plus), frozenset(minus))


def dominant_conjugate(rs, lam):
    """Return ``(w, w(lam))`` with ``w(lam)`` dominant; ``w`` acts on roots."""
    pair = rs.coweight_pairings(lam)
    for w in rs.weyl_group:
        # <alpha, w lam> = <w^{-1} alpha, lam>; w^{-1} acts by the inverse matrix
        w_inv = inverse(w.matrix)
        new = tuple(sum(Fraction(w_inv[k][i]) * pair[k] for k in range(rs.rank))
                    for i in range(rs.rank))
        if all(x >= 0 for x in new):
            return w, rs.to_coroot_basis(Coweight(new, FUNDAMENTAL))
    raise AssertionError("every coweight has a dominant conjugate")


_TERM_RE = re.compile(r"([+-]?)(\d*)\*?a(\d+)")


def root_name(root):
    """``(1, 1) -> "a1+a2"``, ``(0, -1) -> "-a2"``, ``(2, 1) -> "2a1+a2"``."""
    parts = []
    for i, c in enumerate(root):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}a{i + 1}")
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def parse_root(text, rank):
    text = text.replace(" ", "")
    if text == "0":
        return (0,) * rank
    pos, vec = 0, [0] * rank
    for m in _TERM_RE.finditer(text):
        if m.start() != pos:
            raise ConfigurationError(f"cannot parse root {text!r}")
        pos = m.end()
        idx = int(m.group(3)) - 1
        if not 0 <= idx < rank:
            raise ConfigurationError(f"simple root index out of range in {text!r}")
        mag = int(m.group(2) or 1)
        vec[idx] += -mag if m.group(1) == "-" else mag
    if pos != len(text) or pos == 0:
        raise ConfigurationError(f"cannot parse root {text!r}")
    return tuple(vec)
