"""Vertices of the Bruhat-Tits building of SL_n over Q_p(sqrt p) and over Q_p.

Vertices are homothety classes of lattices (:class:`LatticeClass`). The
building over ``k' = Q_p(w)``, ``w**2 = p``, has residue field ``F_p`` and
uniformizer ``w``; the building over ``k = Q_p`` has uniformizer ``p``.

The base building ``B(G, k)`` sits inside ``B(G, k')`` as a metric subspace.
Its points that are vertices of ``B(G, k')`` are the tensored k-vertices
``[M (x) O']`` together with the midpoints ``[M1 (x) O' + w M0 (x) O']`` of
k-edges ``p M0 < M1 < M0``; the latter are exactly the k'-neighbours of the
tensored k-vertices. Both the enumeration and the descent test below use this.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import ConfigurationError, ContractError
from .lattice import (
    LatticeClass,
    elementary_divisors as _divisors,
    hnf,
    intersect_coordinates,
    make_ring,
    quad_matrix,
    rational_part,
)
from .padic import QuadElt, vp

SUPPORTED_N = (2, 3)


def _check_n(n):
    if n not in SUPPORTED_N:
        raise ConfigurationError(f"building rank n={n} not supported (use 2 or 3)")


def _check_p(p):
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ConfigurationError(f"p={p} is not a prime")


def w(p, d=1):
    return QuadElt.uniformizer_power(d, p)


def vertex(columns_, p):
    """Class of the O'-lattice spanned by the given column vectors."""
    rows = tuple(zip(*columns_))
    return LatticeClass(quad_matrix(rows, p), p)


def standard_vertex(n, p):
    return diagonal_vertex((0,) * n, p)


def diagonal_vertex(exps, p):
    n = len(exps)
    rows = tuple(tuple(w(p, exps[i]) if i == j else QuadElt(0, 0, p) for j in range(n)) for i in range(n))
    return LatticeClass(rows, p)


def rational_standard(n, p):
    rows = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return LatticeClass(rows, p, kind="rational")


def example_barb_vertex(p):
    """``[O(w^-1 e1 + e3) + O e2 + O w e3]``."""
    return vertex([(w(p, -1), 0, 1), (0, 1, 0), (0, 0, w(p))], p)


def galois_image(v):
    """Apply ``a + b w -> a - b w`` entrywise and re-canonicalize."""
    if v.kind != "quad":
        return v
    return LatticeClass(tuple(tuple(x.conj() for x in row) for row in v.matrix), v.p)


def is_fixed(v):
    return galois_image(v) == v


def tensor_up(m):
    """``[M] -> [M (x) O']`` for a ``Z_p``-lattice class."""
    return LatticeClass(quad_matrix(m.matrix, m.p), m.p)


def elementary_divisors(v1, v2):
    """Normalized (smallest = 0) exponents of ``v2`` relative to ``v1``."""
    if v1.kind != v2.kind or v1.p != v2.p or v1.n != v2.n:
        raise ContractError("vertices live in different buildings")
    d = _divisors(v1.matrix, v2.matrix, v1.ring)
    return tuple(x - d[0] for x in d)


def divisor_distance(v1, v2):
    d = elementary_divisors(v1, v2)
    return d[-1] - d[0]


def adjacent(v1, v2):
    d = elementary_divisors(v1, v2)
    return set(d) <= {0, 1} and len(set(d)) == 2


def residue_subspaces(n, p):
    """Bases (lists of integer vectors) of all proper nonzero subspaces of F_p^n, in RREF."""
    out = []
    for dim in range(1, n):
        for piv in combinations(range(n), dim):
            free = [(r, c) for r in range(dim) for c in range(piv[r] + 1, n) if c not in piv]
            for values in product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(dim)]
                for r, c in enumerate(piv):
                    rows[r][c] = 1
                for (r, c), val in zip(free, values):
                    rows[r][c] = val
                out.append(rows)
    return out


def gaussian_binomial(n, k, q):
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def neighbor_count(n, p):
    return sum(gaussian_binomial(n, d, p) for d in range(1, n))


def neighbors(v):
    """All ``[M']`` with ``pi M < M' < M``: lifts of proper subspaces of ``M / pi M``.

    Works for both kinds of vertices (``pi = w`` or ``pi = p``).
    """
    _check_n(v.n)
    ring = v.ring
    h = v.matrix
    n, p = v.n, v.p
    pi = ring.pi_pow(1)
    cols = list(zip(*h))
    scaled = [[pi * x for x in c] for c in cols]
    out = set()
    for basis in residue_subspaces(n, p):
        lifts = [[sum((cols[j][i] * c[j] for j in range(n) if c[j]), ring.zero) for i in range(n)]
                 for c in basis]
        gens = lifts + scaled
        out.add(LatticeClass(tuple(zip(*gens)), p, kind=v.kind))
    return sorted(out)


def fixed_neighbors(v):
    return [u for u in neighbors(v) if is_fixed(u)]


def bfs_layers(start, radius, layer_cache=None):
    """Sorted BFS layers ``[[start], layer1, ..., layer_radius]`` of the 1-skeleton."""
    layers = [[start]]
    seen = {start}
    for r in range(1, radius + 1):
        cached = layer_cache.get(start, r) if layer_cache is not None else None
        if cached is not None:
            layer = cached
        else:
            found = set()
            for u in layers[-1]:
                for x in neighbors(u):
                    if x not in seen:
                        found.add(x)
            layer = sorted(found)
            if layer_cache is not None:
                layer_cache.put(start, r, layer)
        seen.update(layer)
        layers.append(layer)
    return layers


def graph_distance(v1, v2, radius_cap=6):
    """BFS distance in the 1-skeleton, or ``None`` if it exceeds ``radius_cap``."""
    if v1 == v2:
        return 0
    seen = {v1}
    frontier = [v1]
    for r in range(1, radius_cap + 1):
        nxt = []
        for u in frontier:
            for x in neighbors(u):
                if x == v2:
                    return r
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return None


def base_building_image(n, p, radius, center=None):
    """k'-vertices of ``B(G, Q_p)`` found from a k-building BFS of the given radius.

    Returns the tensored k-vertices and the midpoints of every k-edge at
    least one of whose ends lies within ``radius`` of ``center`` (default:
    the standard ``Z_p``-lattice).
    """
    _check_n(n)
    _check_p(p)
    center = center or rational_standard(n, p)
    k_layers = bfs_layers(center, radius)
    image = set()
    for layer in k_layers:
        for m in layer:
            up = tensor_up(m)
            image.add(up)
            image.update(neighbors(up))
    return image


def tensored_vertices(n, p, radius):
    """Only the images ``[M (x) O']`` of k-vertices (no midpoints)."""
    return {tensor_up(m) for layer in bfs_layers(rational_standard(n, p), radius) for m in layer}


def image_cover_radius(k_radius):
    """k'-radius around the standard vertex fully covered by ``base_building_image(.., k_radius)``."""
    return 2 * k_radius


def k_radius_for(cover):
    return (cover + 1) // 2


def in_base_building(v):
    """Descent test: ``L = (L ∩ k^n) (x) O' + w ((w^-1 L) ∩ k^n) (x) O'``.

    The right side always sits inside ``L``; equality holds exactly when the
    class is a point of ``B(G, Q_p)`` (a tensored k-vertex or a k-edge midpoint).
    """
    if v.kind != "quad":
        return True
    p = v.p
    a = rational_part(v.matrix, p)
    winv = w(p, -1)
    b = rational_part(tuple(tuple(winv * x for x in row) for row in v.matrix), p)
    gens = [list(c) for c in zip(*quad_matrix(a, p))] + \
        [[w(p) * x for x in c] for c in zip(*quad_matrix(b, p))]
    rebuilt = hnf(tuple(zip(*gens)), make_ring("quad", p))
    original = hnf(v.matrix, make_ring("quad", p))
    return rebuilt == original


def wildness(p):
    """``s(k'/k) = v_p(e)`` with ramification index ``e = 2``."""
    return vp(2, p)


def distance_to_image(v, cap=6):
    """Graph distance from ``v`` to the nearest vertex of the base image (``None`` past ``cap``)."""
    if in_base_building(v):
        return 0
    seen = {v}
    frontier = [v]
    for r in range(1, cap + 1):
        nxt = []
        for u in frontier:
            for x in neighbors(u):
                if x in seen:
                    continue
                if in_base_building(x):
                    return r
                seen.add(x)
                nxt.append(x)
        frontier = nxt
    return None


@dataclass
class BarbReport:
    n: int
    p: int
    radius: int
    s: int
    basepoint: LatticeClass
    ball: list
    fixed: set
    image: set
    barbs: set
    distances: dict
    method: str
    layers: list = field(repr=False, default_factory=list)

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "radius": self.radius,
            "s": self.s,
            "method": self.method,
            "basepoint": self.basepoint.to_json(),
            "ball_size": len(self.ball),
            "fixed_count": len(self.fixed),
            "image_count": len(self.image),
            "barbs": [
                {"vertex": b.to_json(), "distance_to_image": self.distances[b], "fixed": True}
                for b in sorted(self.barbs)
            ],
        }


def barb_search(n, p, radius, basepoint=None, layer_cache=None, method="descent", distance_cap=6):
    """Classify the ball of the given radius: Galois-fixed, in the base image, or barb.

    ``method="descent"`` decides membership in the base image with
    :func:`in_base_building`; ``method="enumerate"`` instead builds the image
    from a k-building BFS large enough to cover the ball. Distances from
    barbs to the image are 1-skeleton BFS distances.
    """
    _check_n(n)
    _check_p(p)
    if radius < 1:
        raise ContractError("radius must be >= 1")
    if method not in ("descent", "enumerate"):
        raise ConfigurationError(f"unknown barb method {method!r}")
    std = standard_vertex(n, p)
    basepoint = basepoint or std
    layers = bfs_layers(basepoint, radius, layer_cache)
    ball = [v for layer in layers for v in layer]
    fixed = {v for v in ball if is_fixed(v)}
    if method == "descent":
        image = {v for v in fixed if in_base_building(v)}
    else:
        k_rad = k_radius_for(radius + divisor_distance(std, basepoint))
        enumerated = base_building_image(n, p, k_rad)
        image = {v for v in ball if v in enumerated}
    barbs = fixed - image
    distances = {b: distance_to_image(b, distance_cap) for b in sorted(barbs)}
    return BarbReport(
        n=n, p=p, radius=radius, s=wildness(p), basepoint=basepoint, ball=ball,
        fixed=fixed, image=image, barbs=barbs, distances=distances, method=method, layers=layers,
    )


def act_diagonal(v, lam, times=1):
    """Apply ``diag(w^{-c_1}, ..., w^{-c_n})**times`` to a lattice class."""
    p = v.p
    rows = tuple(tuple(w(p, -c * times) * x for x in row) for c, row in zip(lam, v.matrix))
    return LatticeClass(rows, p)


def levi_blocks(lam):
    """Index blocks of equal ``c_i``, ordered by decreasing ``c``."""
    values = sorted(set(lam), reverse=True)
    return [tuple(i for i, c in enumerate(lam) if c == val) for val in values]


def levi_projection(v, lam):
    """Associated-graded classes of ``v`` for the filtration by ``c``-value.

    For the block with value ``c`` this is ``L ∩ V_{>=c}`` projected onto the
    block coordinates; for the top block it is simply ``L ∩ V_top``.
    """
    out = []
    ring = v.ring
    for block in levi_blocks(lam):
        cmin = lam[block[0]]
        upper = [i for i in range(len(lam)) if lam[i] >= cmin]
        inter = intersect_coordinates(v.matrix, upper, ring)
        rows = tuple(inter[upper.index(i)] for i in block)
        out.append((block, LatticeClass(rows, v.p)))
    return out


def boundary_flow(v, lam, steps=5):
    """The sequence ``lam^n . v`` (``n = 0..steps``) and its Levi-block limit.

    ``lam`` is an integer vector ``c``; one step multiplies ``e_i`` by
    ``w^{-c_i}``. Classes are taken up to homothety, so ``c`` only matters
    modulo the all-ones vector.
    """
    try:
        lam = tuple(int(c) for c in lam)
    except (TypeError, ValueError) as exc:
        raise ContractError(f"lambda must be an integer vector, got {lam!r}") from exc
    if len(lam) != v.n:
        raise ContractError(f"lambda has length {len(lam)}, expected {v.n}")
    if steps < 0:
        raise ContractError("steps must be >= 0")
    seq = []
    cur = v
    for k in range(steps + 1):
        if k:
            cur = act_diagonal(cur, lam)
        seq.append(cur)
    entries = []
    for k, u in enumerate(seq):
        entries.append({
            "n": k,
            "vertex": u,
            "fixed": is_fixed(u),
            "in_base": in_base_building(u),
            "divisors_from_start": elementary_divisors(v, u),
        })
    limit = levi_projection(v, lam)
    stable = all(levi_projection(u, lam) == limit for u in seq)
    blocks = []
    for block, cls in limit:
        blocks.append({
            "block": block,
            "vertex": cls,
            "fixed": is_fixed(cls),
            "in_base": in_base_building(cls),
        })
    return {"lam": lam, "steps": entries, "levi_limit": blocks, "levi_stable": stable}


def boundary_flow_json(report):
    return {
        "lambda": list(report["lam"]),
        "steps": [
            {
                "n": e["n"],
                "vertex": e["vertex"].to_json(),
                "fixed": e["fixed"],
                "in_base": e["in_base"],
                "divisors_from_start": list(e["divisors_from_start"]),
            }
            for e in report["steps"]
        ],
        "levi_limit": [
            {
                "block": [i + 1 for i in b["block"]],
                "vertex": b["vertex"].to_json(),
                "fixed": b["fixed"],
                "in_base": b["in_base"],
            }
            for b in report["levi_limit"]
        ],
        "levi_stable": report["levi_stable"],
    }
