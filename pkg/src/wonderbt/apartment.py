"""Compactified apartments, cocharacter flows and the Galois fixed-point pipeline.

A point of the apartment is a positive character ``X^* -> R_{>0}``, stored by
its log-base-``q`` values on the simple roots (the "log coordinates"); the
multiplicative value on ``alpha_i`` is ``q**v_i``. A point of the partial
compactification attached to the chosen basis is a stratum ``tau`` plus log
values on ``Delta - tau``: the value on a negative root ``-beta`` vanishes iff
the support of ``beta`` meets ``tau``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._linalg import identity, inverse, mat_mul, mat_vec, normalize, transpose
from .errors import ConfigurationError, ContractError, DomainError
from .rootsys import (
    COROOT,
    Coweight,
    build_root_system,
    root_name,
)
from .wonderful import orbit_descriptor

DEFAULT_Q = Fraction(2)


def exact_log(x, q, max_den=64):
    """``log_q(x)`` as a Fraction when it is rational, else ``None``."""
    x, q = Fraction(x), Fraction(q)
    if x <= 0:
        raise DomainError(f"coordinate {x} is not positive")
    if x == 1:
        return Fraction(0)
    guess = Fraction(math.log(x) / math.log(q)).limit_denominator(max_den)
    a, b = guess.numerator, guess.denominator
    if x ** b == q ** a:
        return guess
    return None


def _check_q(q):
    q = Fraction(q)
    if q <= 1:
        raise ConfigurationError(f"base q must be > 1, got {q}")
    return q


@dataclass(frozen=True)
class CompactifiedPoint:
    """Point of the partial compactification: stratum ``tau`` and log values on the rest.

    ``exps[i]`` is ``log_q <alpha_i, z>`` for ``i`` not in ``tau`` (Fractions, or
    floats when built from values that are not rational powers of ``q``).
    """

    rank: int
    tau: frozenset
    exps: tuple  # sorted (index, exponent) pairs for indices outside tau
    q: Fraction = DEFAULT_Q
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "tau", frozenset(self.tau))
        object.__setattr__(self, "q", _check_q(self.q))
        exps = tuple(sorted((int(i), normalize(e) if isinstance(e, (int, Fraction)) else e)
                            for i, e in dict(self.exps).items()))
        if {i for i, _ in exps} != set(range(self.rank)) - self.tau:
            raise ContractError("coordinates must be given exactly on the simple roots outside tau")
        object.__setattr__(self, "exps", exps)

    @property
    def exp_map(self):
        return dict(self.exps)

    def value(self, i):
        """Multiplicative value on ``alpha_i`` (``i`` outside tau)."""
        e = self.exp_map[i]
        if isinstance(e, float):
            return float(self.q) ** e
        if Fraction(e).denominator == 1:
            return self.q ** int(e)
        return float(self.q) ** float(e)

    @property
    def coords(self):
        return {i: self.value(i) for i, _ in self.exps}

    def negative_root_value(self, beta):
        """Value on ``-beta`` for a positive root ``beta`` (simple-root coordinates)."""
        support = {i for i, c in enumerate(beta) if c}
        if support & self.tau:
            return 0
        e = -sum(c * self.exp_map[i] for i, c in enumerate(beta) if c)
        if isinstance(e, float) or Fraction(e).denominator != 1:
            return float(self.q) ** float(e)
        return self.q ** int(e)

    def to_json(self):
        return {
            "tau": sorted(f"a{i + 1}" for i in self.tau),
            "coords": {f"a{i + 1}": format_value(e, self.q) for i, e in self.exps},
            "q": str(self.q),
        }


def ApartmentPoint(exps, q=DEFAULT_Q):
    """Interior point with the given log coordinates (a sequence indexed by Delta)."""
    exps = tuple(exps)
    return CompactifiedPoint(len(exps), frozenset(), tuple(enumerate(exps)), q)


def point_from_values(values, q=DEFAULT_Q, tau=()):
    """Build a point from multiplicative values; irrational logs fall back to floats."""
    q = _check_q(q)
    tau = frozenset(tau)
    values = dict(values)
    rank = len(values) + len(tau)
    exps, exact = {}, True
    for i, x in values.items():
        e = exact_log(x, q)
        if e is None:
            exact = False
            e = math.log(Fraction(x)) / math.log(q)
        exps[i] = e
    return CompactifiedPoint(rank, tau, tuple(exps.items()), q, exact)


def format_value(e, q):
    if isinstance(e, float):
        return repr(float(q) ** e)
    e = Fraction(e)
    if e.denominator == 1:
        return str(q ** int(e))
    return f"{q}^({e})"


def parse_value(text, q):
    """``"3/2"`` or ``"2^(1/2)"`` -> log_q exponent (Fraction, or float if inexact)."""
    text = str(text).strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        base, exp = Fraction(base), Fraction(exp.strip("()"))
        lb = exact_log(base, q)
        if lb is None:
            return math.log(base) / math.log(q) * float(exp)
        return lb * exp
    x = Fraction(text)
    e = exact_log(x, q)
    return e if e is not None else math.log(x) / math.log(q)


def point_from_json(data, rank=None):
    if not isinstance(data, dict) or "coords" not in data:
        raise ConfigurationError("point JSON needs a 'coords' object")
    try:
        q = _check_q(Fraction(str(data.get("q", "2"))))
        tau = frozenset(_simple_index(a) for a in data.get("tau", []))
        exps = {_simple_index(a): parse_value(v, q) for a, v in data["coords"].items()}
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad point JSON: {exc}") from exc
    r = rank if rank is not None else len(exps) + len(tau)
    exact = not any(isinstance(e, float) for e in exps.values())
    try:
        return CompactifiedPoint(r, tau, tuple(exps.items()), q, exact)
    except ContractError as exc:
        raise ConfigurationError(str(exc)) from exc


def _simple_index(name):
    name = str(name).strip()
    if not name.startswith("a") or not name[1:].isdigit() or int(name[1:]) < 1:
        raise ConfigurationError(f"{name!r} is not a simple root name like 'a1'")
    return int(name[1:]) - 1


def log_coords(x):
    """Log coordinates of an interior point; raises if inexact."""
    if x.tau:
        raise DomainError("log coordinates are only defined on the interior")
    if not x.exact:
        raise DomainError("point has irrational log coordinates (inexact fallback)")
    return tuple(x.exp_map[i] for i in range(x.rank))


def exp_point(v, q=DEFAULT_Q):
    return ApartmentPoint(v, q)


def cochar_flow(x, lam, n, rs):
    """``lambda^n . x``: the value on ``alpha`` is multiplied by ``q**(n <alpha, lambda>)``."""
    if n < 0:
        raise ContractError("flow time must be >= 0")
    pair = rs.coweight_pairings(lam)
    exps = {i: e + n * pair[i] for i, e in x.exps}
    return CompactifiedPoint(x.rank, x.tau, tuple(exps.items()), x.q, x.exact)


def limit_point(x, lam, rs):
    """Limit of ``cochar_flow(x, lam, n)`` as ``n -> infinity``."""
    pair = rs.coweight_pairings(lam)
    if any(v < 0 for v in pair):
        raise DomainError("cocharacter is not dominant: the flow leaves this partial compactification")
    tau = frozenset(i for i, v in enumerate(pair) if v > 0) | x.tau
    exps = {i: e for i, e in x.exps if i not in tau}
    return CompactifiedPoint(x.rank, tau, tuple(exps.items()), x.q, x.exact)


def stratum_of(z, rs):
    """``(tau, OrbitDescriptor)``, after checking the vanishing pattern on negative roots."""
    desc = orbit_descriptor(rs, z.tau)
    for beta in rs.positive_roots:
        neg = tuple(-c for c in beta)
        val = z.negative_root_value(beta)
        if neg in desc.unip_minus and val != 0:
            raise AssertionError(f"value on {root_name(neg)} should vanish")
        if neg in desc.levi_roots and not val > 0:
            raise AssertionError(f"value on {root_name(neg)} should be positive")
    return z.tau, desc


# -- metric --------------------------------------------------------------

def symmetrizer(cartan):
    """Positive ``d`` with ``C[i][j] d_j = C[j][i] d_i`` (half squared root lengths)."""
    r = len(cartan)
    d = [None] * r
    d[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(r):
                if d[i] is not None and d[j] is None and cartan[i][j]:
                    d[j] = cartan[j][i] * d[i] / cartan[i][j]
                    changed = True
    return d


def coroot_gram(rs):
    """W-invariant Gram matrix of the simple coroots, scaled to integers."""
    c = rs.cartan_matrix
    d = symmetrizer(c)
    g = [[Fraction(c[i][j]) / d[i] for j in range(rs.rank)] for i in range(rs.rank)]
    den = math.lcm(*[x.denominator for row in g for x in row])
    return tuple(tuple(normalize(x * den) for x in row) for row in g)


def log_metric(rs):
    """Inner product on log coordinates: ``C^-T G C^-1`` (log coords are ``C`` times coroot coords)."""
    cinv = inverse(rs.cartan_matrix)
    g = coroot_gram(rs)
    return tuple(tuple(normalize(x) for x in row) for row in mat_mul(mat_mul(transpose(cinv), g), cinv))


def _check_metric(m):
    n = len(m)
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
        raise ContractError("inner product is not symmetric")
    # Sylvester: leading principal minors positive
    for k in range(1, n + 1):
        if _det([row[:k] for row in m[:k]]) <= 0:
            raise ContractError("inner product is not positive definite")


def _det(m):
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def sqnorm(u, m):
    return sum(u[i] * m[i][j] * u[j] for i in range(len(u)) for j in range(len(u)) if u[i] and u[j])


def sqdist(a, b, m):
    return sqnorm([x - y for x, y in zip(a, b)], m)


# -- minimal enclosing ball ---------------------------------------------------

def _circumball(pts, m):
    """Center equidistant from ``pts`` inside their affine hull, or ``None`` if impossible."""
    p0 = pts[0]
    us = [[x - y for x, y in zip(p, p0)] for p in pts[1:]]
    basis = []
    for u in us:
        trial = basis + [u]
        gram = [[2 * _ip(a, b, m) for b in trial] for a in trial]
        if _det(gram) != 0:
            basis = trial
    if basis:
        gram = [[2 * _ip(a, b, m) for b in basis] for a in basis]
        rhs = [_ip(u, u, m) for u in basis]
        coef = mat_vec(inverse(gram), rhs)
        off = [sum(c * u[k] for c, u in zip(coef, basis)) for k in range(len(p0))]
    else:
        off = [0] * len(p0)
    center = tuple(normalize(Fraction(x) + y) for x, y in zip(p0, off))
    r2 = sqdist(center, p0, m)
    if any(sqdist(center, p, m) != r2 for p in pts[1:]):
        return None
    return center, r2


def _ip(a, b, m):
    return sum(a[i] * m[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if a[i] and b[j])


def _welzl(pts, boundary, m, dim):
    if not pts or len(boundary) == dim + 1:
        return _circumball(boundary, m) if boundary else None
    p, rest = pts[0], pts[1:]
    ball = _welzl(rest, boundary, m, dim)
    if ball is not None and sqdist(ball[0], p, m) <= ball[1]:
        return ball
    return _welzl(rest, boundary + [p], m, dim)


def _unique_points(points):
    pts = sorted({tuple(normalize(Fraction(x)) for x in p) for p in points})
    if not pts:
        raise ContractError("circumcenter of an empty set")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise ContractError("points have different dimensions")
    return pts


def min_enclosing_ball(points, inner_product=None):
    """``(center, squared_radius)`` of the minimal enclosing ball, exactly (Welzl)."""
    pts = _unique_points(points)
    dim = len(pts[0])
    m = inner_product or identity(dim)
    _check_metric(m)
    ball = _welzl(pts, [], m, dim)
    if ball is None:
        raise AssertionError("Welzl recursion produced no ball")
    return ball


def circumcenter(points, inner_product=None):
    return min_enclosing_ball(points, inner_product)[0]


def circumcenter_bruteforce(points, inner_product=None):
    """Oracle: smallest circumball over all support subsets that encloses everything."""
    pts = _unique_points(points)
    dim = len(pts[0])
    m = inner_product or identity(dim)
    best = None
    for k in range(1, min(len(pts), dim + 1) + 1):
        for sub in combinations(pts, k):
            ball = _circumball(list(sub), m)
            if ball is None:
                continue
            c, r2 = ball
            if all(sqdist(c, p, m) <= r2 for p in pts) and (best is None or r2 < best[1]):
                best = ball
    return best


# -- fibers and Galois actions ------------------------------------------------

@dataclass(frozen=True)
class FiberSpec:
    """The fibre over ``target``: log coordinates outside ``tau`` pinned to the target's."""

    tau: frozenset
    target: CompactifiedPoint

    def __post_init__(self):
        object.__setattr__(self, "tau", frozenset(self.tau))
        if self.target.tau != self.tau:
            raise ContractError("fiber target must lie in the stratum tau")

    @property
    def pinned(self):
        return self.target.exp_map

    def contains(self, v):
        return all(v[i] == e for i, e in self.pinned.items())


def project_to_fiber(v, fiber, inner_product=None):
    """Orthogonal projection onto ``{z : z_j = target_j for j outside tau}``."""
    n = len(v)
    m = inner_product or identity(n)
    pinned = fiber.pinned
    if any(i >= n for i in pinned):
        raise ContractError("fiber constraints do not fit the dimension")
    free = sorted(fiber.tau)
    fixed = sorted(pinned)
    d_j = [Fraction(pinned[j]) - v[j] for j in fixed]
    out = list(v)
    for j, dj in zip(fixed, d_j):
        out[j] = out[j] + dj
    if free:
        m_ff = [[m[a][b] for b in free] for a in free]
        m_fj = [[m[a][b] for b in fixed] for a in free]
        rhs = [-x for x in mat_vec(m_fj, d_j)] if fixed else [0] * len(free)
        d_f = mat_vec(inverse(m_ff), rhs)
        for a, da in zip(free, d_f):
            out[a] = out[a] + da
    return tuple(normalize(Fraction(x)) for x in out)


@dataclass(frozen=True)
class AffineMap:
    """``v -> linear . v + translation`` on log coordinates."""

    linear: tuple
    translation: tuple

    def __call__(self, v):
        return tuple(normalize(Fraction(x) + t) for x, t in zip(mat_vec(self.linear, v), self.translation))

    def compose(self, other):
        """``self after other``."""
        lin = mat_mul(self.linear, other.linear)
        tr = tuple(Fraction(x) + t for x, t in zip(mat_vec(self.linear, other.translation), self.translation))
        return AffineMap(tuple(tuple(normalize(x) for x in row) for row in lin), tuple(normalize(x) for x in tr))

    @property
    def key(self):
        return (self.linear, self.translation)


def log_linear_part(gamma):
    """Action on log coordinates induced by ``gamma`` on ``X^*``: ``(gamma^-1)^T``."""
    return tuple(tuple(normalize(x) for x in row) for row in transpose(inverse(gamma.matrix)))


def affine_from_automorphism(gamma, translation=None):
    lin = log_linear_part(gamma)
    tr = tuple(normalize(Fraction(t)) for t in (translation or (0,) * len(lin)))
    return AffineMap(lin, tr)


@dataclass
class AffineGaloisAction:
    """A finite group of affine maps generated by the given ones."""

    generators: tuple
    max_order: int = 48
    maps: list = field(default_factory=list)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if not self.generators:
            raise ContractError("an action needs at least one generator (use trivial_action)")
        dim = len(self.generators[0].translation)
        ident = AffineMap(identity(dim), (0,) * dim)
        seen = {ident.key: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for h in self.generators:
                    gh = h.compose(g)
                    if gh.key not in seen:
                        seen[gh.key] = gh
                        nxt.append(gh)
                        if len(seen) > self.max_order:
                            raise ContractError("generated group is infinite or exceeds the declared order")
            frontier = nxt
        self.maps = sorted(seen.values(), key=lambda g: (g.linear != ident.linear, g.key))

    @property
    def order(self):
        return len(self.maps)

    def orbit(self, v):
        return sorted({g(v) for g in self.maps})

    def is_fixed(self, v):
        v = tuple(normalize(Fraction(x)) for x in v)
        return all(g(v) == v for g in self.maps)

    def is_isometric(self, m):
        return all(mat_mul(mat_mul(transpose(g.linear), m), g.linear) == tuple(tuple(normalize(x) for x in row) for row in m)
                   for g in self.maps)

    def preserves_fiber(self, fiber):
        pinned = fiber.pinned
        free = fiber.tau
        for g in self.maps:
            for j in pinned:
                if any(g.linear[j][a] for a in free):
                    return False
                val = sum(g.linear[j][k] * pinned[k] for k in pinned) + g.translation[j]
                if val != pinned[j]:
                    return False
        return True

    def fixes_direction(self, direction):
        return all(tuple(normalize(x) for x in mat_vec(g.linear, direction)) ==
                   tuple(normalize(x) for x in direction) for g in self.maps)


def trivial_action(rank):
    return AffineGaloisAction((AffineMap(identity(rank), (0,) * rank),))


# -- the fixed-point pipeline -------------------------------------------------

@dataclass
class PipelineReport:
    orbit: list
    circumcenter: tuple
    x_tilde: tuple
    flow: list
    limit: CompactifiedPoint
    target: CompactifiedPoint
    flags: dict
    checks: dict

    @property
    def ok(self):
        return all(self.flags.values())

    def to_json(self, q):
        fmt = lambda v: [str(Fraction(x)) for x in v]
        return {
            "orbit": [fmt(v) for v in self.orbit],
            "circumcenter": fmt(self.circumcenter),
            "x_tilde": fmt(self.x_tilde),
            "flow": [{"n": n, "log_coords": fmt(v), "fixed": f} for n, (v, f) in enumerate(self.flow)],
            "limit": self.limit.to_json(),
            "target": self.target.to_json(),
            "flags": dict(self.flags),
            "checks": dict(self.checks),
        }


def lambda_pattern_ok(rs, lam, tau):
    """``<alpha, lam>`` is positive on tau and zero on the other simple roots."""
    pair = rs.coweight_pairings(lam)
    return all((v > 0) if i in tau else (v == 0) for i, v in enumerate(pair))


def theorem16_pipeline(x0, action, fiber, lam, rs, steps=5, inner_product=None):
    """Orbit -> circumcenter -> projection to the fibre -> flow -> limit, with fixed-point flags."""
    m = inner_product or log_metric(rs)
    v0 = log_coords(x0)
    tau = fiber.tau
    pair = rs.coweight_pairings(lam)
    checks = {
        "lambda_pattern": lambda_pattern_ok(rs, lam, tau),
        "lambda_invariant": action.fixes_direction(pair),
        "fiber_stable": action.preserves_fiber(fiber),
        "isometric": action.is_isometric(m),
    }
    for name, ok in checks.items():
        if not ok:
            raise ContractError(f"pipeline precondition failed: {name}")
    orbit = action.orbit(v0)
    center = circumcenter(orbit, m)
    x_tilde = project_to_fiber(center, fiber, m)
    flow = []
    for n in range(steps + 1):
        v = tuple(normalize(x + n * p) for x, p in zip(x_tilde, pair))
        flow.append((v, action.is_fixed(v)))
    limit = limit_point(ApartmentPoint(x_tilde, x0.q), lam, rs)
    flags = {
        "x_tilde_fixed": action.is_fixed(x_tilde),
        "flow_fixed": all(f for _, f in flow),
        "limit_is_target": limit == fiber.target,
    }
    return PipelineReport(orbit, center, x_tilde, flow, limit, fiber.target, flags, checks)


def example17_cocharacter(rs=None):
    """``t -> diag(t^2, t^-4, t^2)`` in the ``A_2`` coroot basis (pairings ``(6, -6)``)."""
    rs = rs or build_root_system("A", 2)
    # <e1 - e2, c> = 6, <e2 - e3, c> = -6
    return Coweight(mat_vec(rs.cartan_inverse, (6, -6)), COROOT)
