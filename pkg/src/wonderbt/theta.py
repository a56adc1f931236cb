"""Seminorms on the coordinate algebra of the big cell.

A polynomial in the root coordinates ``xi_alpha`` (``alpha`` outside the Levi
roots) is recorded only through the norms ``|f_nu|`` of its coefficients.
Evaluating at the pair ``(x, y)`` of apartment points is max-times:

    |f|(x, y) = max_nu |f_nu| * prod_{alpha < 0} <alpha, y>^nu_alpha
                              * prod_{alpha > 0} <alpha, x>^nu_alpha

with ``0**0 = 1`` when ``y`` sits on a boundary stratum.
"""

from dataclasses import dataclass
from fractions import Fraction

from .apartment import ApartmentPoint, CompactifiedPoint
from .errors import ConfigurationError, ContractError
from .rootsys import build_root_system, parse_root, root_name


def _freeze_exps(exps):
    merged = {}
    for root, e in dict(exps).items():
        e = int(e)
        if e < 0:
            raise ContractError("exponents must be >= 0")
        if e:
            merged[tuple(root)] = merged.get(tuple(root), 0) + e
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class BigCellPoly:
    root_system: object
    monomials: tuple  # of (exps, norm); exps is a sorted tuple of (root, exponent)
    levi: frozenset = frozenset()

    def __post_init__(self):
        rs = self.root_system
        levi = frozenset(self.levi)
        object.__setattr__(self, "levi", levi)
        roots = rs.root_set
        merged = {}
        for exps, norm in self.monomials:
            norm = Fraction(norm)
            if norm < 0:
                raise ContractError("coefficient norms must be >= 0")
            key = _freeze_exps(exps)
            for root, _ in key:
                if root not in roots:
                    raise ContractError(f"{root} is not a root of {rs.name}")
                if _in_levi(root, levi):
                    raise ContractError(f"{root_name(root)} is a Levi root")
            # the norm of a sum of equal monomials is bounded by the larger one
            merged[key] = max(merged.get(key, Fraction(0)), norm)
        object.__setattr__(self, "monomials", tuple(sorted(merged.items())))

    @classmethod
    def monomial(cls, rs, exps, norm=1, levi=()):
        return cls(rs, ((exps, norm),), frozenset(levi))

    def is_zero(self):
        return all(n == 0 for _, n in self.monomials)

    def __mul__(self, other):
        """Max-times convolution of coefficient norms (an upper bound for the true product)."""
        _check_compatible(self, other)
        out = {}
        for e1, n1 in self.monomials:
            for e2, n2 in other.monomials:
                key = _freeze_exps(_add_exps(e1, e2))
                out[key] = max(out.get(key, Fraction(0)), n1 * n2)
        return BigCellPoly(self.root_system, tuple(out.items()), self.levi)

    def __add__(self, other):
        _check_compatible(self, other)
        return BigCellPoly(self.root_system, self.monomials + other.monomials, self.levi)

    def to_json(self):
        return {
            "type": self.root_system.name,
            "levi": sorted(f"a{i + 1}" for i in self.levi),
            "monomials": [
                {"exps": {root_name(r): e for r, e in exps}, "norm": str(n)}
                for exps, n in self.monomials
            ],
        }


def _in_levi(root, levi):
    return all(c == 0 or i in levi for i, c in enumerate(root))


def _add_exps(e1, e2):
    out = dict(e1)
    for r, e in e2:
        out[r] = out.get(r, 0) + e
    return out


def _check_compatible(f, g):
    if f.root_system != g.root_system or f.levi != g.levi:
        raise ContractError("polynomials live on different big cells")


def poly_from_json(data, rs=None):
    if not isinstance(data, dict) or "monomials" not in data:
        raise ConfigurationError("polynomial JSON needs a 'monomials' list")
    if rs is None:
        if "type" not in data:
            raise ConfigurationError("polynomial JSON needs a 'type' (or pass a root system)")
        rs = build_root_system(data["type"])
    levi = frozenset(int(str(a).lstrip("a")) - 1 for a in data.get("levi", []))
    monos = []
    for m in data["monomials"]:
        try:
            exps = {parse_root(k, rs.rank): int(v) for k, v in m.get("exps", {}).items()}
            monos.append((exps, Fraction(str(m["norm"]))))
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"bad monomial {m!r}") from exc
    try:
        return BigCellPoly(rs, tuple(monos), levi)
    except ContractError as exc:
        raise ConfigurationError(str(exc)) from exc


def gauss_norm(f):
    """Value at the base point: the largest coefficient norm."""
    return max((n for _, n in f.monomials), default=Fraction(0))


def _power(q, e):
    if isinstance(e, float) or Fraction(e).denominator != 1:
        return float(q) ** float(e)
    return Fraction(q) ** int(e)


def root_value(root, x, y):
    """``<root, y>`` for negative roots, ``<root, x>`` for positive ones."""
    if any(c < 0 for c in root):
        beta = tuple(-c for c in root)
        return y.negative_root_value(beta)
    if x.tau:
        raise ContractError("x must be an interior point")
    ex = x.exp_map
    return _power(x.q, sum(c * ex[i] for i, c in enumerate(root) if c))


def theta_eval(f, x, y):
    """Max-times evaluation of ``|f|`` at ``Theta(x, y)``."""
    rank = f.root_system.rank
    if x.rank != rank or y.rank != rank:
        raise ContractError("points and polynomial have different ranks")
    best = Fraction(0)
    for exps, norm in f.monomials:
        if norm == 0:
            continue
        val = norm
        for root, e in exps:
            val = val * root_value(root, x, y) ** e
            if val == 0:
                break
        if val > best:
            best = val
    return best


def base_point(rank, q=2):
    return ApartmentPoint((0,) * rank, q)


@dataclass(frozen=True)
class LinearForm:
    """``phi = sum phi_alpha xi_alpha`` over the absolute roots restricting to ``relative``."""

    relative: object
    coefficients: tuple  # of (root, norm)

    def __post_init__(self):
        coeffs = tuple(sorted((tuple(r), Fraction(n)) for r, n in dict(self.coefficients).items()))
        if not coeffs or all(n == 0 for _, n in coeffs) or any(n < 0 for _, n in coeffs):
            raise ContractError("a linear form needs nonnegative, not all zero, coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    def as_poly(self, rs, levi=()):
        return BigCellPoly(rs, tuple(({r: 1}, n) for r, n in self.coefficients), frozenset(levi))

    def to_json(self):
        return {
            "relative_root": self.relative if isinstance(self.relative, str) else root_name(self.relative),
            "coefficients": {root_name(r): str(n) for r, n in self.coefficients},
        }


@dataclass(frozen=True)
class Separation:
    form: LinearForm
    values: tuple

    def to_json(self):
        return {"form": self.form.to_json(), "values": [str(v) for v in self.values]}


def separating_form(y1, y2, rs, grouping=None, x=None):
    """A linear form on a root group whose seminorm tells ``y1`` and ``y2`` apart.

    Both points must lie in the same stratum ``tau``. The candidate root groups
    are the negative roots of the Levi of ``tau`` (supports avoiding ``tau``),
    lowest height first, grouped by ``grouping`` (absolute root -> relative
    root label; identity by default).
    """
    if y1.tau != y2.tau:
        raise ContractError("points lie in different strata")
    if y1 == y2:
        raise ContractError("no separator exists: the points are equal")
    x = x or base_point(rs.rank, y1.q)
    tau = y1.tau
    candidates = [r for r in rs.negative_roots if not any(c and i in tau for i, c in enumerate(r))]
    candidates.sort(key=lambda r: (-sum(r), r))
    grouping = grouping or {}
    groups = {}
    for r in candidates:
        groups.setdefault(grouping.get(r, r), []).append(r)
    for label, members in groups.items():
        form = LinearForm(label, tuple((r, 1) for r in members))
        poly = form.as_poly(rs)
        v1, v2 = theta_eval(poly, x, y1), theta_eval(poly, x, y2)
        if v1 != v2:
            return Separation(form, (v1, v2))
    raise ContractError("no separator exists for this relative grouping")


def seminorm_axioms_check(f, g, x, y):
    """Submultiplicativity, the ultrametric inequality, and multiplicativity on monomials."""
    tf, tg = theta_eval(f, x, y), theta_eval(g, x, y)
    rs = f.root_system
    mono_ok = True
    for e1, _ in f.monomials:
        for e2, _ in g.monomials:
            m1 = BigCellPoly(rs, ((e1, 1),), f.levi)
            m2 = BigCellPoly(rs, ((e2, 1),), f.levi)
            if theta_eval(m1 * m2, x, y) != theta_eval(m1, x, y) * theta_eval(m2, x, y):
                mono_ok = False
    return {
        "submultiplicative": theta_eval(f * g, x, y) <= tf * tg,
        "ultrametric": theta_eval(f + g, x, y) <= max(tf, tg),
        "monomial_multiplicative": mono_ok,
        "base_point_bound": theta_eval(f * g, base_point(rs.rank, x.q), base_point(rs.rank, x.q))
        <= gauss_norm(f) * gauss_norm(g),
    }


def compactified(rank, tau, exps, q=2):
    return CompactifiedPoint(rank, frozenset(tau), tuple(dict(exps).items()), q)
