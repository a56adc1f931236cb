"""Lattices over a DVR (``Z_(p)`` or ``Z_p[w]``) and their canonical forms.

A lattice is the column span of an invertible ``n x n`` matrix; matrices are
tuples of rows. The canonical form is the lower-triangular column Hermite
normal form with pivots ``pi**d_i`` and every entry left of a pivot reduced to
the fixed residue representatives of :mod:`wonderbt.padic`. Dividing out the
homothety (``min d_i = 0``) gives the canonical basis of a vertex class, so two
lattices are homothetic iff their class matrices are equal as tuples.
"""

from .errors import ContractError
from .padic import INF, QuadElt, QuadRing, RationalRing, format_quad


def columns(matrix):
    return [list(c) for c in zip(*matrix)]


def from_columns(cols):
    return tuple(zip(*cols))


def _echelon(cols, n, ring):
    """Column echelon form in place; returns the pivot valuations."""
    pivots = []
    m = len(cols)
    for i in range(n):
        best, best_v = None, INF
        for j in range(i, m):
            x = cols[j][i]
            if x:
                v = ring.val(x)
                if v < best_v:
                    best, best_v = j, v
        if best is None:
            raise ContractError("matrix is singular (columns do not span a full lattice)")
        cols[i], cols[best] = cols[best], cols[i]
        pd = ring.pi_pow(best_v)
        unit_inv = pd / cols[i][i]
        cols[i] = [x * unit_inv for x in cols[i]]
        pd_inv = 1 / pd
        for j in range(i + 1, m):
            x = cols[j][i]
            if x:
                f = x * pd_inv
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[i])]
        pivots.append(best_v)
    for j in range(n, m):
        if any(cols[j]):
            raise AssertionError("echelon left a nonzero surplus column")
    del cols[n:]
    return pivots


def _reduce(cols, pivots, ring):
    n = len(pivots)
    for i in range(n):
        d = pivots[i]
        pd_inv = 1 / ring.pi_pow(d)
        for j in range(i):
            x = cols[j][i]
            r = ring.reduce(x, d)
            if x != r:
                f = (x - r) * pd_inv
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[i])]


def hnf(matrix, ring, homothety=False):
    """Canonical lower-triangular column HNF of the column span of ``matrix``.

    ``matrix`` may have more columns than rows (a generating set).
    With ``homothety=True`` the result is additionally scaled so the smallest
    pivot exponent is 0.
    """
    n = len(matrix)
    cols = [[ring.coerce(x) for x in c] for c in zip(*matrix)]
    pivots = _echelon(cols, n, ring)
    if homothety:
        shift = min(pivots)
        if shift:
            s = ring.pi_pow(-shift)
            cols = [[x * s for x in c] for c in cols]
            pivots = [d - shift for d in pivots]
    _reduce(cols, pivots, ring)
    return from_columns(cols)


def pivot_exponents(h, ring):
    return tuple(ring.val(h[i][i]) for i in range(len(h)))


def inverse(matrix, ring):
    n = len(matrix)
    aug = [[ring.coerce(x) for x in row] + [ring.one if i == j else ring.zero for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ContractError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_mul(a, b):
    bt = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            new.append(acc if acc is not None else row[0] * 0)
        out.append(tuple(new))
    return tuple(out)


def smith_valuations(matrix, ring):
    """Valuations of the Smith invariants of an invertible matrix over the DVR."""
    a = [[ring.coerce(x) for x in row] for row in matrix]
    n = len(a)
    out = []
    for k in range(n):
        best, best_v = None, INF
        for i in range(k, n):
            for j in range(k, n):
                if a[i][j]:
                    v = ring.val(a[i][j])
                    if v < best_v:
                        best, best_v = (i, j), v
        if best is None:
            raise ContractError("matrix is singular")
        i, j = best
        a[k], a[i] = a[i], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for j in range(k + 1, n):
            a[k][j] = ring.zero
        out.append(best_v)
    return tuple(sorted(out))


def elementary_divisors(m1, m2, ring):
    """Exponents ``d_1 <= ... <= d_n`` with ``M2 = sum pi^{d_i} O f_i`` for a basis adapted to ``M1``."""
    return smith_valuations(mat_mul(inverse(m1, ring), m2), ring)


def intersect_coordinates(matrix, keep, ring):
    """Basis (rows ``keep`` only) of ``L ∩ span(e_i : i in keep)``."""
    n = len(matrix)
    keep = list(keep)
    drop = [i for i in range(n) if i not in keep]
    order = drop + keep
    permuted = tuple(matrix[i] for i in order)
    h = hnf(permuted, ring)
    k = len(drop)
    return tuple(tuple(h[k + r][k + c] for c in range(len(keep))) for r in range(len(keep)))


def rational_part(matrix, p):
    """Basis of ``L ∩ Q^n`` for an ``O' = Z_p[w]``-lattice ``L`` (a ``Z_(p)``-lattice)."""
    n = len(matrix)
    gens = []
    for col in zip(*matrix):
        # x = a + b w and w x = p b + a w, as (w-part, rational part)
        gens.append([x.b for x in col] + [x.a for x in col])
        gens.append([x.a for x in col] + [p * x.b for x in col])
    big = tuple(zip(*gens))
    ring = RationalRing(p)
    h = hnf(big, ring)
    return tuple(tuple(h[n + r][n + c] for c in range(n)) for r in range(n))


class LatticeClass:
    """Homothety class of a lattice, stored by its canonical basis.

    ``kind`` is ``"quad"`` for ``Z_p[w]``-lattices (vertices of the building over
    ``Q_p(sqrt p)``) and ``"rational"`` for ``Z_p``-lattices (vertices over ``Q_p``).
    """

    __slots__ = ("matrix", "p", "kind", "_key")

    def __init__(self, matrix, p, kind="quad", canonical=False):
        ring = make_ring(kind, p)
        self.p = p
        self.kind = kind
        self.matrix = matrix if canonical else hnf(matrix, ring, homothety=True)
        self._key = tuple((x.a, x.b) if kind == "quad" else x for row in self.matrix for x in row)

    @property
    def ring(self):
        return make_ring(self.kind, self.p)

    @property
    def n(self):
        return len(self.matrix)

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, LatticeClass) and self.kind == other.kind and \
            self.p == other.p and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"LatticeClass({self.to_json()}, p={self.p})"

    def pivots(self):
        return pivot_exponents(self.matrix, self.ring)

    def to_json(self):
        if self.kind == "quad":
            return [[format_quad(x) for x in row] for row in self.matrix]
        return [[str(x) for x in row] for row in self.matrix]


_RINGS = {}


def make_ring(kind, p):
    key = (kind, p)
    if key not in _RINGS:
        _RINGS[key] = QuadRing(p) if kind == "quad" else RationalRing(p)
    return _RINGS[key]


def quad_matrix(rows, p):
    return tuple(tuple(x if isinstance(x, QuadElt) else QuadElt(x, 0, p) for x in row) for row in rows)
