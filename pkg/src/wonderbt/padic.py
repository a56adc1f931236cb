"""Exact arithmetic in Q and Q(sqrt p) with p-adic valuations.

``QuadElt(a, b, p)`` is ``a + b*w`` with ``w**2 = p``. Inside ``Q_p(sqrt p)``
the valuation is normalized so that ``v(w) = 1`` and ``v(p) = 2``; every
element the package touches lives in the subfield ``Q(sqrt p)``, so no
truncation is ever needed.
"""

import math
import re
from fractions import Fraction

INF = math.inf


def vp(x, p):
    """p-adic valuation of a rational (``inf`` for zero)."""
    x = Fraction(x)
    if x == 0:
        return INF
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def residue_rep(x, p, m):
    """Canonical representative of ``x mod p**m Z_(p)``.

    The representative is ``c / p**s`` with ``s = max(0, -v_p(x))`` and
    ``0 <= c < p**(m + s)``; two rationals get the same representative iff
    they agree modulo ``p**m Z_(p)``.
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    s = max(0, -vp(x, p))
    if m + s <= 0:
        return Fraction(0)
    mod = p ** (m + s)
    y = x * p ** s
    c = (y.numerator * pow(y.denominator, -1, mod)) % mod
    return Fraction(c, p ** s)


class QuadElt:
    __slots__ = ("a", "b", "p")

    def __init__(self, a=0, b=0, p=2):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self.p = p

    @classmethod
    def uniformizer_power(cls, d, p):
        """``w**d`` for any integer ``d``."""
        half, odd = divmod(d, 2)
        scale = Fraction(p) ** half
        return cls(0, scale, p) if odd else cls(scale, 0, p)

    def _coerce(self, other):
        if isinstance(other, QuadElt):
            return other
        return QuadElt(other, 0, self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElt(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadElt(self.a - o.a, self.b - o.b, self.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QuadElt(-self.a, -self.b, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadElt(self.a * o.a + self.p * self.b * o.b, self.a * o.b + self.b * o.a, self.p)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.p * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadElt division by zero")
        return QuadElt(self.a / n, -self.b / n, self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, QuadElt):
            return self.a == other.a and self.b == other.b
        return self.b == 0 and self.a == other

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadElt({format_quad(self)!r}, p={self.p})"

    def conj(self):
        """The Galois involution ``a + b w -> a - b w``."""
        return QuadElt(self.a, -self.b, self.p)

    def valuation(self):
        va, vb = vp(self.a, self.p), vp(self.b, self.p)
        return min(2 * va, 2 * vb + 1)

    def is_rational(self):
        return self.b == 0


def format_quad(x):
    """``"a/b+c/d*w"`` style string; rational entries print as plain fractions."""
    a, b = x.a, x.b
    if b == 0:
        return str(a)
    bs = "w" if b == 1 else "-w" if b == -1 else f"{b}*w"
    if a == 0:
        return bs
    return f"{a}{bs}" if bs.startswith("-") else f"{a}+{bs}"


_RAT = r"\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^[+-]?{_RAT}$")
# coefficient part of "a+b*w" once the trailing "*w"/"w" is removed
_WPART_RE = re.compile(rf"^(?:([+-]?{_RAT})(?=[+-]))?([+-]?)({_RAT})?$")


def parse_quad(text, p):
    s = text.replace(" ", "")
    if _RAT_RE.match(s):
        return QuadElt(Fraction(s), 0, p)
    if not s.endswith("w"):
        raise ValueError(f"cannot parse {text!r} as a + b*w")
    head = s[:-1]
    if head.endswith("*"):
        head = head[:-1]
        if not head or head[-1] in "+-":
            raise ValueError(f"cannot parse {text!r} as a + b*w")
    m = _WPART_RE.match(head)
    if not m:
        raise ValueError(f"cannot parse {text!r} as a + b*w")
    a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
    b = Fraction(m.group(3)) if m.group(3) else Fraction(1)
    if m.group(2) == "-":
        b = -b
    return QuadElt(a, b, p)


class RationalRing:
    """``Z_(p)`` inside ``Q``: uniformizer ``p``."""

    ramification = 1

    def __init__(self, p):
        self.p = p
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def val(self, x):
        return vp(x, self.p)

    def pi_pow(self, d):
        return Fraction(self.p) ** d

    def reduce(self, x, d):
        return residue_rep(x, self.p, d)

    def coerce(self, x):
        return Fraction(x)

    def lift_residue(self, c):
        return Fraction(c)


class QuadRing:
    """``Z_p[w]`` inside ``Q(w)``, ``w**2 = p``: uniformizer ``w``, residue field F_p."""

    ramification = 2

    def __init__(self, p):
        self.p = p
        self.zero = QuadElt(0, 0, p)
        self.one = QuadElt(1, 0, p)

    def val(self, x):
        return x.valuation() if x else INF

    def pi_pow(self, d):
        return QuadElt.uniformizer_power(d, self.p)

    def reduce(self, x, d):
        # w^d O = {a + b w : v_p(a) >= ceil(d/2), v_p(b) >= ceil((d-1)/2)}
        ma = -((-d) // 2)
        mb = -((-(d - 1)) // 2)
        return QuadElt(residue_rep(x.a, self.p, ma), residue_rep(x.b, self.p, mb), self.p)

    def coerce(self, x):
        return x if isinstance(x, QuadElt) else QuadElt(x, 0, self.p)

    def lift_residue(self, c):
        return QuadElt(c, 0, self.p)
