"""Base rings and their fraction fields.

Four kinds of base are supported:

* ``Z`` and ``Q``: elements are :class:`fractions.Fraction`.
* ``Q[t]``: fraction field Q(t), elements are :class:`RationalFunction`.
* ``cone``: the normal but non-factorial ring Q[a,b,c]/(ac - b^2), realised
  inside Q[x,y] by a = x^2, b = xy, c = y^2.  Its fraction field is Q(a, b)
  with c = b^2/a.

Every element handed out by a :class:`BaseRing` lives in its fraction field;
membership in the ring itself is decided on demand by :meth:`BaseRing.contains`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from sympy import QQ
from sympy.polys.rings import PolyElement, ring as poly_ring

from delpair.errors import SpecializationPole, UnsupportedRing


def _qq(x) -> Any:
    """Convert an int/Fraction/mpq into the sympy ground domain QQ."""
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ(x)


@lru_cache(maxsize=None)
def _sympy_ring(names: str):
    # one ring object per symbol set; elements of equal-but-distinct rings do not mix
    return poly_ring(names, QQ)[0]


def qq_to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class RationalFunction:
    """An element num/den of a rational function field over Q.

    ``den`` is kept with leading coefficient 1 and coprime to ``num``.  The
    common case den == 1 skips every gcd, which is what makes Q[t] arithmetic
    affordable in the property suites.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyElement, den: PolyElement | None = None, *, _normal=False):
        R = num.ring
        if den is None:
            den = R.one
        if not _normal and den != R.one:
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            g = num.gcd(den)
            if g != R.one:
                num = num.exquo(g)
                den = den.exquo(g)
            lc = den.LC
            if lc != 1:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.num = num
        self.den = den

    @property
    def R(self):
        return self.num.ring

    def _coerce(self, other) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.R(_qq(other)), _normal=True)
        if isinstance(other, PolyElement):
            return RationalFunction(other, _normal=True)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        one = self.R.one
        if self.den == one and o.den == one:
            return RationalFunction(self.num + o.num, _normal=True)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normal=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        one = self.R.one
        if self.den == one and o.den == one:
            return RationalFunction(self.num * o.num, _normal=True)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        return RationalFunction(self.num**k, self.den**k, _normal=True)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den == self.R.one and self.num.is_ground:
            return hash(qq_to_fraction(self.num.LC) if self.num else Fraction(0))
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"RationalFunction({self.num}, {self.den})"

    def is_polynomial(self) -> bool:
        return self.den == self.R.one


@dataclass(frozen=True)
class BaseRing:
    """A supported base ring A together with its fraction field K.

    ``kind`` is one of ``"Z"``, ``"Q"``, ``"Q[t]"``, ``"cone"``.
    """

    kind: str
    variable: str = "t"

    KINDS = ("Z", "Q", "Q[t]", "cone")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise UnsupportedRing(f"unknown base ring kind {self.kind!r}")

    # construction helpers -------------------------------------------------
    @classmethod
    def integers(cls) -> BaseRing:
        return cls("Z")

    @classmethod
    def rationals(cls) -> BaseRing:
        return cls("Q")

    @classmethod
    def polynomials(cls, variable: str = "t") -> BaseRing:
        return cls("Q[t]", variable)

    @classmethod
    def cone(cls) -> BaseRing:
        return cls("cone")

    @classmethod
    def parse(cls, text: str) -> BaseRing:
        text = text.strip()
        if text in ("Z", "Q", "cone"):
            return cls(text)
        if text.startswith("Q[") and text.endswith("]") and len(text) > 3:
            return cls("Q[t]", text[2:-1])
        raise UnsupportedRing(f"unsupported base ring {text!r}")

    def __str__(self):
        return f"Q[{self.variable}]" if self.kind == "Q[t]" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind == "Q"

    @property
    def is_pid(self) -> bool:
        return self.kind in ("Z", "Q", "Q[t]")

    @property
    def symbols(self) -> tuple[str, ...]:
        """Names that denote base-ring elements in polynomial text."""
        if self.kind == "Q[t]":
            return (self.variable,)
        if self.kind == "cone":
            return ("a", "b", "c")
        return ()

    @property
    def poly_ring(self):
        """The sympy polynomial ring underlying K (None for Z and Q)."""
        if self.kind == "Q[t]":
            return _sympy_ring(self.variable)
        if self.kind == "cone":
            return _sympy_ring("a,b")
        return None

    @property
    def _cone_check_ring(self):
        return _sympy_ring("x,y")

    # element constructors --------------------------------------------------
    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        """Map ints, Fractions, and compatible field elements into K."""
        if self.poly_ring is None:
            if isinstance(x, RationalFunction):
                if x.num.is_ground and x.den.is_ground:
                    return qq_to_fraction(x.num.LC if x.num else QQ(0))
                raise TypeError(f"{x!r} is not an element of {self}")
            return Fraction(x)
        if isinstance(x, RationalFunction):
            if x.R is not self.poly_ring:
                raise TypeError(f"{x!r} is not an element of {self}")
            return x
        if isinstance(x, PolyElement):
            return RationalFunction(x, _normal=True)
        return RationalFunction(self.poly_ring(_qq(Fraction(x))), _normal=True)

    def symbol(self, name: str):
        """The field element denoted by a base symbol (t, or a/b/c for the cone)."""
        if self.kind == "Q[t]" and name == self.variable:
            return RationalFunction(self.poly_ring.gens[0], _normal=True)
        if self.kind == "cone" and name in ("a", "b", "c"):
            a, b = self.poly_ring.gens
            if name == "a":
                return RationalFunction(a, _normal=True)
            if name == "b":
                return RationalFunction(b, _normal=True)
            return RationalFunction(b**2, a)
        raise UnsupportedRing(f"symbol {name!r} does not belong to base {self}")

    # predicates ------------------------------------------------------------
    def contains(self, x) -> bool:
        """True when the fraction-field element x lies in the base ring A."""
        if self.kind == "Z":
            return Fraction(x).denominator == 1
        if self.kind == "Q":
            return True
        x = self.coerce(x)
        if self.kind == "Q[t]":
            return x.is_polynomial()
        # cone: substitute a = x^2, b = xy and test that the result is a polynomial.
        return self._cone_image_is_polynomial(x)

    def _cone_image_is_polynomial(self, x: RationalFunction) -> bool:
        S = self._cone_check_ring
        X, Y = S.gens

        def image(p):
            out = S.zero
            for (i, j), c in p.terms():
                out += S(c) * X ** (2 * i + j) * Y**j
            return out

        num, den = image(x.num), image(x.den)
        return num.rem(den) == 0 if not den.is_ground else True

    def is_unit(self, x) -> bool:
        """Units of A: {+-1} for Z, Q^x for Q, nonzero constants for Q[t] and the cone."""
        x = self.coerce(x)
        if not x:
            return False
        if self.kind == "Z":
            return x in (1, -1)
        if self.kind == "Q":
            return True
        return x.num.is_ground and x.den.is_ground

    @property
    def unit_group(self) -> str:
        return {"Z": "{1,-1}", "Q": "Q^x", "Q[t]": "Q^x", "cone": "Q^x"}[self.kind]

    # conversions ------------------------------------------------------------
    def to_fraction(self, x) -> Fraction:
        """A constant element as a Fraction (raises if it depends on a symbol)."""
        x = self.coerce(x)
        if isinstance(x, Fraction):
            return x
        if not (x.num.is_ground and x.den.is_ground):
            raise TypeError(f"{x!r} is not constant")
        if not x.num:
            return Fraction(0)
        return qq_to_fraction(x.num.LC) / qq_to_fraction(x.den.LC)

    def specialize(self, x, t0) -> Fraction:
        """Evaluate an element of Q(t) at t = t0."""
        if self.kind != "Q[t]":
            raise UnsupportedRing("specialization is defined for Q[t] bases only")
        x = self.coerce(x)
        t0 = _qq(Fraction(t0))
        den = x.den(t0) if not x.den.is_ground else x.den.LC
        if den == 0:
            raise SpecializationPole(f"denominator {x.den} vanishes at {t0}")
        num = x.num(t0) if x.num and not x.num.is_ground else (x.num.LC if x.num else QQ(0))
        return qq_to_fraction(num) / qq_to_fraction(den)

    def to_poly(self, x) -> PolyElement | int:
        """A base-ring element as an int (Z) or a sympy polynomial (Q[t], cone)."""
        if not self.contains(x):
            raise ValueError(f"{x!r} is not in {self}")
        x = self.coerce(x)
        if self.kind == "Z":
            return int(x)
        if self.kind == "Q":
            return x
        if x.den != x.R.one:
            # ground denominator only
            return x.num.quo_ground(x.den.LC)
        return x.num

    def lift(self, p):
        """Inverse of :meth:`to_poly`."""
        return self.coerce(p)

    def text(self, x) -> str:
        from delpair.exact.poly import format_coefficient

        return format_coefficient(self, self.coerce(x))
