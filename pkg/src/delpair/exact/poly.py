"""Sparse multivariate polynomials over the fraction field of a base ring.

Terms are stored as ``{exponent tuple: coefficient}`` with zero coefficients
never present.  The canonical text form is the interchange format of the CLI:

* terms sorted lexicographically descending on the declared variable order,
* base symbols (``t`` for Q[t]) expanded into the term, in ascending degree,
* ``^`` for powers, explicit ``*``, rational coefficients as ``p/q``.

Coefficients with a genuine denominator in the base symbol are written as a
single parenthesised quotient, e.g. ``(1 + t)/(2 + t)*x0``.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from delpair.errors import ParseError
from delpair.exact.rings import BaseRing, RationalFunction, qq_to_fraction


class Poly:
    """Immutable polynomial in ``variables`` with coefficients in Frac(ring)."""

    __slots__ = ("ring", "variables", "terms", "_hash")

    def __init__(self, ring: BaseRing, variables: Sequence[str], terms: Mapping[tuple, object] = ()):
        self.ring = ring
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, c in dict(terms).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            c = ring.coerce(c)
            if c:
                clean[exp] = c
        self.terms = clean
        self._hash = None

    # constructors ------------------------------------------------------------
    @classmethod
    def constant(cls, ring, variables, c) -> Poly:
        return cls(ring, variables, {(0,) * len(variables): c})

    @classmethod
    def gen(cls, ring, variables, name: str) -> Poly:
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(ring, variables, {exp: 1})

    @classmethod
    def from_text(cls, ring: BaseRing, variables: Sequence[str], text: str) -> Poly:
        return parse_poly(text, ring, variables)

    @classmethod
    def monomial(cls, ring, variables, exp, c=1) -> Poly:
        return cls(ring, variables, {tuple(exp): c})

    # arithmetic -----------------------------------------------------------------
    def _check(self, other: Poly):
        if self.variables != other.variables or self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.ring, self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly(self.ring, self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring.coerce(other)
            return Poly(self.ring, self.variables, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Poly(self.ring, self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.ring, self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if not self.terms:
                return other == 0
            return self.is_constant() and self.constant_term() == other
        return self.variables == other.variables and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection -----------------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), self.ring.zero)

    def coefficient(self, exp) -> object:
        return self.terms.get(tuple(exp), self.ring.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None if not homogeneous (or zero)."""
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self, k: int | None = None) -> bool:
        d = self.homogeneous_degree()
        return d is not None and (k is None or d == k)

    def has_base_coefficients(self) -> bool:
        return all(self.ring.contains(c) for c in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    # transformations ----------------------------------------------------------
    def map_coefficients(self, fn, ring: BaseRing | None = None) -> Poly:
        ring = ring or self.ring
        return Poly(ring, self.variables, {e: fn(c) for e, c in self.terms.items()})

    def specialize(self, t0) -> Poly:
        """Substitute t = t0 into every coefficient; the result lives over Q."""
        q = BaseRing.rationals()
        return self.map_coefficients(lambda c: self.ring.specialize(c, t0), q)

    def compose(self, images: Sequence[Poly]) -> Poly:
        """Substitute ``images[i]`` for the i-th variable."""
        if len(images) != len(self.variables):
            raise ValueError("need one image per variable")
        if not images:
            return self
        target = images[0]
        powers: list[dict[int, Poly]] = [dict() for _ in images]

        def power(i, k):
            if k not in powers[i]:
                powers[i][k] = images[i] ** k
            return powers[i][k]

        out = Poly(self.ring, target.variables)
        for e, c in self.terms.items():
            term = Poly.constant(self.ring, target.variables, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def linear_change(self, matrix: Sequence[Sequence[int]]) -> Poly:
        """The form F(M x): variable i becomes sum_j M[i][j] x_j."""
        gens = [Poly.gen(self.ring, self.variables, v) for v in self.variables]
        images = []
        for row in matrix:
            img = Poly(self.ring, self.variables)
            for j, m in enumerate(row):
                if m:
                    img = img + gens[j] * m
            images.append(img)
        return self.compose(images)

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a point whose entries are field elements or complex numbers."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def binary_coefficients(self, k: int | None = None) -> list:
        """Coefficients [c(x0^k), c(x0^(k-1) x1), ..., c(x1^k)] of a binary form."""
        if len(self.variables) != 2:
            raise ValueError("binary_coefficients needs exactly two variables")
        if k is None:
            k = self.homogeneous_degree()
            if k is None:
                raise ValueError("not a homogeneous binary form")
        return [self.coefficient((k - i, i)) for i in range(k + 1)]

    # text -----------------------------------------------------------------------
    def text(self) -> str:
        return format_terms(self.ring, self.variables, self.sorted_terms())

    __str__ = text

    def __repr__(self):
        return f"Poly({self.text()!r}, ring={self.ring}, variables={self.variables})"


# ---------------------------------------------------------------------------
# formatting


def _fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _monomial_factors(names: Sequence[str], exp: Sequence[int]) -> list[str]:
    out = []
    for name, k in zip(names, exp):
        if k == 1:
            out.append(name)
        elif k > 1:
            out.append(f"{name}^{k}")
    return out


def _signed_pieces(q: Fraction, factors: list[str]) -> tuple[str, str]:
    sign = "-" if q < 0 else "+"
    q = abs(q)
    if factors and q == 1:
        body = "*".join(factors)
    else:
        body = "*".join([_fraction_text(q)] + factors)
    return sign, body


def _base_pieces(ring: BaseRing, c, factors: list[str]) -> list[tuple[str, str]]:
    """Split coefficient c times the monomial ``factors`` into signed text pieces."""
    if isinstance(c, Fraction):
        return [_signed_pieces(c, factors)]
    assert isinstance(c, RationalFunction)
    names = ring.symbols[:2] if ring.kind == "cone" else ring.symbols
    if c.den.is_ground:
        scale = qq_to_fraction(c.den.LC)
        pieces = []
        for mon, q in sorted(c.num.terms(), key=lambda item: item[0]):
            pieces.append(_signed_pieces(qq_to_fraction(q) / scale, _monomial_factors(names, mon) + factors))
        return pieces
    num = _join(_base_pieces(ring, RationalFunction(c.num, _normal=True), []))
    den = _join(_base_pieces(ring, RationalFunction(c.den, _normal=True), []))
    body = "*".join([f"({num})/({den})"] + factors)
    return [("+", body)]


def _join(pieces: list[tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    out = []
    for i, (sign, body) in enumerate(pieces):
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_terms(ring: BaseRing, variables: Sequence[str], terms: Iterable) -> str:
    pieces = []
    for exp, c in terms:
        pieces.extend(_base_pieces(ring, c, _monomial_factors(variables, exp)))
    return _join(pieces)


def format_coefficient(ring: BaseRing, c) -> str:
    return _join(_base_pieces(ring, ring.coerce(c), []))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: BaseRing, variables: Sequence[str], line: int, col0: int):
        self.text = text
        self.ring = ring
        self.variables = tuple(variables)
        self.line = line
        self.col0 = col0
        self.tokens = _tokenize_at(text, line, col0)
        self.i = 0

    def error(self, msg, tok=None):
        tok = tok or self.tokens[self.i]
        raise ParseError(msg, self.line, self.col0 + tok[2] + 1)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    self.error("division only by a nonzero constant of the base field", tok)
                p = p * (1 / q.constant_term())
        return p

    def unary(self) -> Poly:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a nonnegative integer literal", tok)
            return base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return Poly.constant(self.ring, self.variables, int(val))
        if kind == "name":
            if val in self.variables:
                return Poly.gen(self.ring, self.variables, val)
            if val in self.ring.symbols:
                return Poly.constant(self.ring, self.variables, self.ring.symbol(val))
            self.i -= 1
            self.error(f"unknown symbol {val!r} for base {self.ring} and variables {self.variables}")
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take()[1] != ")":
                self.i -= 1
                self.error("expected ')'")
            return p
        self.i -= 1
        self.error(f"unexpected token {val!r}" if val else "unexpected end of input")


def _tokenize_at(text, line, col0):
    try:
        return _tokenize(text)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (line", 1)[0], line, col0 + exc.column) from None


def parse_poly(text: str, ring: BaseRing, variables: Sequence[str], *, line: int = 1, column: int = 0) -> Poly:
    """Parse polynomial text over ``ring`` in the given variables.

    ``line``/``column`` offset error positions when the text sits inside a
    larger document.
    """
    return _Parser(text, ring, variables, line, column).parse()


def parse_base_element(text: str, ring: BaseRing):
    """Parse a base-field element (no fibre variables)."""
    return parse_poly(text, ring, ()).constant_term()
