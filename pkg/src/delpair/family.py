"""Projective families P^d over a base ring, sections of O(k), and regularity.

Regularity of a sequence of hypersurface sections on P^d is decided by
resultants.  For a prefix s_1..s_i with i < d + 1 the sequence is padded with
linear forms; Res != 0 then says the fibre of Z(s_1..s_i) meets a general
linear space of complementary dimension nowhere, i.e. it has the expected
dimension d - i.  Since P^d is Cohen-Macaulay this is the same as
regularity.  A nonzero resultant is an exact certificate; a bad fibre is a
point of the base where the (specialised) resultant vanishes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from delpair.errors import (
    ArityMismatch,
    HomogeneityError,
    InvalidSection,
    UnsupportedDimension,
    UnsupportedRing,
    ZeroAtInfinity,
)
from delpair.exact.poly import Poly, parse_poly
from delpair.exact.resultant import _unimodular_changes, resultant
from delpair.exact.rings import BaseRing, RationalFunction
from delpair.norm import AlgebraElement, FiniteAlgebra, companion_algebra

MAX_DIM = 3


@dataclass(frozen=True)
class ProjectiveFamily:
    """X = P^d over Spec(base) with homogeneous coordinates x0..xd."""

    base: BaseRing
    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 0:
            raise UnsupportedDimension(f"fibre dimension must be a nonnegative integer, got {self.d!r}")
        if self.d > MAX_DIM:
            raise UnsupportedDimension(f"fibre dimension {self.d} exceeds the supported maximum {MAX_DIM}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"x{i}" for i in range(self.d + 1))

    @property
    def name(self) -> str:
        return f"P{self.d}"

    def poly(self, text: str) -> Poly:
        return parse_poly(text, self.base, self.variables)

    def section(self, form, twist: int | None = None) -> BundleSection:
        if isinstance(form, str):
            form = self.poly(form)
        if twist is None:
            twist = form.homogeneous_degree()
            if twist is None:
                raise HomogeneityError(f"{form} is not homogeneous")
        return BundleSection(self, twist, form)

    def constant(self, m) -> BundleSection:
        """The pulled-back section m of O_X (twist 0), for the pull-back slot only."""
        return BundleSection(self, 0, Poly.constant(self.base, self.variables, m), pullback=True)

    def specialize(self, t0) -> ProjectiveFamily:
        return ProjectiveFamily(BaseRing.rationals(), self.d)


@dataclass(frozen=True)
class BundleSection:
    """A section of O(twist) on a projective family, i.e. a form of degree twist."""

    family: ProjectiveFamily
    twist: int
    form: Poly
    pullback: bool = False

    def __post_init__(self):
        if self.form.variables != self.family.variables:
            raise InvalidSection(f"form variables {self.form.variables} do not match {self.family.variables}")
        if not self.form:
            raise InvalidSection("the zero form is not a section with a zero locus")
        if self.twist < 1 and not self.pullback:
            raise InvalidSection("sections need twist >= 1 (twist 0 is reserved for the pull-back slot)")
        if not self.form.is_homogeneous(self.twist):
            raise HomogeneityError(
                f"form {self.form} has degree {self.form.total_degree()}, declared twist {self.twist}"
            )
        if not self.form.has_base_coefficients():
            raise InvalidSection(f"coefficients of {self.form} are not in {self.family.base}")

    @property
    def base(self) -> BaseRing:
        return self.family.base

    def text(self) -> str:
        return self.form.text()

    def scaled(self, lam) -> BundleSection:
        return BundleSection(self.family, self.twist, self.form * lam, self.pullback)

    def specialize(self, t0) -> Poly:
        """The form on the fibre over t = t0 (may be zero, so returned as a Poly)."""
        return self.form.specialize(t0)

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class SectionSequence:
    sections: tuple

    def __init__(self, sections: Sequence[BundleSection]):
        sections = tuple(sections)
        if not sections:
            raise ArityMismatch("a section sequence needs at least one section")
        fam = sections[0].family
        if any(s.family != fam for s in sections):
            raise InvalidSection("all sections must live on one family")
        if len(sections) > fam.d + 1:
            raise ArityMismatch(f"at most {fam.d + 1} sections on {fam.name}, got {len(sections)}")
        object.__setattr__(self, "sections", sections)

    @property
    def family(self) -> ProjectiveFamily:
        return self.sections[0].family

    @property
    def base(self) -> BaseRing:
        return self.family.base

    @property
    def twists(self) -> tuple[int, ...]:
        return tuple(s.twist for s in self.sections)

    @property
    def forms(self) -> list[Poly]:
        return [s.form for s in self.sections]

    def __len__(self):
        return len(self.sections)

    def __getitem__(self, i):
        return self.sections[i]

    def permuted(self, perm: Sequence[int]) -> SectionSequence:
        """The sequence whose i-th entry is the perm[i]-th entry of this one."""
        if sorted(perm) != list(range(len(self))):
            raise ArityMismatch(f"{list(perm)} is not a permutation of {len(self)} slots")
        return SectionSequence([self.sections[p] for p in perm])

    def replace(self, i: int, section: BundleSection) -> SectionSequence:
        items = list(self.sections)
        items[i] = section
        return SectionSequence(items)

    def texts(self) -> list[str]:
        return [s.text() for s in self.sections]


def sequence(family: ProjectiveFamily, *forms: str | Poly) -> SectionSequence:
    return SectionSequence([family.section(f) for f in forms])


# ---------------------------------------------------------------------------
# regularity


@dataclass
class RegularityCertificate:
    """Outcome of :func:`certify_regular`.

    ``resultants[i]`` is the resultant certifying the prefix of length i + 1
    (padded with linear forms when shorter than d + 1).  ``bad_fibers`` lists
    the base points (irreducible polynomials in t, or primes for Z) over which
    regularity fails; it is empty over Q.
    """

    certified: bool
    scope: str
    twists: tuple
    resultants: tuple
    bad_fibers: tuple = ()
    failing_index: int | None = None
    reason: str = ""
    generic: bool = True
    ring: BaseRing | None = None
    _bad_polys: tuple = field(default=(), repr=False)

    @property
    def certificate(self):
        return self.resultants[-1] if self.resultants else None

    def is_bad_fiber(self, t0) -> bool:
        """True when the base point t = t0 lies on a bad fibre."""
        if self.ring is None or self.ring.kind != "Q[t]":
            return False
        return any(self.ring.specialize(RationalFunction(p, _normal=True), t0) == 0 for p in self._bad_polys)

    def to_dict(self) -> dict:
        ring = self.ring
        return {
            "certified": self.certified,
            "scope": self.scope,
            "generic": self.generic,
            "twists": list(self.twists),
            "resultants": [ring.text(r) for r in self.resultants],
            "bad_fibers": list(self.bad_fibers),
            "failing_index": self.failing_index,
            "reason": self.reason,
        }


PADDING_TRIALS = 3
# extra paddings used to confirm a candidate bad fibre before reporting it
CONFIRM_TRIALS = 40


def _padding(family: ProjectiveFamily, count: int, trial: int) -> list[Poly]:
    rng = random.Random(7919 * (trial + 1) + count)
    out = []
    for _ in range(count):
        while True:
            coeffs = [rng.randint(-9, 9) for _ in family.variables]
            if any(coeffs):
                break
        out.append(
            Poly(
                family.base,
                family.variables,
                {tuple(int(j == i) for j in range(family.d + 1)): c for i, c in enumerate(coeffs)},
            )
        )
    return out


def _prefix_resultants(seq: SectionSequence, i: int, trials: int) -> list:
    """Resultants for the prefix of length i (1-based), one per padding trial."""
    fam = seq.family
    forms = seq.forms[:i]
    degrees = list(seq.twists[:i])
    pad = fam.d + 1 - i
    if pad == 0:
        return [resultant(forms, degrees)]
    out = []
    for trial in range(trials):
        out.append(resultant(forms + _padding(fam, pad, trial), degrees + [1] * pad))
        if not out[-1] and trial == trials - 1:
            break
    return out


def _gcd_in_base(ring: BaseRing, values: list):
    """gcd of base-ring elements (Z or Q[t]); zero entries are ignored."""
    values = [v for v in values if v]
    if not values:
        return ring.zero
    if ring.kind == "Q":
        return ring.one
    if ring.kind == "Z":
        from math import gcd

        g = 0
        for v in values:
            g = gcd(g, int(v))
        return ring.coerce(g)
    g = ring.to_poly(values[0])
    for v in values[1:]:
        g = g.gcd(ring.to_poly(v))
    return ring.lift(g)


def _bad_factors(ring: BaseRing, r) -> tuple[list[str], list]:
    """Irreducible factors (Q[t]) or prime factors (Z) of a nonzero base-ring element."""
    if ring.kind == "Q" or ring.is_unit(r):
        return [], []
    if ring.kind == "Z":
        from sympy import factorint

        primes = sorted(factorint(abs(int(r))))
        return [str(p) for p in primes], primes
    _, factors = ring.to_poly(r).factor_list()
    polys = [f.monic() for f, _ in factors]
    polys.sort(key=lambda p: (p.degree(), str(p)))
    return [ring.text(RationalFunction(p, _normal=True)) for p in polys], polys


def _divides(ring: BaseRing, factor, r) -> bool:
    if not r:
        return True
    if ring.kind == "Z":
        return int(r) % factor == 0
    return not ring.to_poly(r).rem(factor)


def _confirm_bad(seq: SectionSequence, i: int, names: list, polys: list) -> tuple[list, list]:
    """Drop candidate bad fibres that some further padding witnesses as good."""
    fam = seq.family
    pad = fam.d + 1 - i
    if pad == 0 or not names:
        return names, polys
    alive = list(range(len(names)))
    forms, degrees = seq.forms[:i], list(seq.twists[:i])
    for trial in range(PADDING_TRIALS, PADDING_TRIALS + CONFIRM_TRIALS):
        if not alive:
            break
        r = resultant(forms + _padding(fam, pad, trial), degrees + [1] * pad)
        if r:
            alive = [k for k in alive if _divides(fam.base, polys[k], r)]
    return [names[k] for k in alive], [polys[k] for k in alive]


def _locus_name(i: int) -> str:
    return "Z(s1)" if i == 1 else f"Z(s1, ..., s{i})"


def certify_regular(seq: SectionSequence, global_: bool = False) -> RegularityCertificate:
    """Certify that seq is an f-regular sequence, generically or over all of S.

    Generic regularity needs every prefix resultant to be nonzero.  Global
    regularity additionally needs them to be units of the base ring; otherwise
    the refutation lists the bad fibres of the first failing prefix.
    """
    fam = seq.family
    ring = fam.base
    if ring.kind == "cone":
        raise UnsupportedRing("regularity certification needs a PID base (Z, Q or Q[t])")
    if fam.d > MAX_DIM:
        raise UnsupportedDimension(f"fibre dimension {fam.d} exceeds {MAX_DIM}")
    m = len(seq)
    results = []
    per_prefix_gcd = []
    for i in range(1, m + 1):
        rs = _prefix_resultants(seq, i, PADDING_TRIALS if global_ else 1)
        nonzero = [r for r in rs if r]
        if not nonzero and len(rs) < PADDING_TRIALS and fam.d + 1 - i > 0:
            # one unlucky padding is possible; confirm with further trials
            rs = _prefix_resultants(seq, i, PADDING_TRIALS)
            nonzero = [r for r in rs if r]
        if not nonzero:
            reason = (
                f"s{i} is a zero divisor on the generic fibre of {_locus_name(i - 1)}"
                if i > 1
                else "s1 vanishes on the generic fibre"
            )
            return RegularityCertificate(
                False,
                "global" if global_ else "generic",
                seq.twists,
                tuple(results + [ring.zero]),
                failing_index=i,
                reason=reason,
                generic=False,
                ring=ring,
            )
        results.append(nonzero[0])
        per_prefix_gcd.append(_gcd_in_base(ring, nonzero))
    scope = "global" if global_ else "generic"
    if not global_:
        return RegularityCertificate(True, scope, seq.twists, tuple(results), ring=ring)
    all_names: list = []
    all_polys: list = []
    first_bad = None
    for i, g in enumerate(per_prefix_gcd, start=1):
        names, polys = _confirm_bad(seq, i, *_bad_factors(ring, g))
        if names and first_bad is None:
            first_bad = i
        for n, p in zip(names, polys):
            if n not in all_names:
                all_names.append(n)
                all_polys.append(p)
    if first_bad is not None:
        return RegularityCertificate(
            False,
            scope,
            seq.twists,
            tuple(results),
            bad_fibers=tuple(all_names),
            failing_index=first_bad,
            reason=f"{_locus_name(first_bad)} has excess fibre dimension over the bad fibres",
            generic=True,
            ring=ring,
            _bad_polys=tuple(all_polys) if ring.kind == "Q[t]" else (),
        )
    return RegularityCertificate(True, scope, seq.twists, tuple(results), ring=ring)


def order_permuted_is_regular(seq: SectionSequence, perm: Sequence[int], global_: bool = False) -> bool:
    """Whether seq and its permutation receive the same regularity verdict."""
    a = certify_regular(seq, global_)
    b = certify_regular(seq.permuted(perm), global_)
    if a.certified != b.certified:
        return False
    if global_ and set(a.bad_fibers) != set(b.bad_fibers):
        return False
    return True


def intersection_number(d: int, twists: Sequence[int], algebra: FiniteAlgebra | None = None) -> int:
    """Degree of c1(O(k1))...c1(O(kd)) on the generic fibre of P^d.

    For d = 0 with a finite algebra this is the degree of the finite morphism
    (the generic rank); on P^0 itself it is 1.
    """
    twists = list(twists)
    if len(twists) != d:
        raise ArityMismatch(f"need exactly {d} twists on P{d}, got {len(twists)}")
    if d == 0:
        return algebra.rank if algebra is not None else 1
    delta = 1
    for k in twists:
        delta *= k
    return delta


# ---------------------------------------------------------------------------
# zero loci on P^1


@dataclass(frozen=True)
class ZeroLocus:
    """Coordinate ring A[x]/(s~) of Z(s) for a binary form s.

    ``change`` is the 2x2 matrix M with s' = s(M x); the algebra is the
    dehomogenisation of s' at x1 = 1 divided by its leading coefficient
    ``lc`` = s'(1, 0), which is a unit of the base.
    """

    section: BundleSection
    algebra: FiniteAlgebra
    change: tuple
    lc: object

    @property
    def det_change(self) -> int:
        (a, b), (c, d) = self.change
        return a * d - b * c

    def x(self) -> AlgebraElement:
        return self.algebra.basis(1) if self.algebra.rank > 1 else self.algebra.element([self._root()])

    def _root(self):
        # rank 1: the algebra is A with x = -c0
        return -self.algebra.modulus[0]

    def restrict(self, form: Poly, degree: int) -> AlgebraElement:
        """The image of a binary form of the given degree in A[x]/(s~), after the change."""
        moved = form.linear_change(self.change) if self.change != _IDENTITY else form
        coeffs = moved.binary_coefficients(degree)
        alg = self.algebra
        x = self.x()
        acc = alg.zero
        for c in coeffs:
            acc = acc * x + alg.scalar(c)
        return acc

    def text(self) -> str:
        base = self.algebra.base
        mod = self.algebra.modulus
        terms = {(k,): c for k, c in enumerate(mod)}
        return f"{base}[x]/({Poly(base, ('x',), terms).text()})"


_IDENTITY = ((1, 0), (0, 1))


def _chart_changes():
    yield _IDENTITY
    yield ((0, 1), (1, 0))
    for m in _unimodular_changes(2):
        yield tuple(tuple(r) for r in m)


def zero_locus_algebra(s: BundleSection, max_changes: int = 40) -> ZeroLocus:
    """The finite algebra of Z(s) for a section s of O(k) on P^1, k >= 1."""
    fam = s.family
    if fam.d != 1:
        raise UnsupportedDimension("zero_locus_algebra is implemented for P^1 families")
    if s.twist < 1:
        raise InvalidSection("zero loci need twist >= 1")
    ring = fam.base
    k = s.twist
    for count, change in enumerate(_chart_changes()):
        if count >= max_changes:
            break
        (m00, _), (m10, _) = change
        lc = s.form.evaluate([ring.coerce(m00), ring.coerce(m10)])
        lc = ring.coerce(lc)
        if not ring.is_unit(lc):
            continue
        moved = s.form.linear_change(change) if change != _IDENTITY else s.form
        coeffs = moved.binary_coefficients(k)
        # ascending coefficients of the monic dehomogenisation
        modulus = [c / lc for c in reversed(coeffs)]
        algebra = companion_algebra(ring, modulus, label=f"Z({s.text()})")
        return ZeroLocus(s, algebra, change, lc)
    raise ZeroAtInfinity(
        f"no chart among the first {max_changes} coordinate changes puts Z({s.text()}) "
        f"in an affine line with unit leading coefficient"
    )
