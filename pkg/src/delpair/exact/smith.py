"""Smith normal form over Euclidean base rings and the determinant unit comparison.

Two nonsingular endomorphisms u, u' of free modules over a PID have isomorphic
cokernels exactly when their invariant factors agree (after dropping units);
in that case det(u) = a * det(u') for a unit a.  :func:`unit_ratio` returns
that unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from delpair.errors import SingularInput, UnsupportedRing
from delpair.exact.matrix import det_fraction_free
from delpair.exact.rings import BaseRing


class _Incomparable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INCOMPARABLE"

    def __bool__(self):
        return False


INCOMPARABLE = _Incomparable()


@dataclass(frozen=True)
class SmithData:
    """Invariant factors q1 | q2 | ... | qr (normalised associates) and the rank deficiency."""

    ring: BaseRing
    invariants: tuple
    rank_deficiency: int

    def nonunit_invariants(self) -> tuple:
        return tuple(q for q in self.invariants if not self.ring.is_unit(q))

    def product(self):
        out = self.ring.one
        for q in self.invariants:
            out = out * q
        return out if not self.rank_deficiency else self.ring.zero

    def texts(self) -> list[str]:
        return [self.ring.text(q) for q in self.invariants]


class _Euclid:
    """The few Euclidean-domain operations the elimination needs."""

    def __init__(self, ring: BaseRing):
        self.ring = ring
        self.poly = ring.kind == "Q[t]"
        self.R = ring.poly_ring

    def size(self, x) -> int:
        return x.degree() if self.poly else abs(x)

    def divmod(self, a, b):
        if self.poly:
            return a.div(b)
        q, r = divmod(a, b)
        return q, r

    def normalize(self, x):
        if self.poly:
            return x.monic() if x else x
        return abs(x)

    def zero(self):
        return self.R.zero if self.poly else 0


def _to_euclid(ring: BaseRing, m: Sequence[Sequence]) -> list[list]:
    return [[ring.to_poly(ring.coerce(x)) for x in row] for row in m]


def _snf_diagonal(a: list[list], ops: _Euclid) -> list:
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    diag = []
    for t in range(min(n_rows, n_cols)):
        while True:
            # pivot: nonzero entry of smallest size in the trailing block
            best = None
            for i in range(t, n_rows):
                for j in range(t, n_cols):
                    if a[i][j] and (best is None or ops.size(a[i][j]) < ops.size(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                diag.extend([ops.zero()] * (min(n_rows, n_cols) - t))
                return diag
            i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, n_rows):
                if a[i][t]:
                    q, _ = ops.divmod(a[i][t], pivot)
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n_cols):
                if a[t][j]:
                    q, _ = ops.divmod(a[t][j], pivot)
                    for row in a:
                        row[j] = row[j] - q * row[t]
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            # divisibility of the trailing block by the pivot
            bad = None
            for i in range(t + 1, n_rows):
                for j in range(t + 1, n_cols):
                    if ops.divmod(a[i][j], pivot)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                diag.append(ops.normalize(pivot))
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
    return diag


def smith_normal_form(m: Sequence[Sequence], ring: BaseRing) -> SmithData:
    """Invariant factors of a square matrix over Z or Q[t].

    Over Q every nonzero invariant is 1 (the field case).  The cone base is
    not a PID and is rejected.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("smith_normal_form expects a square matrix")
    if not ring.is_pid:
        raise UnsupportedRing(f"{ring} is not a principal ideal domain")
    if ring.kind == "Q":
        rank = _rank_over_field(m)
        return SmithData(ring, tuple(ring.one for _ in range(rank)), n - rank)
    ops = _Euclid(ring)
    diag = _snf_diagonal(_to_euclid(ring, m), ops)
    nonzero = [ring.lift(q) for q in diag if q]
    return SmithData(ring, tuple(nonzero), len(diag) - len(nonzero))


def _rank_over_field(m: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in m]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(rank + 1, len(a)):
            f = a[r][c] / a[rank][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def unit_ratio(u: Sequence[Sequence], u_prime: Sequence[Sequence], ring: BaseRing):
    """The unit a with det(u) = a * det(u'), or INCOMPARABLE.

    The matrices may have different sizes: only the non-unit invariant factors
    (the cokernel) are compared.  When both are singular with equal invariants
    the unit 1 is returned; a single singular input raises SingularInput.
    """
    snf = smith_normal_form(u, ring)
    snf_p = smith_normal_form(u_prime, ring)
    d, d_p = det_fraction_free(u), det_fraction_free(u_prime)
    d, d_p = ring.coerce(d), ring.coerce(d_p)
    if not d or not d_p:
        if d or d_p:
            raise SingularInput("exactly one endomorphism is singular")
        if snf.nonunit_invariants() == snf_p.nonunit_invariants() and snf.rank_deficiency == snf_p.rank_deficiency:
            return ring.one
        return INCOMPARABLE
    if snf.nonunit_invariants() != snf_p.nonunit_invariants():
        return INCOMPARABLE
    a = d / d_p
    if not ring.is_unit(a):
        # equal invariants force a unit ratio; anything else is a bug upstream
        raise AssertionError(f"determinant ratio {a!r} is not a unit")
    return a
