"""Exact determinants.

``det_fraction_free`` is the hot path (norms and resultants): rows are cleared
of denominators, then Bareiss elimination runs over Z or over a sympy
polynomial ring with exact division.  ``det_expansion`` is division-free and
works over any commutative ring, including finite algebras with zero divisors.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy.polys.rings import PolyElement

from delpair.exact.rings import RationalFunction


def identity(n: int, one=1, zero=0) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out_row = []
        for j in range(cols):
            acc = row[0] * b[0][j]
            for k in range(1, inner):
                acc = acc + row[k] * b[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def bareiss(m: list[list], exquo) -> object:
    """Bareiss elimination on a square matrix over an integral domain.

    ``exquo(a, b)`` must return the exact quotient a / b.  The matrix is
    modified in place.
    """
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                v = row_i[j] * pivot - lead * row_k[j]
                row_i[j] = v if prev is None else exquo(v, prev)
            row_i[k] = 0 * pivot
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _det_rational(m: Sequence[Sequence]) -> Fraction:
    rows = []
    scale = 1
    for row in m:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        scale *= den
        rows.append([int(Fraction(x) * den) for x in row])
    return Fraction(bareiss(rows, lambda a, b: a // b), scale)


def _det_rational_functions(m: Sequence[Sequence], R) -> RationalFunction:
    rows = []
    scale = R.one
    for row in m:
        den = R.one
        for x in row:
            if not isinstance(x, RationalFunction):
                continue
            if x.den != R.one:
                den = den.lcm(x.den)
        scale = scale * den
        new_row = []
        for x in row:
            if isinstance(x, RationalFunction):
                new_row.append(x.num * den.exquo(x.den) if x.den != R.one else x.num * den)
            else:
                new_row.append(R(x if not isinstance(x, Fraction) else _as_qq(x)) * den)
        rows.append(new_row)
    det = bareiss(rows, lambda a, b: a.exquo(b))
    if not isinstance(det, PolyElement):
        det = R(det)
    return RationalFunction(det, scale)


def _as_qq(x: Fraction):
    from sympy import QQ

    return QQ(x.numerator, x.denominator)


def det_fraction_free(m: Sequence[Sequence]):
    """Exact determinant of a square matrix over Z, Q, or a rational function field.

    The empty matrix has determinant 1.  Entries may be ints, Fractions,
    :class:`RationalFunction`, or sympy polynomials.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    ring = None
    for row in m:
        for x in row:
            if isinstance(x, RationalFunction):
                ring = x.R
                break
            if isinstance(x, PolyElement):
                ring = x.ring
                rows = [[ring(y) if not isinstance(y, PolyElement) else y for y in r] for r in m]
                return bareiss(rows, lambda a, b: a.exquo(b))
        if ring is not None:
            break
    if ring is not None:
        return _det_rational_functions(m, ring)
    if all(isinstance(x, (int, Fraction)) for row in m for x in row):
        return _det_rational(m)
    return det_expansion(m)


def det_expansion(m: Sequence[Sequence]):
    """Division-free determinant by Laplace expansion over column subsets.

    Cost is O(n^2 2^n); intended for small matrices over rings that are not
    integral domains (e.g. Sylvester matrices with entries in a finite algebra).
    """
    n = len(m)
    if n == 0:
        return 1
    # layer[mask] = signed sum over partial permutations of the first popcount(mask) rows
    layer = {0: None}
    for r in range(n):
        nxt: dict[int, object] = {}
        for mask, acc in layer.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = m[r][c]
                if not _nonzero(entry):
                    continue
                inversions = bin(mask >> (c + 1)).count("1")
                val = entry if acc is None else acc * entry
                if inversions % 2:
                    val = -val
                key = mask | bit
                nxt[key] = val if key not in nxt else nxt[key] + val
        layer = nxt
        if not layer:
            return 0 * m[0][0]
    return layer.get((1 << n) - 1, 0 * m[0][0])


def _nonzero(x) -> bool:
    try:
        return bool(x)
    except TypeError:
        return True


def rank_over_field(m: Sequence[Sequence]) -> int:
    """Rank by Gaussian elimination; entries must support exact division."""
    a = [list(row) for row in m]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, len(a)):
            if a[r][c]:
                f = a[r][c] / p
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def inverse_fraction(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a nonsingular matrix over Q (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c]), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        a[c], a[pivot] = a[pivot], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]
