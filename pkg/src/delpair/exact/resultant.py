"""Resultants of homogeneous forms.

Normalisation: Res(x0^d0, ..., xn^dn) = 1.  For two binary forms this is the
classical Sylvester determinant with the rows of the first form on top.  For
n + 1 >= 3 forms the Macaulay quotient det(M) / det(M') is used, with rows and
columns of M indexed by the same monomial list so that the normalisation
holds without sign bookkeeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from delpair.exact.matrix import det_fraction_free
from delpair.exact.poly import Poly


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list]:
    """Sylvester matrix of coefficient lists [a0..am], [b0..bn] (x0-descending)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    zero = 0 * (f[0] if f else 0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g) + [zero] * (size - n - 1 - i))
    return rows


def sylvester_resultant(f: Poly, g: Poly, k1: int | None = None, k2: int | None = None):
    """Res(f, g) of two binary forms of (formal) degrees k1, k2."""
    fc = f.binary_coefficients(k1)
    gc = g.binary_coefficients(k2)
    if len(fc) == 1 and len(gc) == 1:
        return f.ring.one
    return f.ring.coerce(det_fraction_free(sylvester_matrix(fc, gc)))


def monomials(nvars: int, degree: int) -> list[tuple]:
    """Exponent vectors of the given degree, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return sorted(set(out), reverse=True)


@dataclass
class MacaulayData:
    value: object
    numerator: object
    denominator: object
    size: int
    minor_size: int
    change: list | None = None
    notes: list = field(default_factory=list)


def _macaulay_attempt(forms: Sequence[Poly], degrees: Sequence[int]) -> MacaulayData:
    n1 = len(forms)
    D = sum(d - 1 for d in degrees) + 1
    mons = monomials(n1, D)
    index = {m: i for i, m in enumerate(mons)}
    zero = forms[0].ring.zero
    rows = []
    reduced = []
    for alpha in mons:
        divisible = [i for i in range(n1) if alpha[i] >= degrees[i]]
        i = divisible[0]
        reduced.append(len(divisible) == 1)
        shift = list(alpha)
        shift[i] -= degrees[i]
        row = [zero] * len(mons)
        for exp, c in forms[i].terms.items():
            row[index[tuple(a + b for a, b in zip(exp, shift))]] = c
        rows.append(row)
    keep = [i for i, r in enumerate(reduced) if not r]
    minor = [[rows[i][j] for j in keep] for i in keep]
    num = forms[0].ring.coerce(det_fraction_free(rows))
    den = forms[0].ring.coerce(det_fraction_free(minor)) if minor else forms[0].ring.one
    value = num / den if den else None
    return MacaulayData(value, num, den, len(mons), len(keep))


def _unimodular_changes(n: int):
    """Deterministic stream of small unimodular integer matrices (det = 1)."""
    entries = (1, -1, 2, -2)
    for i, j in itertools.permutations(range(n), 2):
        for e in entries:
            m = [[int(r == c) for c in range(n)] for r in range(n)]
            m[i][j] = e
            yield m
    for (i, j), (k, l) in itertools.combinations(list(itertools.permutations(range(n), 2)), 2):
        for e, f in itertools.product(entries[:2], repeat=2):
            a = [[int(r == c) for c in range(n)] for r in range(n)]
            a[i][j] = e
            b = [[int(r == c) for c in range(n)] for r in range(n)]
            b[k][l] = f
            yield [[sum(a[r][s] * b[s][c] for s in range(n)) for c in range(n)] for r in range(n)]


def macaulay_resultant(forms: Sequence[Poly], degrees: Sequence[int] | None = None) -> MacaulayData:
    """Macaulay resultant of n + 1 forms in n + 1 variables.

    If the extraneous minor vanishes, a deterministic sequence of unimodular
    coordinate changes is tried (Res is invariant under det-1 changes); the
    change used is recorded.  As a last resort the generalised characteristic
    polynomial perturbation is used.
    """
    forms = list(forms)
    if degrees is None:
        degrees = [f.homogeneous_degree() for f in forms]
    if len(forms) != len(forms[0].variables):
        raise ValueError("need as many forms as variables")
    if any(not f for f in forms):
        return MacaulayData(forms[0].ring.zero, None, None, 0, 0, notes=["zero form"])
    data = _macaulay_attempt(forms, degrees)
    if data.value is not None:
        return data
    for change in _unimodular_changes(len(forms)):
        moved = [f.linear_change(change) for f in forms]
        attempt = _macaulay_attempt(moved, degrees)
        if attempt.value is not None:
            attempt.change = change
            attempt.notes.append("degenerate extraneous minor; coordinate change applied")
            return attempt
    return _macaulay_perturbed(forms, degrees)


def _macaulay_perturbed(forms: Sequence[Poly], degrees: Sequence[int]) -> MacaulayData:
    from sympy import QQ
    from sympy.polys.rings import ring as poly_ring

    base = forms[0].ring
    names = (base.variable + ",eps") if base.kind == "Q[t]" else "eps"
    R = poly_ring(names, QQ)[0]
    eps = R.gens[-1]
    n1 = len(forms)

    def lift(c):
        c = base.coerce(c)
        if base.kind == "Q[t]":
            if not c.is_polynomial():
                raise ValueError("perturbation fallback needs polynomial coefficients")
            out = R.zero
            for (k,), q in c.num.terms():
                out += R(q) * R.gens[0] ** k
            return out
        from delpair.exact.rings import _qq

        return R(_qq(c))

    D = sum(d - 1 for d in degrees) + 1
    mons = monomials(n1, D)
    index = {m: i for i, m in enumerate(mons)}
    rows, reduced = [], []
    for alpha in mons:
        divisible = [i for i in range(n1) if alpha[i] >= degrees[i]]
        i = divisible[0]
        reduced.append(len(divisible) == 1)
        shift = list(alpha)
        shift[i] -= degrees[i]
        row = [R.zero] * len(mons)
        for exp, c in forms[i].terms.items():
            row[index[tuple(a + b for a, b in zip(exp, shift))]] += lift(c)
        row[index[tuple(alpha)]] += eps
        rows.append(row)
    keep = [i for i, r in enumerate(reduced) if not r]
    minor = [[rows[i][j] for j in keep] for i in keep]
    num = det_fraction_free(rows)
    den = det_fraction_free(minor) if minor else R.one
    quotient = num.exquo(den)
    at_zero = quotient.evaluate(eps, 0)
    if base.kind == "Q[t]":
        value = base.coerce(base.poly_ring.from_dict(dict(at_zero.terms())))
    else:
        value = base.coerce(_fraction(at_zero))
    return MacaulayData(value, None, None, len(mons), len(keep), notes=["generalised characteristic polynomial fallback"])


def _fraction(x):
    from delpair.exact.rings import qq_to_fraction

    if hasattr(x, "LC"):
        return qq_to_fraction(x.LC) if x else 0
    return qq_to_fraction(x)


def resultant(forms: Sequence[Poly], degrees: Sequence[int] | None = None):
    """Res of n + 1 forms: Sylvester for binary forms, Macaulay otherwise."""
    if degrees is None:
        degrees = [f.homogeneous_degree() for f in forms]
    if len(forms) == 1:
        # a single form on P^0 is a constant; its resultant is that constant
        return forms[0].constant_term()
    if len(forms) == 2:
        return sylvester_resultant(forms[0], forms[1], degrees[0], degrees[1])
    return macaulay_resultant(forms, degrees).value
