"""Norms for finite algebras over a normal base.

A finite algebra B over A is described by structure constants on a basis of
B (x) K, K = Frac(A).  The norm of f is det(L_f), L_f the multiplication-by-f
operator; it is computed over K and then certified to lie in A when f is
integral.  Non-flat algebras (rank jumps over special points) need no special
treatment since nothing ever leaves the generic fibre.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from delpair.errors import IntegralityViolation, InvalidAlgebra, NotModuleLinear, SpecializationPole
from delpair.exact.matrix import det_fraction_free, mat_mul
from delpair.exact.rings import BaseRing


class FiniteAlgebra:
    """Commutative associative algebra with basis e_0..e_{n-1} over Frac(base).

    ``structure[i][j][k]`` is the e_k-coordinate of e_i * e_j.  ``modulus``,
    when present, is the ascending coefficient list of the monic polynomial p
    such that the algebra is K[x]/(p) with basis 1, x, ..., x^(n-1).
    """

    def __init__(self, base: BaseRing, structure, unit_coords, *, modulus=None, label: str = "", validate: bool = True):
        self.base = base
        n = len(unit_coords)
        self.n = n
        if n < 1:
            raise InvalidAlgebra("basis must be nonempty")
        self.structure = tuple(
            tuple(tuple(base.coerce(c) for c in structure[i][j]) for j in range(n)) for i in range(n)
        )
        if any(len(structure[i]) != n or any(len(structure[i][j]) != n for j in range(n)) for i in range(n)):
            raise InvalidAlgebra("structure constants must be an n x n x n table")
        self.unit_coords = tuple(base.coerce(c) for c in unit_coords)
        self.modulus = tuple(base.coerce(c) for c in modulus) if modulus is not None else None
        self.label = label
        self._basis_matrices = [
            [[self.structure[i][j][k] for j in range(n)] for k in range(n)] for i in range(n)
        ]
        if validate:
            self.validate()

    @property
    def rank(self) -> int:
        return self.n

    def validate(self):
        n, c = self.n, self.structure
        for i in range(n):
            for j in range(i + 1, n):
                if c[i][j] != c[j][i]:
                    raise InvalidAlgebra(f"e{i}*e{j} != e{j}*e{i}")
        # associativity: L_i L_j = L_{e_i e_j}
        for i in range(n):
            for j in range(i, n):
                lhs = mat_mul(self._basis_matrices[i], self._basis_matrices[j])
                rhs = self._combination(c[i][j])
                if lhs != rhs:
                    raise InvalidAlgebra(f"associativity fails for basis pair ({i}, {j})")
        one = self.one
        for j in range(n):
            e = self.basis(j)
            if one * e != e:
                raise InvalidAlgebra("unit_coords is not a two-sided identity")

    def _combination(self, coords) -> list[list]:
        n = self.n
        zero = self.base.zero
        out = [[zero] * n for _ in range(n)]
        for i, a in enumerate(coords):
            if not a:
                continue
            mat = self._basis_matrices[i]
            for r in range(n):
                row, src = out[r], mat[r]
                for s in range(n):
                    if src[s]:
                        row[s] = row[s] + a * src[s]
        return out

    def multiplication_matrix(self, f: AlgebraElement) -> list[list]:
        """Matrix of v -> f v; column j holds the coordinates of f * e_j."""
        return self._combination(f.coords)

    def basis(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, [int(k == i) for k in range(self.n)])

    @property
    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit_coords)

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [0] * self.n)

    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(self, coords)

    def scalar(self, s) -> AlgebraElement:
        s = self.base.coerce(s)
        return AlgebraElement(self, [s * u for u in self.unit_coords])

    def has_integral_structure(self) -> bool:
        return all(self.base.contains(c) for plane in self.structure for row in plane for c in row) and all(
            self.base.contains(c) for c in self.unit_coords
        )

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAlgebra)
            and self.base == other.base
            and self.structure == other.structure
            and self.unit_coords == other.unit_coords
        )

    def __hash__(self):
        return hash((self.base, self.structure, self.unit_coords))

    def __repr__(self):
        return f"FiniteAlgebra(rank={self.n}, base={self.base}{', ' + self.label if self.label else ''})"


class AlgebraElement:
    __slots__ = ("parent", "coords")

    def __init__(self, parent: FiniteAlgebra, coords: Sequence):
        if len(coords) != parent.n:
            raise ValueError(f"expected {parent.n} coordinates, got {len(coords)}")
        self.parent = parent
        self.coords = tuple(parent.base.coerce(c) for c in coords)

    def _other(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            return other
        return self.parent.scalar(other)

    def __add__(self, other):
        o = self._other(other)
        return AlgebraElement(self.parent, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.parent, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            c = self.parent.base.coerce(other)
            return AlgebraElement(self.parent, [a * c for a in self.coords])
        mat = self.parent.multiplication_matrix(self)
        n = self.parent.n
        coords = []
        for k in range(n):
            acc = self.parent.base.zero
            for j, b in enumerate(other.coords):
                if b and mat[k][j]:
                    acc = acc + mat[k][j] * b
            coords.append(acc)
        return AlgebraElement(self.parent, coords)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.parent.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return self == self._other(other)
        return self.parent is other.parent and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def has_integral_coords(self) -> bool:
        return all(self.parent.base.contains(c) for c in self.coords)

    def __repr__(self):
        base = self.parent.base
        return f"AlgebraElement([{', '.join(base.text(c) for c in self.coords)}])"


# ---------------------------------------------------------------------------
# constructors


def companion_algebra(base: BaseRing, modulus: Sequence, label: str = "") -> FiniteAlgebra:
    """K[x]/(p) for monic p given by ascending coefficients [c0, ..., c_{k-1}, 1]."""
    p = [base.coerce(c) for c in modulus]
    k = len(p) - 1
    if k < 1:
        raise InvalidAlgebra("companion algebra needs a polynomial of degree >= 1")
    if p[-1] != 1:
        raise InvalidAlgebra("modulus must be monic")
    zero = base.zero
    # powers[m] = coordinates of x^m modulo p, for m <= 2k - 2
    powers = [[base.coerce(int(i == m)) for i in range(k)] for m in range(k)]
    for m in range(k, 2 * k - 1):
        prev = powers[m - 1]
        top = prev[k - 1]
        shifted = [zero] + prev[:-1]
        powers.append([s - top * p[i] for i, s in enumerate(shifted)])
    structure = [[powers[i + j] for j in range(k)] for i in range(k)]
    unit = [base.coerce(int(i == 0)) for i in range(k)]
    return FiniteAlgebra(base, structure, unit, modulus=p, label=label or "companion", validate=False)


def cone_algebra() -> FiniteAlgebra:
    """Q[x, y] over A = Q[a, b, c]/(ac - b^2) with a = x^2, b = xy, c = y^2.

    Generic rank 2 with basis (1, x); the morphism is finite but not flat at
    the vertex.
    """
    base = BaseRing.cone()
    a = base.symbol("a")
    structure = [[[1, 0], [0, 1]], [[0, 1], [a, 0]]]
    return FiniteAlgebra(base, structure, [1, 0], modulus=[-a, 0, 1], label="cone")


def direct_product(first: FiniteAlgebra, second: FiniteAlgebra) -> FiniteAlgebra:
    """B1 x B2 with the concatenated basis (a disconnected finite cover)."""
    if first.base != second.base:
        raise InvalidAlgebra("factors live over different bases")
    n1, n2 = first.n, second.n
    n = n1 + n2
    zero = first.base.zero
    structure = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            structure[i][j][:n1] = first.structure[i][j]
    for i in range(n2):
        for j in range(n2):
            structure[n1 + i][n1 + j][n1:] = second.structure[i][j]
    unit = list(first.unit_coords) + list(second.unit_coords)
    return FiniteAlgebra(first.base, structure, unit, label=f"{first.label} x {second.label}")


def change_basis(algebra: FiniteAlgebra, p: Sequence[Sequence[int]]) -> FiniteAlgebra:
    """The same algebra in the basis f_j = sum_i p[i][j] e_i (p invertible over Q)."""
    from delpair.exact.matrix import inverse_fraction

    n = algebra.n
    inv = inverse_fraction(p)
    cols = [algebra.element([p[i][j] for i in range(n)]) for j in range(n)]

    def new_coords(v: AlgebraElement):
        return [sum((inv[r][k] * v.coords[k] for k in range(n)), algebra.base.zero) for r in range(n)]

    structure = [[new_coords(cols[a] * cols[b]) for b in range(n)] for a in range(n)]
    unit = new_coords(algebra.one)
    return FiniteAlgebra(algebra.base, structure, unit, label=algebra.label)


# ---------------------------------------------------------------------------
# operations


def norm_element(f: AlgebraElement):
    """Nm(f) = det(L_f) in Frac(A), certified integral when f is integral."""
    algebra = f.parent
    value = algebra.base.coerce(det_fraction_free(algebra.multiplication_matrix(f)))
    if f.has_integral_coords() and algebra.has_integral_structure() and not algebra.base.contains(value):
        raise IntegralityViolation(f"norm {algebra.base.text(value)} of an integral element is not in {algebra.base}")
    return value


@dataclass(frozen=True)
class ModuleMapNorm:
    value: object
    injective: bool


def norm_module_map(h: Sequence[Sequence], algebra: FiniteAlgebra) -> ModuleMapNorm:
    """Norm of a B-linear endomorphism h of B (x) K given in the basis of ``algebra``."""
    base = algebra.base
    h = [[base.coerce(x) for x in row] for row in h]
    if len(h) != algebra.n or any(len(row) != algebra.n for row in h):
        raise NotModuleLinear("matrix size does not match the algebra rank")
    for i in range(algebra.n):
        li = algebra._basis_matrices[i]
        if mat_mul(h, li) != mat_mul(li, h):
            raise NotModuleLinear(f"h does not commute with multiplication by e{i}")
    value = base.coerce(det_fraction_free(h))
    return ModuleMapNorm(value, bool(value))


def base_change_algebra(algebra: FiniteAlgebra, t0) -> FiniteAlgebra:
    """Specialise an algebra over Q[t] at t = t0 (an algebra over Q)."""
    base = algebra.base
    q = BaseRing.rationals()
    try:
        structure = [[[base.specialize(c, t0) for c in row] for row in plane] for plane in algebra.structure]
        unit = [base.specialize(c, t0) for c in algebra.unit_coords]
        modulus = [base.specialize(c, t0) for c in algebra.modulus] if algebra.modulus else None
    except SpecializationPole as exc:
        raise SpecializationPole(f"structure constants have a pole at t = {t0}: {exc}") from None
    return FiniteAlgebra(q, structure, unit, modulus=modulus, label=f"{algebra.label}|t={t0}")


def specialize_element(f: AlgebraElement, specialized: FiniteAlgebra, t0) -> AlgebraElement:
    base = f.parent.base
    return AlgebraElement(specialized, [base.specialize(c, t0) for c in f.coords])


@dataclass(frozen=True)
class PullbackPower:
    computed: object
    expected: object
    equal: bool


def pullback_power_check(algebra: FiniteAlgebra, m) -> PullbackPower:
    """Compare Nm(m * 1_B) with m^n."""
    base = algebra.base
    m = base.coerce(m)
    computed = norm_element(algebra.scalar(m))
    expected = m**algebra.n
    return PullbackPower(computed, expected, computed == expected)
