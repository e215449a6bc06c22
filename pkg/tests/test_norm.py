import random
from fractions import Fraction

import numpy as np
import pytest

from delpair.errors import InvalidAlgebra, NotModuleLinear, SpecializationPole
from delpair.exact.rings import BaseRing
from delpair.norm import (
    FiniteAlgebra,
    base_change_algebra,
    change_basis,
    companion_algebra,
    cone_algebra,
    direct_product,
    norm_element,
    norm_module_map,
    pullback_power_check,
    specialize_element,
)

Q = BaseRing.rationals()
Z = BaseRing.integers()
T = BaseRing.polynomials("t")
t = T.symbol("t")


def roots_product(modulus_ascending, coords):
    """Oracle: Nm(g(x)) in Q[x]/(p), p monic, equals prod g(r) over roots r of p."""
    roots = np.roots([float(c) for c in reversed(modulus_ascending)])
    g = np.poly1d([float(c) for c in reversed(coords)])
    return complex(np.prod([g(r) for r in roots]))


def test_norm_examples():
    alg = companion_algebra(Q, [-2, 0, 1])
    assert norm_element(alg.basis(1)) == -2
    assert norm_element(alg.one) == 1
    cubic = companion_algebra(Q, [5, -1, 3, 1])
    assert norm_element(cubic.scalar(7)) == 7**3


def test_norm_against_product_of_roots():
    rng = random.Random(11)
    for _ in range(50):
        k = rng.randint(1, 4)
        p = [rng.randint(-5, 5) for _ in range(k)] + [1]
        coords = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(k)]
        alg = companion_algebra(Q, p)
        exact = norm_element(alg.element(coords))
        assert abs(float(exact) - roots_product(p, coords)) < 1e-6 * max(1.0, abs(float(exact)))


def test_cone_algebra_non_flat():
    cone = cone_algebra()
    a = cone.base.symbol("a")
    b = cone.base.symbol("b")
    c = cone.base.symbol("c")
    assert norm_element(cone.basis(1)) == -a
    # y = (b/a) x is integral with Nm(y) = -b^2/a = -c
    y = cone.element([0, b / a])
    assert norm_element(y) == -c
    assert pullback_power_check(cone, b).equal


def test_norm_over_qt_and_specialisation():
    alg = companion_algebra(T, [-t, 0, 1])
    x = alg.basis(1)
    assert norm_element(x) == -t
    spec = base_change_algebra(alg, 4)
    assert norm_element(specialize_element(x, spec, 4)) == -4


def test_base_change_constant_algebra_is_identical():
    alg = companion_algebra(T, [-2, 0, 1])
    spec = base_change_algebra(alg, Fraction(3, 7))
    assert spec.structure == companion_algebra(Q, [-2, 0, 1]).structure


def test_base_change_pole():
    alg = FiniteAlgebra(T, [[[1, 0], [0, 1]], [[0, 1], [1 / (t - 1), 0]]], [1, 0])
    with pytest.raises(SpecializationPole):
        base_change_algebra(alg, 1)


def test_pullback_power_examples():
    alg = companion_algebra(Q, [-2, 0, 1])
    r = pullback_power_check(alg, 5)
    assert (r.computed, r.expected, r.equal) == (25, 25, True)
    assert pullback_power_check(alg, 1).equal
    r = pullback_power_check(companion_algebra(T, [-t, 0, 1]), t + 1)
    assert r.computed == (t + 1) ** 2 and r.equal


def test_module_map_norm():
    alg = companion_algebra(Q, [-2, 0, 1])
    assert norm_module_map([[1, 0], [0, 1]], alg).value == 1
    x = alg.basis(1)
    assert norm_module_map(alg.multiplication_matrix(x), alg).value == norm_element(x)
    singular = companion_algebra(Q, [0, -1, 1])  # x(x - 1): x is a zero divisor
    m = norm_module_map(singular.multiplication_matrix(singular.basis(1)), singular)
    assert m.value == 0 and not m.injective
    with pytest.raises(NotModuleLinear):
        norm_module_map([[0, 1], [1, 0]], alg)


def test_invalid_algebras():
    with pytest.raises(InvalidAlgebra):
        FiniteAlgebra(Q, [[[1, 0], [0, 1]], [[1, 0], [0, 0]]], [1, 0])  # not commutative
    with pytest.raises(InvalidAlgebra):
        FiniteAlgebra(Q, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [0, 1])  # wrong unit


def test_integral_elements_have_integral_norms():
    rng = random.Random(13)
    for ring in (Z, T):
        for _ in range(20):
            k = rng.randint(1, 3)
            var = t if ring is T else 1
            p = [ring.coerce(rng.randint(-4, 4) + rng.randint(-2, 2) * var) for _ in range(k)] + [ring.one]
            alg = companion_algebra(ring, p)
            f = alg.element([ring.coerce(rng.randint(-4, 4) * var + rng.randint(-3, 3)) for _ in range(k)])
            assert ring.contains(norm_element(f))
    # fractional coordinates may leave the base ring without raising
    alg = companion_algebra(Z, [-3, 0, 1])
    assert norm_element(alg.element([0, Fraction(1, 2)])) == Fraction(-3, 4)


def test_direct_product_and_basis_change_preserve_norms():
    rng = random.Random(12)
    a1 = companion_algebra(Q, [-2, 0, 1])
    a2 = companion_algebra(Q, [3, 1])
    prod = direct_product(a1, a2)
    assert prod.n == 3
    for _ in range(10):
        u = [rng.randint(-4, 4) for _ in range(2)]
        v = [rng.randint(-4, 4)]
        f = prod.element(u + v)
        assert norm_element(f) == norm_element(a1.element(u)) * norm_element(a2.element(v))
    p = [[1, 2, 0], [0, 1, 0], [1, 1, 1]]
    changed = change_basis(prod, p)
    for _ in range(10):
        coords = [rng.randint(-4, 4) for _ in range(3)]
        old = [sum(p[i][j] * coords[j] for j in range(3)) for i in range(3)]
        assert norm_element(changed.element(coords)) == norm_element(prod.element(old))
