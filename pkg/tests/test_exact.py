import itertools
import math
import random
from fractions import Fraction

import pytest

from delpair.errors import ParseError, SingularInput
from delpair.exact.matrix import det_expansion, det_fraction_free, inverse_fraction, mat_mul, rank_over_field
from delpair.exact.poly import Poly, parse_poly
from delpair.exact.resultant import macaulay_resultant, resultant, sylvester_resultant
from delpair.exact.rings import BaseRing
from delpair.exact.smith import INCOMPARABLE, smith_normal_form, unit_ratio

Q = BaseRing.rationals()
Z = BaseRing.integers()
T = BaseRing.polynomials("t")
t = T.symbol("t")


def leibniz(m):
    """Independent determinant oracle: sum over permutations."""
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term = term * m[i][perm[i]]
        total = total + term
    return total


def minors_gcd(m, k):
    n = len(m)
    g = 0
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(n), k):
            g = math.gcd(g, int(leibniz([[m[r][c] for c in cols] for r in rows])))
    return g


def snf_oracle(m):
    """Invariant factors over Z from determinantal divisors d_k / d_{k-1}."""
    out, prev = [], 1
    for k in range(1, len(m) + 1):
        dk = minors_gcd(m, k)
        if dk == 0:
            break
        out.append(dk // prev)
        prev = dk
    return out


def unimodular(rng, n):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(6):
        i, j = rng.sample(range(n), 2)
        e = rng.choice([-2, -1, 1, 2])
        m = [[m[r][c] + (e * m[j][c] if r == i else 0) for c in range(n)] for r in range(n)]
    return m


# determinants ---------------------------------------------------------------


def test_det_examples():
    assert det_fraction_free([[0, 2], [1, 0]]) == -2
    assert det_fraction_free([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det_fraction_free([[t, 1], [1, t]]) == t**2 - 1


def test_det_matches_leibniz_over_q():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(1, 5)
        m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        assert det_fraction_free(m) == leibniz(m)


def test_det_matches_leibniz_over_qt():
    rng = random.Random(2)
    for _ in range(20):
        n = rng.randint(1, 4)
        m = [[rng.randint(-3, 3) + rng.randint(-3, 3) * t for _ in range(n)] for _ in range(n)]
        m = [[T.coerce(x) for x in row] for row in m]
        assert det_fraction_free(m) == leibniz(m)
        assert det_expansion(m) == leibniz(m)


def test_det_multiplicative_200():
    rng = random.Random(3)
    for _ in range(200):
        a = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        b = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        assert det_fraction_free(mat_mul(a, b)) == det_fraction_free(a) * det_fraction_free(b)


def test_rank_and_inverse():
    assert rank_over_field([[1, 2], [2, 4]]) == 1
    assert rank_over_field([[1, 2], [3, 4]]) == 2
    m = [[2, 1], [7, 4]]
    inv = inverse_fraction(m)
    assert mat_mul(m, inv) == [[1, 0], [0, 1]]


# Smith normal form ----------------------------------------------------------


def test_smith_examples():
    assert [int(q) for q in smith_normal_form([[2, 0], [0, 3]], Z).invariants] == [1, 6]
    assert [int(q) for q in smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]], Z).invariants] == [1, 1, 1]
    snf = smith_normal_form([[t, 0], [0, t**2]], T)
    assert list(snf.invariants) == [t, t**2]


def test_smith_matches_determinantal_divisors():
    rng = random.Random(4)
    for _ in range(40):
        m = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
        snf = smith_normal_form(m, Z)
        expected = snf_oracle(m)
        assert [abs(int(q)) for q in snf.invariants[: len(expected)]] == expected


def test_smith_invariant_under_unimodular():
    rng = random.Random(5)
    for _ in range(30):
        m = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
        p, q = unimodular(rng, 3), unimodular(rng, 3)
        a = smith_normal_form(m, Z)
        b = smith_normal_form(mat_mul(mat_mul(p, m), q), Z)
        assert a.invariants == b.invariants and a.rank_deficiency == b.rank_deficiency


def test_smith_product_is_det_up_to_sign():
    rng = random.Random(6)
    for _ in range(30):
        m = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
        d = det_fraction_free(m)
        if d:
            assert abs(smith_normal_form(m, Z).product()) == abs(d)


def test_smith_divisibility_chain():
    rng = random.Random(7)
    for _ in range(30):
        m = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(4)]
        inv = [int(q) for q in smith_normal_form(m, Z).invariants]
        assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_unit_ratio_examples():
    rng = random.Random(8)
    p, q = unimodular(rng, 2), unimodular(rng, 2)
    u = [[2, 0], [0, 3]]
    assert unit_ratio(u, mat_mul(mat_mul(p, u), q), Z) in (1, -1)
    assert unit_ratio([[1, 0], [0, 6]], [[2, 0], [0, 3]], Z) in (1, -1)
    assert unit_ratio([[2, 0], [0, 2]], [[1, 0], [0, 4]], Z) is INCOMPARABLE


def test_unit_ratio_single_singular():
    with pytest.raises(SingularInput):
        unit_ratio([[1, 0], [0, 0]], [[1, 0], [0, 1]], Z)


def test_unit_ratio_over_q_is_field_ratio():
    assert unit_ratio([[2, 0], [0, 3]], [[1, 0], [0, 1]], Q) == 6


# polynomials ----------------------------------------------------------------


def test_poly_canonical_text_round_trip():
    for text in ["x0^2 - t*x1^2", "x0 - x1", "1/2*x0*x1 + x1^2", "x0^3 - 3*x0*x1^2 + (1 - t)*x1^3"]:
        ring = T
        p = parse_poly(text, ring, ("x0", "x1"))
        assert parse_poly(p.text(), ring, ("x0", "x1")) == p


def test_poly_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("x0^^2", Q, ("x0", "x1"))
    with pytest.raises(ParseError):
        parse_poly("x0 + y", Q, ("x0", "x1"))
    with pytest.raises(ParseError):
        parse_poly("(x0", Q, ("x0", "x1"))


def test_poly_never_stores_zero_terms():
    p = parse_poly("x0 - x0 + x1", Q, ("x0", "x1"))
    assert p.text() == "x1"
    assert all(c for c in p.terms.values())


def test_homogeneity():
    assert parse_poly("x0^2 + x0*x1", Q, ("x0", "x1")).homogeneous_degree() == 2
    assert parse_poly("x0^2 + x1", Q, ("x0", "x1")).homogeneous_degree() is None


# resultants -----------------------------------------------------------------

VARS1 = ("x0", "x1")
VARS2 = ("x0", "x1", "x2")


def linear_product(rng, vars_, k):
    factors = []
    p = Poly.constant(Q, vars_, 1)
    for _ in range(k):
        coeffs = [rng.randint(-4, 4) for _ in vars_]
        if not any(coeffs):
            coeffs[0] = 1
        factors.append(coeffs)
        p = p * Poly(Q, vars_, {tuple(int(j == i) for j in range(len(vars_))): c for i, c in enumerate(coeffs) if c})
    return p, factors


def test_sylvester_product_over_roots():
    # Res(prod(a_i x0 + b_i x1), prod(c_j x0 + d_j x1)) = prod(a_i d_j - b_i c_j)
    rng = random.Random(9)
    for _ in range(40):
        k1, k2 = rng.randint(1, 3), rng.randint(1, 3)
        f, fa = linear_product(rng, VARS1, k1)
        g, ga = linear_product(rng, VARS1, k2)
        oracle = 1
        for a, b in fa:
            for c, d in ga:
                oracle *= a * d - b * c
        assert sylvester_resultant(f, g, k1, k2) == oracle


def test_resultant_coordinate_normalisation():
    x = [Poly.gen(Q, VARS2, v) for v in VARS2]
    assert resultant([x[0] ** 2, x[1] ** 3, x[2]], [2, 3, 1]) == 1
    assert resultant(x, [1, 1, 1]) == 1


def test_macaulay_product_of_linear_forms():
    # Res(prod l_i, prod m_j, prod n_k) = prod det(l_i, m_j, n_k)
    rng = random.Random(10)
    for _ in range(12):
        ks = [rng.randint(1, 2) for _ in range(3)]
        forms, facs = zip(*(linear_product(rng, VARS2, k) for k in ks))
        oracle = 1
        for a in facs[0]:
            for b in facs[1]:
                for c in facs[2]:
                    oracle *= leibniz([a, b, c])
        assert resultant(list(forms), ks) == oracle


def test_macaulay_degree_zero_slot():
    x = [Poly.gen(Q, VARS2, v) for v in VARS2]
    five = Poly.constant(Q, VARS2, 5)
    # a constant in the last slot: Res(f, g, c) = c^(d1 d2)
    assert macaulay_resultant([x[0] ** 2 + x[1] ** 2, x[1] * x[2] + x[0] ** 2, five], [2, 2, 0]).value == 5**4


def test_rational_function_specialisation():
    assert T.specialize((t**2 - 1) / (t + 2), 3) == Fraction(8, 5)
