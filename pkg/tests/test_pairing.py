import random
from fractions import Fraction

import pytest

from delpair.errors import LawViolation, NotCertified
from delpair.exact.rings import BaseRing
from delpair.family import ProjectiveFamily, sequence
from delpair.norm import companion_algebra
from delpair.pairing import (
    ScalarIsomorphism,
    apply_isomorphism,
    pairing_section,
    permutation_sign,
    symmetry_unit,
    tower_section,
    verify_base_change,
    verify_isomorphism,
    verify_multiadditivity,
    verify_projection_formula,
    verify_pullback_formula,
    verify_restriction_to_divisor,
    verify_route_equivalence,
    verify_symmetry,
    verify_symmetry_composition,
)

Q = BaseRing.rationals()
Z = BaseRing.integers()
T = BaseRing.polynomials("t")
t = T.symbol("t")
P1 = ProjectiveFamily(Q, 1)
P1T = ProjectiveFamily(T, 1)
P2 = ProjectiveFamily(Q, 2)


def test_pairing_examples():
    assert pairing_section(sequence(P1, "x0", "x1")).value == 1
    cert = pairing_section(sequence(P1T, "x0^2 - t*x1^2", "x0 - x1"))
    assert cert.to_dict()["pairing_section"] == "1 - t"
    assert cert.normalization == "sylvester"
    assert pairing_section(sequence(P2, "x0", "x1", "x2")).value == 1
    assert pairing_section(sequence(P1, "x0^2 - 2*x1^2", "x0 - 3*x1")).value == 7


def test_iterated_route_matches_product_over_roots():
    # f = (x0 - a x1)(x0 - b x1) has Z(f) = {a, b}; <f, g> = g(a, 1) g(b, 1)
    rng = random.Random(21)
    for _ in range(20):
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        g = [rng.randint(-4, 4) for _ in range(3)]
        if not any(g):
            continue
        f_text = f"(x0 - ({a})*x1)*(x0 - ({b})*x1)"
        g_text = f"({g[0]})*x0^2 + ({g[1]})*x0*x1 + ({g[2]})*x1^2"
        if not any(g[0] * r * r + g[1] * r + g[2] for r in (a, b)):
            continue
        seq = sequence(P1, f_text, g_text)
        oracle = 1
        for r in (a, b):
            oracle *= g[0] * r * r + g[1] * r + g[2]
        assert pairing_section(seq, "iterated_nm").reference_value == oracle
        assert pairing_section(seq, "sylvester").value == oracle


def test_not_certified():
    with pytest.raises(NotCertified):
        pairing_section(sequence(P2, "x0", "x0", "x1"))


def test_route_equivalence_named_example():
    rep = verify_route_equivalence(sequence(P1T, "x0^2 - t*x1^2", "x0 - x1"))
    assert rep.verdict == "pass" and rep.values["iterated_nm"] == rep.values["sylvester"] == "1 - t"


def test_multiadditivity_examples():
    rep = verify_multiadditivity(sequence(P1, "x0*x0", "x1"), sequence(P1, "x0", "x1"), 0)
    assert rep.verdict == "pass"
    rep = verify_multiadditivity(sequence(P1T, "x0^2 - t*x1^2", "x0 - x1"), sequence(P1T, "x0^2 - t*x1^2", "x0 + x1"), 1)
    assert rep.verdict == "pass"
    assert rep.values["first"] == rep.values["second"] == "1 - t"


def test_symmetry_examples():
    rep = verify_symmetry(sequence(P1, "x0", "x1"), [1, 0])
    assert rep.verdict == "pass" and rep.unit == "-1"
    rep = verify_symmetry(sequence(P1, "x0", "x1"), [0, 1])
    assert rep.unit == "1"
    assert permutation_sign([1, 2, 0]) == 1 and permutation_sign([1, 0, 2]) == -1
    assert symmetry_unit([1, 0], [2, 1]) == 1
    assert symmetry_unit([1, 0], [3, 1]) == -1


def test_symmetry_composition():
    seq = sequence(P2, "x0 + x1", "x1^2 - x2^2", "x2 + 2*x0")
    assert verify_symmetry_composition(seq, [1, 2, 0], [2, 0, 1]).verdict == "pass"


def test_base_change_examples():
    seq = sequence(P1T, "x0^2 - t*x1^2", "x0 - x1")
    rep = verify_base_change(seq, 4)
    assert rep.verdict == "pass" and rep.values["specialized_pairing"] == "-3"
    assert verify_base_change(seq, 0).values["specialized_pairing"] == "1"
    assert verify_base_change(seq, 1).verdict == "degenerate"


def test_pullback_examples():
    s = P1.section("x0^2 - 2*x1^2")
    assert verify_pullback_formula([s], 3).values["expected"] == "9"
    assert verify_pullback_formula([s], 1).verdict == "pass"
    rep = verify_pullback_formula([P1T.section("x0^2 - t*x1^2")], t + 1)
    assert rep.verdict == "pass" and rep.values["expected"] == T.text((t + 1) ** 2)
    rep = verify_pullback_formula([P2.section("x0^2 + x1*x2"), P2.section("x1^3 - x2^3")], 2)
    assert rep.verdict == "pass" and rep.values["delta"] == 6
    rep = verify_pullback_formula(None, 5, algebra=companion_algebra(Q, [-2, 0, 1]))
    assert rep.verdict == "pass"


def test_restriction_examples():
    for seq in (
        sequence(P1, "x0^2 - 2*x1^2", "x0 - 3*x1"),
        sequence(P1, "x0", "x1"),
        sequence(P1T, "x0^2 - t*x1^2", "x0 - x1"),
    ):
        rep = verify_restriction_to_divisor(seq)
        assert rep.verdict == "pass" and rep.unit == "1"
    rep = verify_restriction_to_divisor(sequence(P1, "x0^2 - 2*x1^2", "x0 - 3*x1"))
    assert rep.values["route_A"] == rep.values["route_B"] == "7"


def test_restriction_over_integers():
    rep = verify_restriction_to_divisor(sequence(ProjectiveFamily(Z, 1), "x0^2 + 3*x1^2", "x0 - 2*x1"))
    assert rep.verdict == "pass"


def test_isomorphism_examples():
    cert = pairing_section(sequence(P1, "x0", "x1"))
    assert apply_isomorphism(cert, ScalarIsomorphism((5, 1))).value == 5
    assert apply_isomorphism(cert, ScalarIsomorphism((1, 1))).value == 1
    cert = pairing_section(sequence(P1, "x0^2 - 2*x1^2", "x0 - 3*x1"))
    assert apply_isomorphism(cert, ScalarIsomorphism((2, 1))).value == 14
    assert verify_isomorphism(sequence(P1, "x0^2 - 2*x1^2", "x0 - 3*x1"), ScalarIsomorphism((2, 3))).verdict == "pass"


def test_isomorphism_law_violation_detected():
    cert = pairing_section(sequence(P1, "x0", "x1"))
    forged = type(cert)(cert.value + 1, cert.normalization, cert.unit_ambiguity, cert.trace, cert.sequence)
    with pytest.raises(LawViolation):
        apply_isomorphism(forged, ScalarIsomorphism((2, 1)))


def test_projection_formula_examples():
    s1 = P1.section("x0^2 - 2*x1^2")
    rep = verify_projection_formula(s1, tower_section(Q, "y0", 0, 1), tower_section(Q, "y1", 0, 1))
    assert rep.verdict == "pass"
    rep = verify_projection_formula(
        P1.section("x0 - 3*x1"), tower_section(Q, "x1*y0 - x0*y1", 1, 1), tower_section(Q, "y1", 0, 1)
    )
    assert rep.verdict == "pass"
    rep = verify_projection_formula(
        P1T.section("x0^2 - t*x1^2"), tower_section(T, "x1*y0^2 - x0*y1^2", 1, 2), tower_section(T, "t*y0 + y1", 0, 1)
    )
    assert rep.verdict == "pass"


def test_scalar_isomorphism_factor():
    assert ScalarIsomorphism((2, 3)).factor([2, 1]) == 2 * 9
    assert ScalarIsomorphism((Fraction(1, 2), 3, 5)).factor([1, 2, 3]) == Fraction(1, 2) ** 6 * 3**3 * 5**2
