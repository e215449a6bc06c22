import pytest

from delpair.errors import (
    ArityMismatch,
    HomogeneityError,
    InvalidSection,
    UnsupportedDimension,
    UnsupportedRing,
    ZeroAtInfinity,
)
from delpair.exact.rings import BaseRing
from delpair.family import (
    ProjectiveFamily,
    SectionSequence,
    certify_regular,
    intersection_number,
    order_permuted_is_regular,
    sequence,
    zero_locus_algebra,
)
from delpair.norm import companion_algebra, norm_element

Q = BaseRing.rationals()
Z = BaseRing.integers()
T = BaseRing.polynomials("t")
P1 = ProjectiveFamily(Q, 1)
P1T = ProjectiveFamily(T, 1)


def test_certify_examples():
    c = certify_regular(sequence(P1, "x0", "x1"))
    assert c.certified and c.resultants[-1] == 1
    c = certify_regular(sequence(P1T, "x0^2 - t*x1^2", "x0 - x1"))
    assert c.certified and T.text(c.resultants[-1]) == "1 - t"
    c = certify_regular(sequence(P1, "x0", "x0"))
    assert not c.certified and c.failing_index == 2


def test_global_regularity_refutation_lists_bad_fibres():
    c = certify_regular(sequence(P1T, "x0^2 - t*x1^2", "x0 - x1"), global_=True)
    assert not c.certified and c.generic
    assert c.bad_fibers == ("-1 + t",)
    assert c.is_bad_fiber(1) and not c.is_bad_fiber(2)
    c = certify_regular(sequence(ProjectiveFamily(Z, 1), "2*x0 + 3*x1", "x0 - x1"), global_=True)
    assert c.bad_fibers == ("5",)


def test_global_certificate_with_unit_resultants():
    c = certify_regular(sequence(P1T, "x0", "x1 + t*x0"), global_=True)
    assert c.certified and c.scope == "global"


def test_small_prime_not_reported_spuriously():
    # (x2, g, f) over Z: the prefix (x2, g) is regular mod 3 even though random
    # linear paddings often miss this over F_3
    fam = ProjectiveFamily(Z, 2)
    seq = sequence(
        fam,
        "x2",
        "-5*x0^2 + x0*x1 + 4*x0*x2 + 2*x1*x2 - 4*x2^2",
        "2*x0^2 - 5*x0*x1 + x1^2 + x1*x2 + 5*x2^2",
    )
    c = certify_regular(seq, global_=True)
    assert "3" not in c.bad_fibers
    assert order_permuted_is_regular(seq, [2, 1, 0], global_=True)


def test_order_lemma_examples():
    assert order_permuted_is_regular(sequence(P1, "x0", "x1"), [1, 0])
    assert order_permuted_is_regular(sequence(P1, "x0", "x0"), [1, 0])
    assert not certify_regular(sequence(P1, "x0", "x0").permuted([1, 0])).certified
    seq = sequence(P1T, "x0^2 - t*x1^2", "x0 - x1")
    a = certify_regular(seq).resultants[-1]
    b = certify_regular(seq.permuted([1, 0])).resultants[-1]
    assert a == b or a == -b


def test_intersection_numbers():
    assert intersection_number(1, [2]) == 2
    assert intersection_number(2, [2, 3]) == 6
    assert intersection_number(0, [], companion_algebra(Q, [-2, 0, 1])) == 2
    with pytest.raises(ArityMismatch):
        intersection_number(2, [2])


def test_zero_locus_examples():
    z = zero_locus_algebra(P1.section("x0^2 - 2*x1^2"))
    assert z.text() == "Q[x]/(x^2 - 2)" and z.algebra.n == 2
    assert norm_element(z.x()) == -2
    assert zero_locus_algebra(P1.section("x0")).text() == "Q[x]/(x)"
    assert zero_locus_algebra(P1T.section("x0^2 - t*x1^2")).text() == "Q[t][x]/(x^2 - t)"


def test_zero_locus_chart_change():
    z = zero_locus_algebra(P1T.section("t*x0 - x1"))
    assert z.change != ((1, 0), (0, 1))
    with pytest.raises(ZeroAtInfinity):
        zero_locus_algebra(P1T.section("t*x0^2 + (1 + t)*x1^2"))


def test_section_validation():
    with pytest.raises(HomogeneityError):
        P1.section("x0^2 + x1", 2)
    with pytest.raises(InvalidSection):
        P1.section("x0 - x0", 1)
    with pytest.raises(UnsupportedDimension):
        ProjectiveFamily(Q, 4)
    with pytest.raises(ArityMismatch):
        SectionSequence([P1.section("x0"), P1.section("x1"), P1.section("x0 + x1")])


def test_cone_base_not_certifiable():
    fam = ProjectiveFamily(BaseRing.cone(), 1)
    with pytest.raises(UnsupportedRing):
        certify_regular(sequence(fam, "x0", "x1"))


def test_permuted_convention():
    seq = sequence(P1, "x0^2", "x1")
    assert seq.permuted([1, 0]).texts() == ["x1", "x0^2"]
