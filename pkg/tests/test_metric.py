import cmath
import math
import random

import pytest

from delpair.errors import SectionVanishesAtFiberPoint
from delpair.exact.rings import BaseRing
from delpair.family import ProjectiveFamily
from delpair.metric import (
    HermitianSection,
    convergence_table,
    fs_log_integral,
    metric_d0,
    metric_d0_exact_log,
    metric_d1,
    phase,
    verify_isometry_invariance,
    verify_order_independence,
    verify_pullback_metric_d0,
    verify_scalar_shift,
)
from delpair.norm import companion_algebra

Q = BaseRing.rationals()


def product_section(c, zeros):
    """c * prod (z0 q1 - z1 q0) over unit vectors (q0, q1), as a HermitianSection."""
    coeffs = [complex(c)]  # descending in x0
    for q0, q1 in zeros:
        # multiply by (q1 x0 - q0 x1)
        new = [0j] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            new[i] += a * q1
            new[i + 1] += -a * q0
        coeffs = new
    return HermitianSection.from_coefficients(coeffs)


def unit(z0, z1):
    r = math.sqrt(abs(z0) ** 2 + abs(z1) ** 2)
    return z0 / r, z1 / r


def fs_log_norm(s: HermitianSection, p) -> float:
    z0, z1 = unit(*p)
    return math.log(abs(s.evaluate(z0, z1)))


# d = 0 ----------------------------------------------------------------------


def test_metric_d0_examples():
    assert metric_d0([-2, 0, 1], [0, 1]).log_norm == pytest.approx(math.log(2), abs=1e-12)
    assert metric_d0([-5, 1], [1, 1]).log_norm == pytest.approx(math.log(6), abs=1e-12)
    assert metric_d0([1, 0, 1], [-1, 1]).log_norm == pytest.approx(math.log(2), abs=1e-12)


def test_metric_d0_matches_exact_norm():
    rng = random.Random(31)
    for _ in range(30):
        k = rng.randint(1, 4)
        alg = companion_algebra(Q, [rng.randint(-6, 6) for _ in range(k)] + [1])
        s = alg.element([rng.randint(-6, 6) for _ in range(k)])
        try:
            value = metric_d0(alg, s)
        except SectionVanishesAtFiberPoint:
            continue
        assert abs(value.log_norm - metric_d0_exact_log(s)) < 1e-10


def test_metric_d0_multiple_roots():
    # fibre (x - 1)^2 (x + 2): s = x + 3 gives 4^2 * 1
    alg = companion_algebra(Q, [2, -3, 0, 1])
    assert metric_d0(alg, [3, 1]).log_norm == pytest.approx(math.log(16), abs=1e-10)


def test_metric_d0_vanishing_section():
    with pytest.raises(SectionVanishesAtFiberPoint):
        metric_d0([-1, 0, 1], [-1, 1])  # x - 1 vanishes at the point x = 1


def test_pullback_metric_examples():
    assert verify_pullback_metric_d0([-2, 0, 1], 3).values["log_norm"] == pytest.approx(math.log(9))
    assert verify_pullback_metric_d0([-2, 0, 1], 1).values["log_norm"] == pytest.approx(0.0, abs=1e-12)
    rep = verify_pullback_metric_d0([1, 2, 3, 1], 1 + 1j)
    assert rep.passed and rep.values["log_norm"] == pytest.approx(3 * math.log(math.sqrt(2)))


# Fubini-Study integral ------------------------------------------------------


def test_fs_integral_closed_form():
    rng = random.Random(32)
    for _ in range(5):
        k = rng.randint(1, 3)
        zeros = [unit(complex(rng.gauss(0, 1), rng.gauss(0, 1)), complex(rng.gauss(0, 1), rng.gauss(0, 1))) for _ in range(k)]
        c = complex(rng.uniform(0.5, 3), rng.uniform(-1, 1))
        s = product_section(c, zeros)
        exact = math.log(abs(c)) - k / 2
        value, _ = fs_log_integral(s, 512)
        coarse, _ = fs_log_integral(s, 32)
        assert abs(value - exact) < 5e-3
        assert abs(value - exact) < abs(coarse - exact) + 1e-12


def test_fs_integral_monomial_convergence_monotone():
    s = HermitianSection.from_coefficients([1, 0])
    errors = [abs(fs_log_integral(s, n)[0] + 0.5) for n in (32, 64, 128, 256, 512)]
    assert all(b < a for a, b in zip(errors, errors[1:]))


# d = 1 ----------------------------------------------------------------------


def test_metric_d1_coordinate_pair():
    value = metric_d1(HermitianSection.from_coefficients([1, 0]), HermitianSection.from_coefficients([0, 1]))
    # log ||x1([0:1])|| = 0 and the integral of log ||x0|| is -1/2
    assert value.log_norm == pytest.approx(-0.5, abs=5e-3)
    assert value.quadrature_nodes == 512 * 512


def test_metric_d1_matches_closed_form():
    rng = random.Random(33)
    for _ in range(4):
        z1s = [unit(complex(rng.gauss(0, 1), rng.gauss(0, 1)), complex(rng.gauss(0, 1), rng.gauss(0, 1))) for _ in range(2)]
        s1 = product_section(2.0, z1s)
        s2 = HermitianSection.from_coefficients([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(2)])
        expected = sum(fs_log_norm(s2, p) for p in z1s) + s2.twist * (math.log(2.0) - 1.0)
        assert metric_d1(s1, s2).log_norm == pytest.approx(expected, abs=5e-3)


def test_order_swap_and_isometry():
    fam = ProjectiveFamily(Q, 1)
    s1 = HermitianSection.from_section(fam.section("x0^2 - 2*x1^2"))
    s2 = HermitianSection.from_section(fam.section("x0 - 3*x1"))
    assert verify_order_independence(s1, s2).passed
    assert verify_isometry_invariance(s1, s2, (1, 1)).values["difference"] == 0.0
    assert verify_isometry_invariance(s1, s2, (1j, 1)).passed
    assert verify_isometry_invariance(s1, s2, (phase(math.pi / 7), phase(math.pi / 7))).passed
    with pytest.raises(ValueError):
        verify_isometry_invariance(s1, s2, (2, 1))


def test_scalar_shift_sign():
    s1 = HermitianSection.from_coefficients([1, 0])
    s2 = HermitianSection.from_coefficients([1, -1, 3])
    rep = verify_scalar_shift(s1, s2, 2.0, expected_sign=1)
    assert rep.passed
    assert rep.values["shift"] == pytest.approx(2 * math.log(2), abs=1e-3)


def test_exact_multiplicities_from_gaussian_coefficients():
    s = HermitianSection.from_coefficients([1, -2, 1])  # (x0 - x1)^2
    zeros = s.zeros()
    assert len(zeros) == 1 and zeros[0][2] == 2
    s = HermitianSection.from_coefficients([(1, 0), (0, 0), (1, 0)])  # x0^2 + x1^2
    assert sorted(m for *_, m in s.zeros()) == [1, 1]


def test_zero_at_infinity_handled():
    s = HermitianSection.from_coefficients([0, 1, 2])  # x1 (x0 + 2 x1)
    points = {(round(abs(z0), 9), round(abs(z1), 9)) for z0, z1, _ in s.zeros()}
    assert (1.0, 0.0) in points


def test_convergence_table_and_phase_helper():
    table = convergence_table(HermitianSection.from_coefficients([1, 0]), HermitianSection.from_coefficients([0, 1]), (32, 64))
    assert [n for n, _ in table] == [32, 64]
    assert abs(phase(1.0) - cmath.exp(1j)) < 1e-15
