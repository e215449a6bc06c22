"""Seeded random instances and property suites.

Every suite draws from ``random.Random(f"{name}:{seed}")`` so a (name, seed,
count) triple always produces the same instances and the same report.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from delpair.errors import ZeroAtInfinity
from delpair.exact.matrix import det_fraction_free, mat_mul
from delpair.exact.poly import Poly
from delpair.exact.rings import BaseRing
from delpair.exact.smith import INCOMPARABLE, unit_ratio
from delpair.family import (
    BundleSection,
    ProjectiveFamily,
    SectionSequence,
    certify_regular,
    sequence,
    zero_locus_algebra,
)
from delpair.metric import (
    HermitianSection,
    metric_d0,
    metric_d0_exact_log,
    verify_isometry_invariance,
    verify_order_independence,
    verify_scalar_shift,
)
from delpair.norm import (
    FiniteAlgebra,
    base_change_algebra,
    change_basis,
    companion_algebra,
    cone_algebra,
    direct_product,
    norm_element,
    pullback_power_check,
    specialize_element,
)
from delpair.pairing import (
    ScalarIsomorphism,
    TowerSection,
    apply_isomorphism,
    pairing_section,
    verify_base_change,
    verify_multiadditivity,
    verify_projection_formula,
    verify_pullback_formula,
    verify_restriction_to_divisor,
    verify_route_equivalence,
    verify_symmetry,
    verify_symmetry_composition,
)

DEFAULT_SEED = 20240917

Q = BaseRing.rationals()
T = BaseRing.polynomials("t")
Z = BaseRing.integers()


@dataclass
class SuiteResult:
    name: str
    seed: int
    count: int
    passed: int = 0
    failed: int = 0
    degenerate: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.failed == 0 else "fail"

    def record(self, verdict: str, detail: dict | None = None):
        if verdict == "pass":
            self.passed += 1
        elif verdict == "degenerate":
            self.degenerate += 1
        elif verdict == "skipped":
            self.skipped += 1
        else:
            self.failed += 1
            if detail is not None and len(self.failures) < 5:
                self.failures.append(detail)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "verdict": self.verdict,
            "instances": self.count,
            "passed": self.passed,
            "degenerate": self.degenerate,
            "skipped": self.skipped,
            "failed": self.failed,
            "seed": self.seed,
            "failures": self.failures,
        }


# ---------------------------------------------------------------------------
# generators


def _rng(name: str, seed: int) -> random.Random:
    return random.Random(f"{name}:{seed}")


def random_base_element(rng: random.Random, ring: BaseRing, degree: int = 1, size: int = 5):
    if ring.kind == "Q[t]":
        t = ring.symbol(ring.variable)
        out = ring.zero
        for k in range(degree + 1):
            out = out + rng.randint(-size, size) * t**k
        return out
    return ring.coerce(rng.randint(-size, size))


def random_nonzero_base_element(rng, ring, degree=1, size=5):
    while True:
        x = random_base_element(rng, ring, degree, size)
        if x:
            return x


def random_form(rng: random.Random, family: ProjectiveFamily, k: int, degree: int = 1, size: int = 5) -> Poly:
    from delpair.exact.resultant import monomials

    while True:
        terms = {}
        for mon in monomials(family.d + 1, k):
            if rng.random() < 0.75:
                terms[mon] = random_base_element(rng, family.base, degree, size)
        p = Poly(family.base, family.variables, terms)
        if p:
            return p


def random_section(rng, family, k, degree=1, size=5) -> BundleSection:
    return BundleSection(family, k, random_form(rng, family, k, degree, size))


def random_monic_poly(rng, ring, k, degree=1, size=4) -> list:
    """Ascending coefficients of a random monic polynomial of degree k."""
    return [random_base_element(rng, ring, degree, size) for _ in range(k)] + [ring.one]


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> list[list[int]]:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        e = rng.choice([-2, -1, 1, 2])
        m = [[m[r][c] + (e * m[j][c] if r == i else 0) for c in range(n)] for r in range(n)]
    if rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        m[i], m[j] = m[j], m[i]
    if rng.random() < 0.5:
        m[0] = [-x for x in m[0]]
    return m


def random_algebra(rng: random.Random, ring: BaseRing, max_rank: int = 4) -> FiniteAlgebra:
    """A product of one or two companion algebras in a scrambled integral basis."""
    n = rng.randint(1, max_rank)
    if n >= 2 and rng.random() < 0.5:
        k1 = rng.randint(1, n - 1)
        alg = direct_product(
            companion_algebra(ring, random_monic_poly(rng, ring, k1)),
            companion_algebra(ring, random_monic_poly(rng, ring, n - k1)),
        )
    else:
        alg = companion_algebra(ring, random_monic_poly(rng, ring, n))
    if n >= 2:
        alg = change_basis(alg, random_unimodular(rng, n, 3))
    return alg


def random_element(rng, algebra: FiniteAlgebra, degree=1, size=4):
    return algebra.element([random_base_element(rng, algebra.base, degree, size) for _ in range(algebra.n)])


def random_pair(rng: random.Random, ring: BaseRing, max_degree: int = 3, need_chart: bool = True) -> SectionSequence:
    """A generically regular pair on P^1 (s1 with an affine chart when need_chart)."""
    fam = ProjectiveFamily(ring, 1)
    while True:
        s1 = random_section(rng, fam, rng.randint(1, max_degree))
        s2 = random_section(rng, fam, rng.randint(1, max_degree))
        seq = SectionSequence([s1, s2])
        if need_chart:
            try:
                zero_locus_algebra(s1)
            except ZeroAtInfinity:
                continue
        if pairing_section(seq, check=False).value:
            return seq


def random_sequence(rng, family: ProjectiveFamily, max_degree: int = 2) -> SectionSequence:
    while True:
        secs = [random_section(rng, family, rng.randint(1, max_degree)) for _ in range(family.d + 1)]
        seq = SectionSequence(secs)
        if pairing_section(seq, check=False).value:
            return seq


# ---------------------------------------------------------------------------
# suites


def suite_norm_multiplicativity(seed: int, count: int = 200) -> SuiteResult:
    rng = _rng("norm_multiplicativity", seed)
    res = SuiteResult("norm_multiplicativity", seed, count)
    done = 0
    while done < count:
        ring = Q if done % 2 == 0 else T
        alg = random_algebra(rng, ring)
        for _ in range(min(10, count - done)):
            f, g = random_element(rng, alg), random_element(rng, alg)
            lhs, rhs = norm_element(f * g), norm_element(f) * norm_element(g)
            res.record("pass" if lhs == rhs else "fail", {"f": repr(f), "g": repr(g)})
            # zero divisors have norm zero and a singular multiplication matrix
            if not norm_element(f) and det_fraction_free(alg.multiplication_matrix(f)):
                res.record("fail", {"zero_divisor": repr(f)})
            done += 1
    return res


def suite_scalar_law(seed: int, count: int = 50) -> SuiteResult:
    rng = _rng("scalar_law", seed)
    res = SuiteResult("scalar_law", seed, count)
    cone = cone_algebra()
    a = cone.base.symbol("a")
    ok = norm_element(cone.basis(1)) == -a
    res.record("pass" if ok else "fail", {"cone": "Nm(x) != -a"})
    for i in range(1, count):
        if i % 5 == 0:
            alg = cone
            ring = alg.base
            m = ring.coerce(rng.randint(-9, 9)) + rng.randint(-3, 3) * ring.symbol(rng.choice("abc"))
        else:
            ring = rng.choice([Q, T, Z])
            alg = random_algebra(rng, ring)
            m = random_base_element(rng, ring, 2)
        check = pullback_power_check(alg, m)
        res.record("pass" if check.equal else "fail", {"m": ring.text(m), "rank": alg.n})
    return res


def suite_norm_base_change(seed: int, count: int = 50) -> SuiteResult:
    rng = _rng("norm_base_change", seed)
    res = SuiteResult("norm_base_change", seed, count)
    for _ in range(count):
        alg = random_algebra(rng, T)
        f = random_element(rng, alg, 2)
        t0 = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        lhs = T.specialize(norm_element(f), t0)
        spec = base_change_algebra(alg, t0)
        rhs = norm_element(specialize_element(f, spec, t0))
        res.record("pass" if lhs == rhs else "fail", {"t0": str(t0)})
    return res


def suite_route_equivalence(seed: int, count: int = 100) -> SuiteResult:
    rng = _rng("route_equivalence", seed)
    res = SuiteResult("route_equivalence", seed, count)
    named = sequence(ProjectiveFamily(T, 1), "x0^2 - t*x1^2", "x0 - x1")
    rep = verify_route_equivalence(named)
    ok = rep.passed and rep.values["sylvester"] == "1 - t"
    res.record("pass" if ok else "fail", rep.to_dict())
    for i in range(1, count):
        seq = random_pair(rng, Q if i % 2 else T)
        rep = verify_route_equivalence(seq)
        res.record(rep.verdict, rep.to_dict())
    return res


def suite_smith_unit(seed: int, count: int = 50) -> SuiteResult:
    rng = _rng("smith_unit", seed)
    res = SuiteResult("smith_unit", seed, count)
    for _ in range(count):
        while True:
            u = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
            if det_fraction_free(u):
                break
        p, q = random_unimodular(rng, 3), random_unimodular(rng, 3)
        u_prime = mat_mul(mat_mul(p, u), q)
        a = unit_ratio(u, u_prime, Z)
        ok = a is not INCOMPARABLE and a in (1, -1) and a == det_fraction_free(u) / det_fraction_free(u_prime)
        # same determinant up to sign, different cokernel
        d = abs(int(det_fraction_free(u)))
        from delpair.exact.smith import smith_normal_form

        inv = smith_normal_form(u, Z).invariants
        other = [[1, 0, 0], [0, 1, 0], [0, 0, d]] if tuple(inv) != (1, 1, d) else [[1, 0, 0], [0, d, 0], [0, 0, d]]
        if d == 1:
            mismatch_ok = True
        else:
            mismatch_ok = unit_ratio(u, other, Z) is INCOMPARABLE
        res.record("pass" if ok and mismatch_ok else "fail", {"u": u, "u_prime": u_prime})
    return res


def suite_regularity_order(seed: int, count: int = 100) -> SuiteResult:
    from delpair.family import order_permuted_is_regular

    rng = _rng("regularity_order", seed)
    res = SuiteResult("regularity_order", seed, count)
    for i in range(count):
        ring = [Q, T, Z][i % 3]
        fam = ProjectiveFamily(ring, rng.choice([1, 1, 2]))
        secs = [random_section(rng, fam, rng.randint(1, 2)) for _ in range(fam.d + 1)]
        if rng.random() < 0.3:
            # force a common factor so that the sequence is not regular
            common = random_form(rng, fam, 1)
            j = rng.randrange(1, len(secs))
            secs[0] = BundleSection(fam, secs[0].twist + 1, secs[0].form * common)
            secs[j] = BundleSection(fam, secs[j].twist + 1, secs[j].form * common)
        seq = SectionSequence(secs)
        perm = list(range(len(seq)))
        rng.shuffle(perm)
        ok = order_permuted_is_regular(seq, perm, global_=(ring.kind != "Q" and rng.random() < 0.5))
        res.record("pass" if ok else "fail", {"sections": seq.texts(), "perm": perm})
    return res


def suite_multiadditivity(seed: int, count: int = 20) -> SuiteResult:
    rng = _rng("multiadditivity", seed)
    res = SuiteResult("multiadditivity", seed, count)
    for i in range(count):
        ring = Q if i % 2 else T
        fam = ProjectiveFamily(ring, 1 if i % 3 else 2)
        seq_a = random_sequence(rng, fam)
        slot = rng.randrange(len(seq_a))
        while True:
            seq_b = seq_a.replace(slot, random_section(rng, fam, rng.randint(1, 2)))
            if pairing_section(seq_b, check=False).value:
                break
        rep = verify_multiadditivity(seq_a, seq_b, slot)
        res.record(rep.verdict, rep.to_dict())
    return res


def suite_symmetry(seed: int, count: int = 20) -> SuiteResult:
    rng = _rng("symmetry", seed)
    res = SuiteResult("symmetry", seed, count)
    for i in range(count):
        ring = Q if i % 2 else T
        fam = ProjectiveFamily(ring, 1 if i % 3 else 2)
        seq = random_sequence(rng, fam)
        perm = list(range(len(seq)))
        rng.shuffle(perm)
        rep = verify_symmetry(seq, perm)
        psi = list(range(len(seq)))
        rng.shuffle(psi)
        comp = verify_symmetry_composition(seq, perm, psi)
        worst = comp if comp.verdict == "fail" else rep
        res.record(worst.verdict, worst.to_dict())
    return res


def suite_base_change(seed: int, count: int = 50) -> SuiteResult:
    rng = _rng("base_change", seed)
    res = SuiteResult("base_change", seed, count)
    fam1, fam2 = ProjectiveFamily(T, 1), ProjectiveFamily(T, 2)
    for i in range(count):
        if i % 5 == 0:
            # a constructed degenerate fibre: <x0^2 - t x1^2, x0 - c x1> vanishes at t = c^2
            c = rng.randint(-4, 4)
            seq = sequence(fam1, "x0^2 - t*x1^2", f"x0 - ({c})*x1")
            t0 = Fraction(c * c)
            expect_degenerate = True
        else:
            seq = random_sequence(rng, fam1 if i % 3 else fam2)
            t0 = Fraction(rng.randint(-12, 12), rng.randint(1, 5))
            expect_degenerate = None
        rep = verify_base_change(seq, t0)
        flagged = rep.verdict == "degenerate"
        if expect_degenerate and not flagged:
            res.record("fail", rep.to_dict())
        else:
            res.record(rep.verdict, rep.to_dict())
    return res


def suite_pullback(seed: int, count: int = 20) -> SuiteResult:
    rng = _rng("pullback", seed)
    res = SuiteResult("pullback", seed, count)
    for i in range(count):
        kind = i % 4
        if kind == 0:
            ring = rng.choice([Q, T])
            alg = random_algebra(rng, ring)
            rep = verify_pullback_formula(None, random_nonzero_base_element(rng, ring), algebra=alg)
        else:
            ring = Q if i % 2 else T
            d = 1 if kind in (1, 2) else 2
            fam = ProjectiveFamily(ring, d)
            while True:
                secs = [random_section(rng, fam, rng.randint(1, 2)) for _ in range(d)]
                if certify_regular(SectionSequence(secs)).certified:
                    break
            rep = verify_pullback_formula(secs, random_nonzero_base_element(rng, ring))
        res.record(rep.verdict, rep.to_dict())
    return res


def suite_restriction(seed: int, count: int = 20) -> SuiteResult:
    rng = _rng("restriction", seed)
    res = SuiteResult("restriction", seed, count)
    for i in range(count):
        ring = [Q, T, Z][i % 3]
        while True:
            seq = random_pair(rng, ring, 3, need_chart=False)
            try:
                zero_locus_algebra(seq[0])
                zero_locus_algebra(seq[1])
            except ZeroAtInfinity:
                continue
            break
        rep = verify_restriction_to_divisor(seq)
        res.record(rep.verdict, rep.to_dict())
    return res


def suite_isomorphism(seed: int, count: int = 20) -> SuiteResult:
    rng = _rng("isomorphism", seed)
    res = SuiteResult("isomorphism", seed, count)
    for i in range(count):
        ring = Q if i % 2 else T
        fam = ProjectiveFamily(ring, 1 if i % 3 else 2)
        seq = random_sequence(rng, fam)
        route = "iterated_nm" if fam.d == 1 and i % 4 == 1 else None

        def draw():
            return ScalarIsomorphism(
                tuple(Fraction(rng.choice([-3, -2, -1, 1, 2, 3, 5]), rng.randint(1, 3)) for _ in range(len(seq)))
            )

        u, v = draw(), draw()
        try:
            cert = pairing_section(seq, route)
        except ZeroAtInfinity:
            cert = pairing_section(seq)
        try:
            once = apply_isomorphism(cert, u.compose(v))
            twice = apply_isomorphism(apply_isomorphism(cert, u), v)
            ok = once.reference_value == twice.reference_value
        except Exception as exc:  # LawViolation and friends
            res.record("fail", {"error": str(exc), "sections": seq.texts()})
            continue
        res.record("pass" if ok else "fail", {"sections": seq.texts()})
    return res


def random_tower(rng: random.Random, ring: BaseRing):
    fam = ProjectiveFamily(ring, 1)
    while True:
        s1 = random_section(rng, fam, rng.randint(1, 2))
        try:
            zero_locus_algebra(s1)
        except ZeroAtInfinity:
            continue
        break
    from delpair.exact.resultant import monomials
    from delpair.pairing import TOWER_VARS

    def bihomogeneous(a, e):
        while True:
            terms = {}
            for mx in monomials(2, a):
                for my in monomials(2, e):
                    if rng.random() < 0.7:
                        terms[mx + my] = random_base_element(rng, ring, 1, 4)
            p = Poly(ring, TOWER_VARS, terms)
            if p:
                return TowerSection(p, a, e)

    m2 = bihomogeneous(rng.randint(0, 1), rng.randint(1, 2))
    m3 = bihomogeneous(rng.randint(0, 1), rng.randint(1, 2))
    return s1, m2, m3


def suite_projection(seed: int, count: int = 10) -> SuiteResult:
    rng = _rng("projection", seed)
    res = SuiteResult("projection", seed, count)
    for i in range(count):
        # both sides vanish when the inner pairing meets Z(s1); redraw those
        for _ in range(50):
            s1, m2, m3 = random_tower(rng, Q if i % 2 == 0 else T)
            rep = verify_projection_formula(s1, m2, m3)
            if rep.verdict != "degenerate":
                break
        res.record(rep.verdict, rep.to_dict())
    return res


# metric suites --------------------------------------------------------------


def suite_metric_d0(seed: int, count: int = 50, tol: float = 1e-10) -> SuiteResult:
    rng = _rng("metric_d0", seed)
    res = SuiteResult("metric_d0", seed, count)
    done = 0
    while done < count:
        alg = companion_algebra(Q, random_monic_poly(rng, Q, rng.randint(1, 4), 0, 6))
        s = random_element(rng, alg, 0, 6)
        if not norm_element(s):
            continue
        value = metric_d0(alg, s)
        exact = metric_d0_exact_log(s)
        diff = abs(value.log_norm - exact)
        res.record("pass" if diff < tol else "fail", {"difference": diff})
        done += 1
    return res


def random_hermitian_pair(rng: random.Random):
    seq = random_pair(rng, Q, 3, need_chart=False)
    return HermitianSection.from_section(seq[0]), HermitianSection.from_section(seq[1])


def suite_metric_order(seed: int, count: int = 20, tol: float = 1e-3, nodes: int = 512) -> SuiteResult:
    rng = _rng("metric_order", seed)
    res = SuiteResult("metric_order", seed, count)
    for _ in range(count):
        s1, s2 = random_hermitian_pair(rng)
        rep = verify_order_independence(s1, s2, tol, nodes)
        res.record(rep.verdict, rep.to_dict())
    return res


def suite_metric_isometry(seed: int, count: int = 20, tol: float = 1e-3, nodes: int = 512) -> SuiteResult:
    rng = _rng("metric_isometry", seed)
    res = SuiteResult("metric_isometry", seed, count)
    for _ in range(count):
        s1, s2 = random_hermitian_pair(rng)
        phases = (complex(math.cos(a), math.sin(a)) for a in (rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)))
        rep = verify_isometry_invariance(s1, s2, tuple(phases), tol, nodes)
        res.record(rep.verdict, rep.to_dict())
    return res


def suite_metric_scalar(seed: int, count: int = 20, tol: float = 1e-3, nodes: int = 512, sign: int = 1) -> SuiteResult:
    """Slot-1 scaling shift against sign * k2 * log |lambda|."""
    rng = _rng("metric_scalar", seed)
    res = SuiteResult("metric_scalar", seed, count)
    for _ in range(count):
        s1, s2 = random_hermitian_pair(rng)
        lam = rng.choice([2, 3, 0.5, -4, 1.5])
        rep = verify_scalar_shift(s1, s2, lam, sign, tol, nodes)
        res.record(rep.verdict, rep.to_dict())
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "norm_multiplicativity": suite_norm_multiplicativity,
    "scalar_law": suite_scalar_law,
    "norm_base_change": suite_norm_base_change,
    "route_equivalence": suite_route_equivalence,
    "smith_unit": suite_smith_unit,
    "regularity_order": suite_regularity_order,
    "multiadditivity": suite_multiadditivity,
    "symmetry": suite_symmetry,
    "base_change": suite_base_change,
    "pullback": suite_pullback,
    "restriction": suite_restriction,
    "isomorphism": suite_isomorphism,
    "projection": suite_projection,
    "metric_d0": suite_metric_d0,
    "metric_order": suite_metric_order,
    "metric_isometry": suite_metric_isometry,
    "metric_scalar": suite_metric_scalar,
}

DEFAULT_COUNTS = {
    "norm_multiplicativity": 200,
    "scalar_law": 50,
    "norm_base_change": 50,
    "route_equivalence": 100,
    "smith_unit": 50,
    "regularity_order": 100,
    "multiadditivity": 20,
    "symmetry": 20,
    "base_change": 50,
    "pullback": 20,
    "restriction": 20,
    "isomorphism": 20,
    "projection": 10,
    "metric_d0": 50,
    "metric_order": 20,
    "metric_isometry": 20,
    "metric_scalar": 20,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, count: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed, DEFAULT_COUNTS[name] if count is None else count)
