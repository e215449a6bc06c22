"""The canonical metric on Deligne pairings over a point, for d = 0 and d = 1.

Over S = Spec C with Fubini-Study metrics on O(k) over P^1:

* d = 0: log ||Nm(s)|| = sum over fibre points p (with multiplicity) of log |s(p)|.
* d = 1: log ||<s1, s2>|| = sum_{p in Z(s1)} m_p log ||s2(p)|| + k2 * int log ||s1|| omega_FS,

where omega_FS is the Fubini-Study form of O(1) (total mass 1).  The second
formula is log ||Nm_{Y/S}(s2|_Y)|| - log ||[s1]|| with
log ||[s1]|| = -int log ||s1|| c1(O(k2), FS).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from delpair.errors import QuadratureSingularNode, SectionVanishesAtFiberPoint
from delpair.family import BundleSection
from delpair.norm import AlgebraElement, FiniteAlgebra

DEFAULT_NODES = 512
JITTER_TOL = 1e-9
ROOT_TOL = 1e-12
# |s2(p)| below this (relative to the coefficient size) means s2 vanishes on Z(s1)
VANISH_TOL = 1e-10


def _gaussian(c):
    """Exact Gaussian rational (re, im) from int/Fraction/complex-with-rational-parts, else None."""
    if isinstance(c, (int, Fraction)):
        return (Fraction(c), Fraction(0))
    if isinstance(c, tuple) and len(c) == 2:
        return (Fraction(c[0]), Fraction(c[1]))
    return None


def _as_complex(c) -> complex:
    if isinstance(c, tuple):
        return complex(float(c[0]), float(c[1]))
    return complex(c)


@dataclass(frozen=True)
class HermitianSection:
    """A binary form of degree k with the Fubini-Study metric on O(k).

    ``coeffs`` are complex coefficients of x0^k, x0^(k-1) x1, ..., x1^k.
    ``exact`` (optional) holds Gaussian-rational coefficients proportional to
    ``coeffs``; it is only used to find root multiplicities exactly.
    """

    coeffs: tuple
    twist: int
    exact: tuple | None = None

    def __post_init__(self):
        if len(self.coeffs) != self.twist + 1:
            raise ValueError(f"a form of degree {self.twist} needs {self.twist + 1} coefficients")
        if not any(abs(c) for c in self.coeffs):
            raise ValueError("the zero form has no Fubini-Study norm")

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> HermitianSection:
        exact = [_gaussian(c) for c in coeffs]
        return cls(
            tuple(_as_complex(c) for c in coeffs),
            len(coeffs) - 1,
            tuple(exact) if all(e is not None for e in exact) else None,
        )

    @classmethod
    def from_section(cls, s: BundleSection) -> HermitianSection:
        ring = s.base
        coeffs = [ring.to_fraction(c) for c in s.form.binary_coefficients(s.twist)]
        return cls.from_coefficients(coeffs)

    def scaled(self, lam) -> HermitianSection:
        lam = _as_complex(lam)
        return HermitianSection(tuple(c * lam for c in self.coeffs), self.twist, self.exact)

    def evaluate(self, z0, z1):
        """s(z0, z1) for scalars or numpy arrays."""
        k = self.twist
        total = 0
        for i, c in enumerate(self.coeffs):
            if c:
                total = total + c * z0 ** (k - i) * z1**i
        return total

    def norm(self, z0, z1):
        """||s([z0 : z1])||_FS; invariant under rescaling (z0, z1)."""
        r2 = abs(z0) ** 2 + abs(z1) ** 2
        return abs(self.evaluate(z0, z1)) / r2 ** (self.twist / 2)

    def zeros(self) -> list[tuple[complex, complex, int]]:
        """Points of Z(s) as unit vectors (z0, z1) with multiplicities."""
        return _binary_zeros(self.coeffs, self.exact)


def _unit(z0: complex, z1: complex) -> tuple[complex, complex]:
    r = math.hypot(abs(z0), abs(z1))
    return z0 / r, z1 / r


def _squarefree_parts(coeffs: Sequence, exact) -> list[tuple[list[complex], int]]:
    """Square-free factors (descending complex coefficients) with multiplicities."""
    if exact is None:
        return [(list(coeffs), 1)]
    from sympy import Poly, QQ_I, symbols

    z = symbols("z")
    p = Poly.from_list([QQ_I(re, im) for re, im in exact], z, domain=QQ_I)
    _, factors = p.sqf_list()
    out = []
    for f, mult in factors:
        out.append(([complex(float(c.x), float(c.y)) for c in f.rep.to_list()], mult))
    return out


def _polish(roots: np.ndarray, coeffs: Sequence[complex]) -> np.ndarray:
    p = np.poly1d(coeffs)
    dp = p.deriv()
    for _ in range(3):
        d = dp(roots)
        step = np.where(np.abs(d) > 0, p(roots) / np.where(d == 0, 1, d), 0)
        roots = roots - step
    return roots


def _binary_zeros(coeffs: Sequence, exact=None) -> list[tuple[complex, complex, int]]:
    coeffs = list(coeffs)
    # leading zeros of the x0-descending list are zeros at [1 : 0]
    at_infinity = 0
    while at_infinity < len(coeffs) and coeffs[at_infinity] == 0:
        at_infinity += 1
    out = []
    if at_infinity:
        out.append((1 + 0j, 0j, at_infinity))
    finite = coeffs[at_infinity:]
    finite_exact = exact[at_infinity:] if exact is not None else None
    if len(finite) <= 1:
        return out
    for part, mult in _squarefree_parts(finite, finite_exact):
        if len(part) <= 1:
            continue
        roots = _polish(np.roots(np.array(part, dtype=complex)), part)
        for r in roots:
            z0, z1 = _unit(complex(r), 1 + 0j)
            out.append((z0, z1, mult))
    return out


def _univariate_zeros(coeffs_ascending: Sequence, exact=None) -> list[tuple[complex, int]]:
    """Roots of a univariate polynomial (ascending coefficients) with multiplicities."""
    desc = list(reversed(list(coeffs_ascending)))
    exact_desc = list(reversed(exact)) if exact is not None else None
    while desc and desc[0] == 0:
        desc.pop(0)
        if exact_desc is not None:
            exact_desc.pop(0)
    if len(desc) <= 1:
        return []
    out = []
    for part, mult in _squarefree_parts(desc, exact_desc):
        if len(part) <= 1:
            continue
        roots = _polish(np.roots(np.array(part, dtype=complex)), part)
        out.extend((complex(r), mult) for r in roots)
    return out


@dataclass
class MetricValue:
    log_norm: float
    abs_error_estimate: float
    quadrature_nodes: int
    degenerate: bool = False
    notes: list = field(default_factory=list)
    terms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "log_norm": self.log_norm,
            "abs_error_estimate": self.abs_error_estimate,
            "quadrature_nodes": self.quadrature_nodes,
        }
        if self.terms:
            out["terms"] = dict(self.terms)
        if self.degenerate:
            out["degenerate"] = True
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# ---------------------------------------------------------------------------
# d = 0


def _fiber_polynomial(fiber) -> tuple[list, tuple | None]:
    """Ascending coefficients of the polynomial cutting out a 0-dimensional fibre."""
    if isinstance(fiber, FiniteAlgebra):
        if fiber.modulus is None:
            raise ValueError("metric_d0 needs a monogenic algebra (with a defining polynomial)")
        ring = fiber.base
        coeffs = [ring.to_fraction(c) for c in fiber.modulus]
        return [complex(float(c)) for c in coeffs], tuple((c, Fraction(0)) for c in coeffs)
    exact = [_gaussian(c) for c in fiber]
    return [_as_complex(c) for c in fiber], tuple(exact) if all(e is not None for e in exact) else None


def _section_polynomial(s, fiber) -> list[complex]:
    if isinstance(s, AlgebraElement):
        ring = s.parent.base
        return [complex(float(ring.to_fraction(c))) for c in s.coords]
    return [_as_complex(c) for c in s]


def metric_d0(fiber, s) -> MetricValue:
    """log ||Nm(s)|| = sum_p m_p log |s(p)| over the points of a finite fibre.

    ``fiber`` is a FiniteAlgebra with a defining polynomial, or the ascending
    coefficients of that polynomial; ``s`` is an element of the algebra or the
    ascending coefficients of a polynomial in x.
    """
    coeffs, exact = _fiber_polynomial(fiber)
    s_poly = _section_polynomial(s, fiber)
    zeros = _univariate_zeros(coeffs, exact)
    p = np.poly1d(list(reversed(coeffs)))
    dp = p.deriv()
    sp = np.poly1d(list(reversed(s_poly))) if s_poly else np.poly1d([0])
    dsp = sp.deriv()
    scale = max(abs(c) for c in s_poly) if s_poly else 0.0
    total = 0.0
    err = 0.0
    notes = []
    for r, mult in zeros:
        v = sp(r)
        if abs(v) <= VANISH_TOL * max(scale, 1.0):
            raise SectionVanishesAtFiberPoint(f"the section vanishes at the fibre point {r:.6g}")
        total += mult * math.log(abs(v))
        # first-order propagation of the root residual
        d = dp(r)
        dr = abs(p(r) / d) if abs(d) > 0 else ROOT_TOL
        err += mult * abs(dsp(r) / v) * max(dr, ROOT_TOL * max(1.0, abs(r)))
    degree = sum(m for _, m in zeros)
    return MetricValue(total, err, 0, notes=notes, terms={"fiber_degree": degree})


def metric_d0_exact_log(s: AlgebraElement) -> float:
    """log |Nm(s)| from the exact norm, for comparison with :func:`metric_d0`."""
    from delpair.norm import norm_element

    value = s.parent.base.to_fraction(norm_element(s))
    return math.log(abs(value.numerator)) - math.log(value.denominator)


# ---------------------------------------------------------------------------
# d = 1


@dataclass(frozen=True)
class SphereGrid:
    """Midpoint rule on P^1(C) in spherical coordinates.

    z0 = cos(theta/2), z1 = sin(theta/2) e^{i phi}; omega_FS = sin(theta) dtheta dphi / (4 pi).
    """

    n_theta: int
    n_phi: int
    phi_shift: float = 0.0

    def nodes(self):
        theta = (np.arange(self.n_theta) + 0.5) * (np.pi / self.n_theta)
        phi = (np.arange(self.n_phi) + 0.5 + self.phi_shift) * (2 * np.pi / self.n_phi)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        z0 = np.cos(th / 2).astype(complex)
        z1 = np.sin(th / 2) * np.exp(1j * ph)
        w = np.sin(th)
        w = w / w.sum()
        return z0, z1, w

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi


def _min_chordal_distance(z0, z1, zeros) -> float:
    best = np.inf
    for p0, p1, _ in zeros:
        best = min(best, float(np.min(np.abs(z0 * p1 - z1 * p0))))
    return best


def fs_log_integral(s: HermitianSection, n_theta: int = DEFAULT_NODES, n_phi: int | None = None) -> tuple[float, list]:
    """int_{P^1} log ||s||_FS omega_FS by the midpoint rule, with deterministic jitter."""
    n_phi = n_phi or n_theta
    grid = SphereGrid(n_theta, n_phi)
    z0, z1, w = grid.nodes()
    notes = []
    zeros = s.zeros()
    if zeros and _min_chordal_distance(z0, z1, zeros) < JITTER_TOL:
        grid = SphereGrid(n_theta, n_phi, 0.5)
        z0, z1, w = grid.nodes()
        notes.append(f"node within {JITTER_TOL} of a zero; phi grid shifted by half a cell")
        if _min_chordal_distance(z0, z1, zeros) < JITTER_TOL:
            raise QuadratureSingularNode("a quadrature node lies on a zero of the section after jitter")
    values = np.log(np.abs(s.evaluate(z0, z1)))
    # |z0|^2 + |z1|^2 = 1 on the grid, so ||s|| = |s|
    return float(np.sum(w * values)), notes


def _boundary_term(s1: HermitianSection, s2: HermitianSection) -> float:
    total = 0.0
    scale = max(abs(c) for c in s2.coeffs)
    for z0, z1, mult in s1.zeros():
        v = s2.norm(z0, z1)
        if v <= VANISH_TOL * scale:
            raise SectionVanishesAtFiberPoint("s2 vanishes at a zero of s1: the pair is not regular")
        total += mult * math.log(v)
    return total


def metric_d1(s1: HermitianSection, s2: HermitianSection, nodes: int = DEFAULT_NODES) -> MetricValue:
    """log ||<s1, s2>|| on P^1 over a point with Fubini-Study metrics.

    The error estimate is |I_N - I_{N/2}| of the integral term, scaled by k2.
    """
    boundary = _boundary_term(s1, s2)
    integral, notes = fs_log_integral(s1, nodes)
    coarse, _ = fs_log_integral(s1, max(nodes // 2, 2))
    k2 = s2.twist
    value = boundary + k2 * integral
    return MetricValue(
        value,
        k2 * abs(integral - coarse),
        nodes * nodes,
        notes=notes,
        terms={"zero_locus_sum": boundary, "fs_integral": integral, "twist_2": k2},
    )


@dataclass
class MetricReport:
    check: str
    verdict: str
    values: dict
    tolerance: float
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        out = {"check": self.check, "verdict": self.verdict, "values": self.values, "tolerance": self.tolerance}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def verify_isometry_invariance(
    s1: HermitianSection, s2: HermitianSection, phases: Sequence = (1, 1), tol: float = 1e-3, nodes: int = DEFAULT_NODES
) -> MetricReport:
    """Unit-modulus rescaling of the sections leaves log ||<s1, s2>|| unchanged."""
    for p in phases:
        if abs(abs(complex(p)) - 1) > 1e-12:
            raise ValueError(f"phase {p} does not have modulus 1")
    base = metric_d1(s1, s2, nodes)
    moved = metric_d1(s1.scaled(phases[0]), s2.scaled(phases[1]), nodes)
    delta = abs(moved.log_norm - base.log_norm)
    return MetricReport(
        "isometry",
        "pass" if delta < tol else "fail",
        {"original": base.log_norm, "rotated": moved.log_norm, "difference": delta},
        tol,
    )


def verify_order_independence(s1: HermitianSection, s2: HermitianSection, tol: float = 1e-3, nodes: int = DEFAULT_NODES) -> MetricReport:
    a = metric_d1(s1, s2, nodes)
    b = metric_d1(s2, s1, nodes)
    delta = abs(a.log_norm - b.log_norm)
    return MetricReport(
        "order_independence",
        "pass" if delta < tol else "fail",
        {"forward": a.log_norm, "swapped": b.log_norm, "difference": delta},
        tol,
    )


def verify_scalar_shift(
    s1: HermitianSection, s2: HermitianSection, lam, expected_sign: int = 1, tol: float = 1e-3, nodes: int = DEFAULT_NODES
) -> MetricReport:
    """metric_d1(lam s1, s2) - metric_d1(s1, s2) against expected_sign * k2 * log |lam|."""
    a = metric_d1(s1, s2, nodes)
    b = metric_d1(s1.scaled(lam), s2, nodes)
    shift = b.log_norm - a.log_norm
    expected = expected_sign * s2.twist * math.log(abs(_as_complex(lam)))
    return MetricReport(
        "scalar_shift",
        "pass" if abs(shift - expected) < tol else "fail",
        {"shift": shift, "expected": expected},
        tol,
    )


def verify_pullback_metric_d0(fiber, m, tol: float = 1e-10) -> MetricReport:
    """log ||Nm(f^* m)|| = delta log |m| with delta the degree of the fibre."""
    coeffs, exact = _fiber_polynomial(fiber)
    zeros = _univariate_zeros(coeffs, exact)
    delta = sum(mult for _, mult in zeros)
    value = metric_d0(fiber, [_as_complex(m)])
    expected = delta * math.log(abs(_as_complex(m)))
    diff = abs(value.log_norm - expected)
    return MetricReport(
        "pullback_metric",
        "pass" if diff < tol else "fail",
        {"log_norm": value.log_norm, "expected": expected, "delta": delta},
        tol,
    )


def convergence_table(s1: HermitianSection, s2: HermitianSection, sizes: Sequence[int] = (32, 64, 128, 256, 512)) -> list[tuple[int, float]]:
    return [(n, metric_d1(s1, s2, n).log_norm) for n in sizes]


def phase(angle: float) -> complex:
    return cmath.exp(1j * angle)
