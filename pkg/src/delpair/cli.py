"""Command line interface: ``delpair {norm,pair,intersect,verify,metric}``.

Every command prints one JSON document (sorted keys) on stdout.  Exit codes:
0 success, 1 verification failure, 2 input error (JSON error object on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from delpair.errors import DelpairError, LawViolation, ParseError
from delpair.family import certify_regular, intersection_number
from delpair.metric import (
    DEFAULT_NODES,
    HermitianSection,
    metric_d0,
    metric_d1,
    phase,
    verify_isometry_invariance,
    verify_order_independence,
    verify_pullback_metric_d0,
    verify_scalar_shift,
)
from delpair.norm import norm_element, pullback_power_check
from delpair.pairing import (
    ScalarIsomorphism,
    pairing_section,
    verify_base_change,
    verify_isomorphism,
    verify_multiadditivity,
    verify_pullback_formula,
    verify_restriction_to_divisor,
    verify_route_equivalence,
    verify_symmetry,
    verify_symmetry_composition,
)
from delpair.suites import DEFAULT_COUNTS, DEFAULT_SEED, run_suite
from delpair.taskfile import TaskFile, parse_task

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_TOL = 1e-3


class InputError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, document: dict):
        super().__init__("verification failed")
        self.document = document


def read_task(path: str | None) -> TaskFile | None:
    if path is None:
        return None
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read task file: {exc.strerror}") from None
    return parse_task(text)


def _require(task: TaskFile | None, what: str) -> TaskFile:
    if task is None:
        raise InputError(f"{what} needs a task file")
    return task


# ---------------------------------------------------------------------------
# commands


def cmd_norm(task: TaskFile) -> dict:
    if not task.is_algebra:
        raise InputError("norm needs family = \"algebra\"")
    algebra = task.algebra()
    ring = algebra.base
    out = {"inputs": task.to_inputs(), "rank": algebra.n}
    if task.element is not None:
        out["norm"] = ring.text(norm_element(task.algebra_element(algebra)))
    if task.m is not None:
        check = pullback_power_check(algebra, task.base_value("m"))
        out["pullback"] = {
            "computed": ring.text(check.computed),
            "expected": ring.text(check.expected),
            "verdict": "pass" if check.equal else "fail",
        }
        if not check.equal:
            raise VerificationFailure(out)
    if "norm" not in out and "pullback" not in out:
        raise InputError("norm needs an element (or m for the pull-back check)")
    return out


def cmd_pair(task: TaskFile, route: str | None) -> dict:
    seq = task.sequence()
    cert = pairing_section(seq, route or task.route)
    out = cert.to_dict()
    out["inputs"] = task.to_inputs()
    return out


def cmd_intersect(task: TaskFile) -> dict:
    twists = list(task.twists) if task.twists is not None else [k for k, _ in task.sections]
    if task.is_algebra:
        delta = intersection_number(0, twists, task.algebra())
        return {"delta": delta, "inputs": task.to_inputs()}
    d = int(task.family[1:])
    if len(twists) == d + 1 and task.twists is None:
        twists = twists[:d]
    return {"delta": intersection_number(d, twists), "inputs": task.to_inputs()}


def _check_report(report) -> dict:
    out = report.to_dict()
    if report.verdict == "fail":
        raise VerificationFailure(out)
    return out


def verify_task(name: str, task: TaskFile, seed: int) -> dict:
    """Run a single named check on the instance described by the task."""
    if name == "regularity":
        cert = certify_regular(task.sequence(), bool(task.global_))
        out = cert.to_dict()
        out["verdict"] = "pass" if cert.certified else "refuted"
        return out
    if name in ("scalar_law", "pullback") and task.is_algebra:
        return _check_report(verify_pullback_formula(None, _need(task, "m", task.base_value("m")), algebra=task.algebra()))
    if name == "metric_pullback":
        return _check_report(verify_pullback_metric_d0(task.algebra(), float(task.rational("m"))))
    if name.startswith("metric_"):
        s1, s2 = _hermitian_pair(task)
        tol = task.tol if task.tol is not None else DEFAULT_TOL
        nodes = task.nodes or DEFAULT_NODES
        if name == "metric_order":
            return _check_report(verify_order_independence(s1, s2, tol, nodes))
        if name == "metric_isometry":
            angles = task.phases or (0.0, 0.0)
            return _check_report(verify_isometry_invariance(s1, s2, tuple(phase(a) for a in angles), tol, nodes))
        if name == "metric_scalar":
            lam = _to_float(_need(task, "scalars", task.scalars)[0])
            return _check_report(verify_scalar_shift(s1, s2, lam, 1, tol, nodes))
        raise InputError(f"unknown metric check {name!r}")
    seq = task.sequence()
    if name == "route_equivalence":
        report = verify_route_equivalence(seq)
    elif name == "multiadditivity":
        slot = _need(task, "slot", task.slot)
        report = verify_multiadditivity(seq, seq.replace(slot, task.replacement_section()), slot)
    elif name == "symmetry":
        perm = _need(task, "permutation", task.permutation)
        if task.permutation2 is not None:
            report = verify_symmetry_composition(seq, list(perm), list(task.permutation2))
        else:
            report = verify_symmetry(seq, list(perm))
    elif name == "base_change":
        report = verify_base_change(seq, _need(task, "t0", task.rational("t0")))
    elif name == "pullback":
        m = _need(task, "m", task.base_value("m"))
        report = verify_pullback_formula(list(seq.sections), m)
    elif name == "restriction":
        report = verify_restriction_to_divisor(seq)
    elif name == "isomorphism":
        scalars = _need(task, "scalars", task.scalars)
        iso = ScalarIsomorphism(tuple(Fraction(s) for s in scalars))
        report = verify_isomorphism(seq, iso)
        if task.scalars2 is not None:
            iso2 = ScalarIsomorphism(tuple(Fraction(s) for s in task.scalars2))
            composed = verify_isomorphism(seq, iso.compose(iso2))
            if composed.verdict == "fail":
                report = composed
    else:
        raise InputError(f"no single-instance check named {name!r}")
    return _check_report(report)


def _to_float(text: str) -> float:
    return float(Fraction(text))


def _need(task: TaskFile, key: str, value):
    if value is None:
        raise InputError(f"this check needs the task key {key!r}")
    return value


def _hermitian_pair(task: TaskFile) -> tuple[HermitianSection, HermitianSection]:
    if task.family != "P1" or len(task.sections) != 2:
        raise InputError("metric checks on P1 need exactly two sections")
    if task.ring.kind not in ("Q", "Z"):
        raise InputError("the metric is evaluated over a point: base must be Q or Z")
    s1, s2 = task.section_objects()
    return HermitianSection.from_section(s1), HermitianSection.from_section(s2)


def cmd_verify(name: str, task: TaskFile | None, seed: int, count: int | None) -> dict:
    if task is not None:
        out = verify_task(name, task, seed)
        out["inputs"] = task.to_inputs()
        out["seed"] = seed
        return out
    if name not in DEFAULT_COUNTS:
        raise InputError(f"unknown suite {name!r}; available: {', '.join(sorted(DEFAULT_COUNTS))}")
    if count is not None and count < 1:
        raise InputError("--count must be positive")
    result = run_suite(name, seed, count)
    out = result.to_dict()
    if result.verdict == "fail":
        raise VerificationFailure(out)
    return out


def cmd_metric(task: TaskFile, nodes: int | None, tol: float | None, seed: int) -> dict:
    nodes = nodes or task.nodes or DEFAULT_NODES
    tol = tol if tol is not None else task.tol
    if task.is_algebra or task.family == "P0":
        if not task.is_algebra:
            raise InputError("the d = 0 metric needs family = \"algebra\" with a modulus")
        algebra = task.algebra()
        if algebra.modulus is None:
            raise InputError("the d = 0 metric needs the fibre as a modulus polynomial")
        value = metric_d0(algebra, task.algebra_element(algebra))
        out = value.to_dict()
    else:
        s1, s2 = _hermitian_pair(task)
        value = metric_d1(s1, s2, nodes)
        out = value.to_dict()
    out["inputs"] = task.to_inputs()
    out["seed"] = seed
    if tol is not None:
        out["tolerance"] = tol
        out["within_tolerance"] = value.abs_error_estimate <= tol
        if not out["within_tolerance"]:
            raise VerificationFailure(out)
    return out


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delpair", description="Norms and Deligne pairings of sections on P^d families.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("norm", help="norm of an element of a finite algebra")
    s.add_argument("task", help="task file, or - for stdin")
    s = sub.add_parser("pair", help="pairing section of d+1 sections on P^d")
    s.add_argument("task")
    s.add_argument("--route", choices=("iterated_nm", "sylvester", "macaulay"))
    s = sub.add_parser("intersect", help="intersection number delta")
    s.add_argument("task")
    s = sub.add_parser("verify", help="run a seeded property suite, or one check on a task")
    s.add_argument("suite")
    s.add_argument("task", nargs="?")
    s.add_argument("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
    s.add_argument("--count", type=int, default=None)
    s = sub.add_parser("metric", help="log norm of the pairing for the Fubini-Study metric")
    s.add_argument("task")
    s.add_argument("--nodes", type=int, default=None, help=f"quadrature nodes per axis (default {DEFAULT_NODES})")
    s.add_argument("--tol", type=float, default=None, help="fail when the error estimate exceeds this")
    s.add_argument("--seed", type=int, default=None, help=f"recorded only; default {DEFAULT_SEED}")
    return p


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False, default=str)


def _clean(x):
    """Replace non-finite floats so the output stays valid JSON."""
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _error(exc: BaseException) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        out["line"], out["column"] = exc.line, exc.column
    return out


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        task = read_task(getattr(args, "task", None))
        seed = args.seed if getattr(args, "seed", None) is not None else (task.seed if task and task.seed is not None else DEFAULT_SEED)
        if args.command == "norm":
            doc = cmd_norm(_require(task, "norm"))
        elif args.command == "pair":
            doc = cmd_pair(_require(task, "pair"), args.route)
        elif args.command == "intersect":
            doc = cmd_intersect(_require(task, "intersect"))
        elif args.command == "verify":
            count = args.count if args.count is not None else (task.count if task else None)
            doc = cmd_verify(args.suite, task, seed, count)
        else:
            doc = cmd_metric(_require(task, "metric"), args.nodes, args.tol, seed)
    except VerificationFailure as exc:
        stdout.write(_dump(_clean(exc.document)) + "\n")
        return EXIT_FAIL
    except LawViolation as exc:
        stderr.write(_dump(_error(exc)) + "\n")
        return EXIT_FAIL
    except (DelpairError, InputError, ValueError) as exc:
        stderr.write(_dump(_error(exc)) + "\n")
        return EXIT_INPUT
    stdout.write(_dump(_clean(doc)) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
