"""Flat ``key = value`` task files.

Each non-blank line that does not start with ``#`` is ``key = value``; the
value is a Python literal (string, number, list, tuple, bool).  Bare words are
accepted for ``base``, ``family`` and ``route``.  Unknown or repeated keys are
errors.  Polynomial texts are stored in canonical form, so printing a task and
parsing it again gives the same task.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, fields
from fractions import Fraction

from delpair.errors import ArityMismatch, DelpairError, HomogeneityError, InvalidAlgebra, ParseError
from delpair.exact.poly import parse_base_element, parse_poly
from delpair.exact.rings import BaseRing
from delpair.family import BundleSection, ProjectiveFamily, SectionSequence
from delpair.norm import FiniteAlgebra, companion_algebra

_LINE = re.compile(r"^(\s*)([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")
_BARE = re.compile(r"^[A-Za-z0-9_\[\]]+$")
BARE_KEYS = ("base", "family", "route")
FAMILIES = ("P0", "P1", "P2", "P3", "algebra")


@dataclass(frozen=True)
class TaskFile:
    base: str = "Q"
    family: str = "P1"
    sections: tuple = ()
    twists: tuple | None = None
    structure: tuple | None = None
    unit: tuple | None = None
    modulus: tuple | None = None
    element: tuple | None = None
    t0: str | None = None
    m: str | None = None
    permutation: tuple | None = None
    permutation2: tuple | None = None
    scalars: tuple | None = None
    scalars2: tuple | None = None
    phases: tuple | None = None
    slot: int | None = None
    replacement: tuple | None = None
    route: str | None = None
    global_: bool | None = None
    nodes: int | None = None
    tol: float | None = None
    seed: int | None = None
    count: int | None = None

    # -- derived objects ---------------------------------------------------
    @property
    def ring(self) -> BaseRing:
        return BaseRing.parse(self.base)

    @property
    def is_algebra(self) -> bool:
        return self.family == "algebra"

    @property
    def projective_family(self) -> ProjectiveFamily:
        if self.is_algebra:
            raise InvalidAlgebra("task describes a finite algebra, not a projective family")
        return ProjectiveFamily(self.ring, int(self.family[1:]))

    def section_objects(self) -> list[BundleSection]:
        fam = self.projective_family
        return [BundleSection(fam, k, fam.poly(text)) for k, text in self.sections]

    def sequence(self) -> SectionSequence:
        return SectionSequence(self.section_objects())

    def algebra(self) -> FiniteAlgebra:
        ring = self.ring
        if self.modulus is not None:
            return companion_algebra(ring, [parse_base_element(c, ring) for c in self.modulus])
        if self.structure is None or self.unit is None:
            raise InvalidAlgebra("an algebra needs either modulus or structure and unit")
        table = [[[parse_base_element(c, ring) for c in row] for row in plane] for plane in self.structure]
        return FiniteAlgebra(ring, table, [parse_base_element(c, ring) for c in self.unit])

    def algebra_element(self, algebra: FiniteAlgebra | None = None):
        algebra = algebra or self.algebra()
        if self.element is None:
            raise InvalidAlgebra("task has no element")
        if len(self.element) != algebra.n:
            raise ArityMismatch(f"element has {len(self.element)} coordinates, algebra rank is {algebra.n}")
        return algebra.element([parse_base_element(c, algebra.base) for c in self.element])

    def base_value(self, name: str):
        text = getattr(self, name)
        return None if text is None else parse_base_element(text, self.ring)

    def rational(self, name: str) -> Fraction | None:
        text = getattr(self, name)
        return None if text is None else Fraction(text)

    def replacement_section(self) -> BundleSection:
        fam = self.projective_family
        k, text = self.replacement
        return BundleSection(fam, k, fam.poly(text))

    def to_inputs(self) -> dict:
        """Non-default fields in canonical form, for echoing in outputs."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None or (f.name == "sections" and not v):
                continue
            out[_key_name(f.name)] = _jsonable(v)
        return out


def _key_name(field_name: str) -> str:
    return "global" if field_name == "global_" else field_name


def _field_name(key: str) -> str:
    return "global_" if key == "global" else key


KEYS = tuple(_key_name(f.name) for f in fields(TaskFile))


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


# ---------------------------------------------------------------------------
# parsing


def _literal(value_text: str, key: str, line: int, col: int):
    try:
        return ast.literal_eval(value_text)
    except (SyntaxError, ValueError) as exc:
        if key in BARE_KEYS and _BARE.match(value_text):
            return value_text
        offset = getattr(exc, "offset", None) or 1
        raise ParseError(f"malformed value for {key!r}", line, col + offset - 1) from None


def _scalar_text(x, key, line, col) -> str:
    if isinstance(x, bool) or not isinstance(x, (int, str, Fraction)):
        raise ParseError(f"{key!r} entries must be integers or strings", line, col)
    return str(x).strip()


def _int_list(x, key, line, col) -> tuple:
    if not isinstance(x, (list, tuple)) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ParseError(f"{key!r} must be a list of integers", line, col)
    return tuple(x)


def _text_list(x, key, line, col) -> tuple:
    if not isinstance(x, (list, tuple)):
        raise ParseError(f"{key!r} must be a list", line, col)
    return tuple(_scalar_text(v, key, line, col) for v in x)


def _section_pair(x, key, line, col):
    if not (isinstance(x, (list, tuple)) and len(x) == 2 and isinstance(x[0], int) and isinstance(x[1], str)):
        raise ParseError(f"{key!r} entries must be (twist, \"polynomial\") pairs", line, col)
    return int(x[0]), x[1]


def _convert(key: str, value, line: int, col: int):
    if key in ("base", "family", "route"):
        if not isinstance(value, str):
            raise ParseError(f"{key!r} must be a string", line, col)
        return value.strip()
    if key == "sections":
        if not isinstance(value, (list, tuple)):
            raise ParseError("'sections' must be a list of (twist, \"polynomial\") pairs", line, col)
        return tuple(_section_pair(v, key, line, col) for v in value)
    if key == "replacement":
        return _section_pair(value, key, line, col)
    if key in ("twists", "permutation", "permutation2"):
        return _int_list(value, key, line, col)
    if key in ("unit", "modulus", "element", "scalars", "scalars2"):
        return _text_list(value, key, line, col)
    if key == "structure":
        if not isinstance(value, (list, tuple)) or not all(isinstance(p, (list, tuple)) for p in value):
            raise ParseError("'structure' must be an n x n x n nested list", line, col)
        return tuple(tuple(_text_list(row, key, line, col) for row in plane) for plane in value)
    if key in ("t0", "m"):
        return _scalar_text(value, key, line, col)
    if key == "phases":
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, (int, float)) for v in value):
            raise ParseError("'phases' must be a list of angles in radians", line, col)
        return tuple(float(v) for v in value)
    if key in ("slot", "nodes", "seed", "count"):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"{key!r} must be an integer", line, col)
        return value
    if key == "tol":
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError("'tol' must be a number", line, col)
        return float(value)
    if key == "global":
        if not isinstance(value, bool):
            raise ParseError("'global' must be True or False", line, col)
        return value
    raise ParseError(f"unknown key {key!r}", line, col)  # pragma: no cover


def _canonical_section(ring: BaseRing, fam: ProjectiveFamily, k: int, text: str, line: int, col: int) -> tuple:
    form = parse_poly(text, ring, fam.variables, line=line, column=col)
    if not form:
        raise ParseError("a section must be a nonzero form", line, col)
    degree = form.homogeneous_degree()
    if degree is None:
        raise HomogeneityError(f"{form.text()} is not homogeneous (line {line})")
    if degree != k:
        raise HomogeneityError(f"declared twist {k} but {form.text()} has degree {degree} (line {line})")
    return k, form.text()


def parse_task(text: str) -> TaskFile:
    values: dict = {}
    where: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.match(raw)
        if not m:
            raise ParseError("expected 'key = value'", lineno, len(raw) - len(raw.lstrip()) + 1)
        key, value_text = m.group(2), m.group(3)
        key_col = m.start(2) + 1
        value_col = m.start(3) + 1
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, key_col)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno, key_col)
        if not value_text:
            raise ParseError(f"missing value for {key!r}", lineno, value_col)
        value = _convert(key, _literal(value_text, key, lineno, value_col), lineno, value_col)
        values[key] = value
        where[key] = (lineno, value_col, raw)
    return _validate(values, where)


def _string_column(raw: str, text: str, default: int) -> int:
    """0-based column of a polynomial text inside its source line."""
    i = raw.find(text)
    return i if i >= 0 else default - 1


def _validate(values: dict, where: dict) -> TaskFile:
    def pos(key):
        line, col, raw = where.get(key, (1, 1, ""))
        return line, col, raw

    base_text = values.get("base", "Q")
    try:
        ring = BaseRing.parse(base_text)
    except DelpairError as exc:
        raise ParseError(str(exc), *pos("base")[:2]) from None
    family = values.get("family", "P1")
    if family not in FAMILIES:
        raise ParseError(f"family must be one of {', '.join(FAMILIES)}", *pos("family")[:2])

    out = {_field_name(k): v for k, v in values.items()}
    out["base"] = str(ring)
    if family != "algebra":
        fam = ProjectiveFamily(ring, int(family[1:]))
        for key in ("sections", "replacement"):
            if key not in values:
                continue
            line, col, raw = pos(key)
            items = [values[key]] if key == "replacement" else list(values[key])
            canon = [_canonical_section(ring, fam, k, t, line, _string_column(raw, t, col)) for k, t in items]
            out[key] = canon[0] if key == "replacement" else tuple(canon)
    elif "sections" in values:
        raise ParseError("an algebra task takes 'element', not 'sections'", *pos("sections")[:2])

    # base-field entries: validate and canonicalise
    for key in ("t0", "m"):
        if key in values:
            line, col, _ = pos(key)
            if key == "t0":
                try:
                    out[key] = str(Fraction(values[key]))
                except (ValueError, ZeroDivisionError):
                    raise ParseError("'t0' must be a rational number", line, col) from None
            else:
                out[key] = _canonical_base(values[key], ring, line, col)
    for key in ("unit", "modulus", "element", "scalars", "scalars2"):
        if key in values:
            line, col, _ = pos(key)
            out[key] = tuple(_canonical_base(c, ring, line, col) for c in values[key])
    if "structure" in values:
        line, col, _ = pos("structure")
        out["structure"] = tuple(
            tuple(tuple(_canonical_base(c, ring, line, col) for c in row) for row in plane) for plane in values["structure"]
        )
    if "route" in values and values["route"] not in ("iterated_nm", "sylvester", "macaulay"):
        raise ParseError("route must be iterated_nm, sylvester or macaulay", *pos("route")[:2])
    return TaskFile(**out)


def _canonical_base(text: str, ring: BaseRing, line: int, col: int) -> str:
    try:
        return ring.text(parse_base_element(text, ring))
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (line", 1)[0] + f" in {text!r}", line, col) from None


# ---------------------------------------------------------------------------
# printing


def _format(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, bool):
        return "True" if v else "False"
    if isinstance(v, tuple):
        if len(v) == 2 and isinstance(v[0], int) and not isinstance(v[0], bool) and isinstance(v[1], str):
            return f"({v[0]}, {_format(v[1])})"
        return "[" + ", ".join(_format(x) for x in v) + "]"
    return repr(v)


def print_task(task: TaskFile) -> str:
    lines = []
    for f in fields(task):
        v = getattr(task, f.name)
        if v is None or (f.name == "sections" and not v):
            continue
        lines.append(f"{_key_name(f.name)} = {_format(v)}")
    return "\n".join(lines) + "\n"
