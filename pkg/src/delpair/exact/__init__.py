from delpair.exact.rings import BaseRing, RationalFunction
from delpair.exact.poly import Poly, parse_poly
from delpair.exact.matrix import det_fraction_free, det_expansion
from delpair.exact.smith import INCOMPARABLE, SmithData, smith_normal_form, unit_ratio

__all__ = [
    "BaseRing",
    "RationalFunction",
    "Poly",
    "parse_poly",
    "det_fraction_free",
    "det_expansion",
    "SmithData",
    "smith_normal_form",
    "unit_ratio",
    "INCOMPARABLE",
]
