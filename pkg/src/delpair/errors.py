"""Exception hierarchy shared by every module."""


class DelpairError(Exception):
    """Base class; the CLI maps these to exit code 2 unless noted."""


class UnsupportedRing(DelpairError):
    pass


class SingularInput(DelpairError):
    pass


class SpecializationPole(DelpairError):
    pass


class IntegralityViolation(DelpairError):
    pass


class NotModuleLinear(DelpairError):
    pass


class InvalidAlgebra(DelpairError):
    pass


class UnsupportedDimension(DelpairError):
    pass


class ArityMismatch(DelpairError):
    pass


class ZeroAtInfinity(DelpairError):
    pass


class NotCertified(DelpairError):
    pass


class ChartObstruction(DelpairError):
    pass


class QuadratureSingularNode(DelpairError):
    pass


class SectionVanishesAtFiberPoint(DelpairError):
    pass


class LawViolation(DelpairError):
    """An identity that must hold exactly did not; CLI exit code 1."""


class ParseError(DelpairError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class HomogeneityError(DelpairError):
    pass


class InvalidSection(DelpairError):
    pass
