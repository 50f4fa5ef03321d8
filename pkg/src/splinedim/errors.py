"""Exception hierarchy shared across the package."""


class SplineDimError(Exception):
    """Base class for all package errors."""


class DegenerateCell(SplineDimError):
    pass


class DuplicateCell(SplineDimError):
    pass


class InvalidLattice(SplineDimError):
    pass


class UnknownVertex(SplineDimError, KeyError):
    pass


class MeshFormatError(SplineDimError, ValueError):
    pass


class InvalidEdgeValence(SplineDimError, ValueError):
    pass


class NotClosedStar(SplineDimError, ValueError):
    pass


class NotOpenStar(SplineDimError, ValueError):
    pass


class MalformedStar(SplineDimError, ValueError):
    pass


class FieldFailure(SplineDimError, ArithmeticError):
    """Modular ranks disagreed and no exact answer could be obtained."""


class NoStabilization(SplineDimError):
    pass


class NotFound(SplineDimError):
    pass
