"""Exception hierarchy. Every error raised on purpose derives from ExpFamError."""


class ExpFamError(Exception):
    pass


class NonPositiveReference(ExpFamError, ValueError):
    pass


class DimensionMismatch(ExpFamError, ValueError):
    pass


class StateSpaceTooLarge(ExpFamError):
    pass


class NotInNormalSpace(ExpFamError, ValueError):
    pass


class ZeroAtState(ExpFamError, ValueError):
    pass


class NotACoparallelClass(ExpFamError, ValueError):
    pass


class EmptySet(ExpFamError, ValueError):
    pass


class NoConvergence(ExpFamError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PointInClosure(ExpFamError, ValueError):
    pass


class ZeroNormalSpace(ExpFamError, ValueError):
    pass


class BudgetExceeded(ExpFamError):
    pass


class UnreachableTarget(ExpFamError, ValueError):
    pass


class InvalidPartition(ExpFamError, ValueError):
    pass


class BadGenerator(ExpFamError, ValueError):
    pass


class ZeroVector(ExpFamError, ValueError):
    pass


class NotSumZero(ExpFamError, ValueError):
    pass


class DegenerateSupport(ExpFamError, ValueError):
    pass


class NotOneDimensional(ExpFamError, ValueError):
    pass


class ShapeMismatch(ExpFamError, ValueError):
    pass


class UniformNotInFamily(ExpFamError, ValueError):
    pass


class ParseError(ExpFamError, ValueError):
    pass


class SchemaError(ExpFamError, ValueError):
    pass
