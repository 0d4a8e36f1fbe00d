"""Exception types raised across the package."""


class IOImpactError(Exception):
    """Base class for domain errors; the CLI maps these to exit status 1."""


class DimensionError(IOImpactError, ValueError):
    pass


class SingularMatrixError(IOImpactError, ArithmeticError):
    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class ParseError(IOImpactError, ValueError):
    pass


class SchemaError(IOImpactError, ValueError):
    pass


class SectorMismatchError(IOImpactError, ValueError):
    pass


class EmptyGroupError(IOImpactError, ValueError):
    pass


class InvalidTableError(IOImpactError, ValueError):
    """Raised when an IoTable violates a construction invariant."""


class NonProductiveError(IOImpactError, ValueError):
    pass


class UnknownSectorError(IOImpactError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ModelMismatchError(IOImpactError, ValueError):
    pass


class InvalidScenarioError(IOImpactError, ValueError):
    pass


class NoUnconnectedHouseholdsError(IOImpactError, ZeroDivisionError):
    pass


class InvalidRecordError(IOImpactError, ValueError):
    pass


class InsufficientDataError(IOImpactError, ValueError):
    pass
