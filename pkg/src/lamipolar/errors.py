"""Exception hierarchy shared by every module."""


class LamipolarError(Exception):
    """Base class for all package errors."""


class SingularMatrix(LamipolarError):
    """A 3x3 matrix whose determinant is below the singularity threshold."""

    def __init__(self, det: float, threshold: float, what: str = "matrix"):
        self.det = det
        self.threshold = threshold
        super().__init__(f"{what} is singular: |det|={abs(det):.3e} < {threshold:.3e}")


class InvalidMaterial(LamipolarError):
    """Material constants that violate positivity or polar bounds."""


class InvalidStack(LamipolarError):
    """Empty stack, non-positive thickness or otherwise malformed stack."""


class ParseError(LamipolarError):
    """Malformed JSON input. Carries a location (line or field path) when known."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class UnitsMismatch(LamipolarError):
    """Plies or loads expressed in incompatible unit systems."""


class CaseNotApplicable(LamipolarError):
    """A special-case evaluator was called on a laminate outside its hypotheses."""


class UnknownQuantity(LamipolarError):
    """Unrecognised name for a directional-diagram quantity or objective term."""


class NotIdenticalPly(LamipolarError):
    """An operation that needs a stack of identical plies got a hybrid one."""
