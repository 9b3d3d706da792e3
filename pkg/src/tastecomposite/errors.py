"""Exception hierarchy shared across the package."""


class TasteCompositeError(Exception):
    """Base class for all package errors."""


class ParseError(TasteCompositeError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(TasteCompositeError):
    """Input violates a domain invariant (fraction sums, score ranges, keys)."""


class DegenerateInput(TasteCompositeError):
    """Operation undefined on this input (e.g. all-zero fractions)."""


class DimensionMismatch(TasteCompositeError):
    """Paired sequences have different lengths."""


class NumericalError(TasteCompositeError):
    """Arithmetic left the defined domain (non-positive denominator etc.)."""


class UnknownIngredient(TasteCompositeError):
    """Recipe references an ingredient missing from the reference table."""


class InsufficientData(TasteCompositeError):
    """Not enough ground-truth recipes for the requested procedure."""


class NoGroundTruth(TasteCompositeError):
    """Operation requires recipes with ground-truth taste scores."""


class InfeasibleBounds(TasteCompositeError):
    """Box bounds do not intersect the unit simplex."""


class MissingFixture(TasteCompositeError):
    """A named case-study recipe is absent from the corpus."""


class NonFiniteInput(TasteCompositeError):
    """Design matrix or targets contain NaN/inf."""
