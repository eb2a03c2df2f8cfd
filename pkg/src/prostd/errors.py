"""Exception types shared across the package.

Everything subclasses ValueError so callers that do not care about the
fine distinction can catch one thing; the CLI maps these to exit code 1
and genuine usage problems to exit code 2.
"""


class RingMismatchError(ValueError):
    """Operands belong to different coefficient rings."""


class MaximalIdealError(ValueError):
    """A value that must lie in (a power of) the maximal ideal does not."""


class ShapeError(ValueError):
    """Series or tuple shapes are incompatible."""


class SubstitutionError(ValueError):
    """Composition argument has a nonzero constant term."""


class EnumerationBoundError(ValueError):
    """An enumeration would exceed the configured size bound."""

    def __init__(self, size, bound):
        super().__init__(f"enumeration size {size} exceeds bound {bound}")
        self.size = size
        self.bound = bound


class WordSyntaxError(ValueError):
    """Word text failed to parse."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExactnessError(ValueError):
    """Exact (untruncated) coefficients are required for this operation."""


class LawError(ValueError):
    """A series tuple fails the formal-group-law axioms."""


class ExtensionDataError(ValueError):
    """Transversal-extension data is inconsistent."""
