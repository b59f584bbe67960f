"""Exception hierarchy shared by every causaloop module."""


class CausaloopError(Exception):
    """Base class; ``code`` is the machine-readable error name."""

    code = "ERROR"


class OutOfRangeError(CausaloopError, ValueError):
    code = "OUT_OF_RANGE"


class CyclicGraphError(CausaloopError):
    code = "CYCLIC"

    def __init__(self, witness):
        self.witness = list(witness)
        super().__init__(f"graph is cyclic: {' -> '.join(map(str, self.witness))}")


class ValidationError(CausaloopError):
    """Raised when an operation needs a structurally valid input."""

    code = "INVALID_STRUCTURE"

    def __init__(self, report, message=None):
        self.report = report
        if message is None:
            codes = ", ".join(v.code for v in report.violations)
            message = f"invalid causal structure: {codes}"
        super().__init__(message)


class ShapeMismatchError(CausaloopError, ValueError):
    code = "SHAPE_MISMATCH"


class NotConstantError(CausaloopError):
    """A component depends on its own party's output."""

    code = "NOT_CONSTANT_OVER_OWN_OUTPUT"


class NotANonconstancyWitnessError(CausaloopError, ValueError):
    code = "NOT_A_NONCONSTANCY_WITNESS"


class ArityError(CausaloopError, ValueError):
    code = "ARITY"


class CapExceededError(CausaloopError):
    code = "CAP_EXCEEDED"

    def __init__(self, what, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} exceeds cap {cap}")


class TheoremViolation(CausaloopError):
    """Exhaustive enumeration contradicted one of the proven equivalences.

    Never raised by a correct implementation; kept as an error state so the
    verifiers can be pointed at deliberately broken fixed-point counters.
    """

    code = "THEOREM_VIOLATION"
