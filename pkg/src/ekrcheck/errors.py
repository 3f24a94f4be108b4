"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``UsageError`` -> 2, ``CapacityError`` -> 3,
anything derived from ``MathematicalAssertionError`` -> 1.
"""


class EkrError(Exception):
    pass


class UsageError(EkrError, ValueError):
    """Malformed input: mismatched domains, bad certificates, bad files."""


class CapacityError(EkrError):
    """The requested computation exceeds a configured size limit."""


class PreconditionError(UsageError):
    """A required hypothesis does not hold for the supplied arguments."""


class MathematicalAssertionError(EkrError):
    """A machine-checked mathematical statement turned out false."""


class ClassificationError(MathematicalAssertionError):
    """classify_degree1 was handed a function of degree above one."""


class InternalInconsistencyError(MathematicalAssertionError):
    """A degree-1 function matched none of the classified forms."""


class ChiRangeError(MathematicalAssertionError):
    """A signed tableau sum left the range {-1, 0, 1}."""

    def __init__(self, message, witness=None, value=None):
        super().__init__(message)
        self.witness = witness
        self.value = value


class VerificationFailure(MathematicalAssertionError):
    """A clique-based uniqueness check failed; ``clique`` names the offender."""

    def __init__(self, message, clique=None):
        super().__init__(message)
        self.clique = clique
