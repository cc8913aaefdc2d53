"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the CLI prints
on failure.
"""


class TropBBSError(Exception):
    code = "ERROR"


class SizeMismatch(TropBBSError, ValueError):
    code = "SIZE_MISMATCH"


class NegativeCycle(TropBBSError, ValueError):
    code = "NEGATIVE_CYCLE"


class Acyclic(TropBBSError, ValueError):
    code = "ACYCLIC"


class NoFiniteEigenvector(TropBBSError, ValueError):
    code = "NO_FINITE_EIGENVECTOR"


class LevelTooHigh(TropBBSError, ValueError):
    code = "LEVEL_TOO_HIGH"


class InconsistentFixedPoint(TropBBSError, RuntimeError):
    code = "INCONSISTENT_FIXED_POINT"


class NotFound(TropBBSError, LookupError):
    code = "NOT_FOUND"


class NonIntegerState(TropBBSError, ValueError):
    code = "NON_INTEGER_STATE"


class CancellationDetected(TropBBSError, ArithmeticError):
    code = "CANCELLATION"


class DegenerateSupport(TropBBSError, ValueError):
    code = "DEGENERATE_SUPPORT"


class PointNotOnCurve(TropBBSError, LookupError):
    code = "POINT_NOT_ON_CURVE"


class DisconnectedPoints(TropBBSError, ValueError):
    code = "DISCONNECTED_POINTS"


class SingularPeriodMatrix(TropBBSError, ArithmeticError):
    code = "SINGULAR_PERIOD_MATRIX"


class NonConvergence(TropBBSError, RuntimeError):
    code = "NON_CONVERGENCE"


class NonPositiveMatrix(TropBBSError, ValueError):
    code = "NON_POSITIVE_MATRIX"


class AequalsB(TropBBSError, ValueError):
    code = "A_EQUALS_B"


class NonPositiveSample(TropBBSError, ValueError):
    code = "NON_POSITIVE_SAMPLE"


class ParseError(TropBBSError, ValueError):
    code = "PARSE_ERROR"


class InvariantViolation(TropBBSError, ValueError):
    code = "INVARIANT_VIOLATION"


class VerificationFailed(TropBBSError):
    code = "VERIFICATION_FAILED"
