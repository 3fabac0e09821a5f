"""Exception hierarchy.

Two families matter for the CLI exit codes: DataError (malformed or
inconsistent inputs, exit 2) and NumericError (a solver or recursion could
not complete, exit 3). VerificationFailure maps to exit 4.
"""


class TreewaveError(Exception):
    pass


class DataError(TreewaveError):
    pass


class NumericError(TreewaveError):
    pass


# --- tree / input validation ------------------------------------------------

class CycleDetected(DataError):
    pass


class Disconnected(DataError):
    pass


class NonPositiveLength(DataError):
    pass


class RootNotBoundary(DataError):
    pass


class UnknownVertex(DataError):
    pass


class NotASheaf(DataError):
    pass


class GridMismatch(DataError):
    pass


class IncompatibleControl(DataError):
    pass


class IncompatibleBundles(DataError):
    pass


class InconsistentTrains(DataError):
    pass


class NoReflection(DataError):
    pass


class NoCertifiedSheaf(DataError):
    pass


class AmbiguousGrouping(DataError):
    pass


class NonIntegerDegree(DataError):
    pass


class NonDecaying(DataError):
    pass


# --- numerics ----------------------------------------------------------------

class StepFailure(NumericError):
    pass


class CFLViolation(NumericError):
    pass


class SpectrumHit(NumericError):
    pass


class ClusterUnresolved(NumericError):
    pass


class TooManyRays(NumericError):
    pass


class HorizonTooShort(NumericError):
    pass


class PeelSingularity(NumericError):
    pass


class ConsistencyFailure(NumericError):
    pass


class InconsistentSheafData(NumericError):
    pass


class LeadingAmplitudeZero(NumericError):
    pass


class IllConditioned(NumericError):
    pass


class WindowEmpty(NumericError):
    """Raised when the data window is exhausted before an operation can run.

    Carries ``stage`` describing how far a multi-stage procedure got.
    """

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class VerificationFailure(TreewaveError):
    pass
