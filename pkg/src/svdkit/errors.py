"""Exception hierarchy shared by every svdkit module.

Each class carries a stable ``code`` used by the command-line front end when
it reports ``ERROR <code>: <message>``.
"""


class SvdkitError(Exception):
    code = "SVDKIT_ERROR"


class NonFiniteInput(SvdkitError, ValueError):
    code = "NON_FINITE_INPUT"


class ShapeError(SvdkitError, ValueError):
    code = "SHAPE_ERROR"


class RankOutOfRange(SvdkitError, ValueError):
    code = "RANK_OUT_OF_RANGE"


class ConvergenceFailure(SvdkitError, RuntimeError):
    code = "CONVERGENCE_FAILURE"


# roll-call
class EmptyInput(SvdkitError, ValueError):
    code = "EMPTY_INPUT"


class DuplicateVote(SvdkitError, ValueError):
    code = "DUPLICATE_VOTE"


class DegenerateMatrix(SvdkitError, ValueError):
    code = "DEGENERATE_MATRIX"


class UnknownParty(SvdkitError, KeyError):
    code = "UNKNOWN_PARTY"

    def __str__(self):
        return str(self.args[0]) if self.args else ""


# grains
class ParameterError(SvdkitError, ValueError):
    code = "PARAMETER_ERROR"


class DegenerateInput(SvdkitError, ValueError):
    code = "DEGENERATE_INPUT"


class SingularShape(SvdkitError, ValueError):
    code = "SINGULAR_SHAPE"


class InvalidKind(SvdkitError, ValueError):
    code = "INVALID_KIND"


class MismatchedFrames(SvdkitError, ValueError):
    code = "MISMATCHED_FRAMES"


class InsufficientData(SvdkitError, ValueError):
    code = "INSUFFICIENT_DATA"


# entanglement
class NotNormalized(SvdkitError, ValueError):
    code = "NOT_NORMALIZED"

    def __init__(self, trace, message=None):
        self.trace = trace
        super().__init__(message or f"tr(C C^H) = {trace!r}, expected 1")


# tensors
class InvalidMode(SvdkitError, ValueError):
    code = "INVALID_MODE"


# file handling
class IoError(SvdkitError, OSError):
    code = "IO_ERROR"


class ParseError(SvdkitError, ValueError):
    code = "PARSE_ERROR"
