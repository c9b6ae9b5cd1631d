"""Exception classes shared across the package.

Every error carries a machine-readable ``code`` and the process ``exit_code``
the command line maps it to (0 ok, 2 usage, 3 input incompatibility,
4 cap exceeded, 5 numerical failure).
"""


class DAQCError(Exception):
    code = "error"
    exit_code = 1


class InvalidSize(DAQCError, ValueError):
    code = "invalid_size"
    exit_code = 2


class ParseError(DAQCError, ValueError):
    code = "parse_error"
    exit_code = 2


class IncompatiblePair(DAQCError):
    """Source coupling is zero while the matching problem coupling is not."""

    code = "incompatible_pair"
    exit_code = 3


class EmptyProblem(DAQCError):
    code = "empty_problem"
    exit_code = 3


class DimensionMismatch(DAQCError, ValueError):
    code = "dimension_mismatch"
    exit_code = 3


class WrongModel(DAQCError, ValueError):
    code = "wrong_model"
    exit_code = 3


class EmptySelection(DAQCError, ValueError):
    code = "empty_selection"
    exit_code = 2


class InvalidProblem(DAQCError, ValueError):
    code = "invalid_problem"
    exit_code = 2


class CapExceeded(DAQCError):
    code = "cap_exceeded"
    exit_code = 4


class SizeCapExceeded(CapExceeded):
    code = "size_cap_exceeded"


class NumericalFailure(DAQCError):
    code = "numerical_failure"
    exit_code = 5


class DegenerateHull(NumericalFailure):
    code = "degenerate_hull"
