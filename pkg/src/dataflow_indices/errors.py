"""Exception hierarchy shared by the library and the command line.

Each class carries the process exit code the CLI uses when it escapes.
"""


class DataflowError(Exception):
    exit_code = 5


class ParameterError(DataflowError, ValueError):
    """A numeric argument (order, beta, size, thread count) is out of range."""

    exit_code = 2


class ParseError(DataflowError, ValueError):
    """An input file could not be decoded."""

    exit_code = 3


class ValidationError(DataflowError, ValueError):
    """Decoded data violates a structural invariant (shape, finiteness, label range)."""

    exit_code = 4
