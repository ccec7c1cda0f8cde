"""Exception types shared by all modules.

Each error carries the process exit code the CLI maps it to, so the
mapping lives in one place and stays stable.
"""


class LacunaryError(Exception):
    exit_code = 1


class PolyParseError(LacunaryError):
    """Malformed polynomial input; `lineno` is 1-based when known."""

    exit_code = 2

    def __init__(self, message, lineno=None):
        super().__init__(message)
        self.lineno = lineno


class ResourceLimitError(LacunaryError):
    """Predicted workload exceeds a guard; nothing was computed."""

    exit_code = 3


class InvalidParametersError(LacunaryError):
    """Arguments violate an operation's preconditions."""

    exit_code = 4
