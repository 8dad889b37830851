"""Exception types shared by all solver modules.

The CLI maps these onto exit codes: input and parse errors exit with 2,
infeasible inputs and contract failures with 3, resource caps with 4.
"""


class DomsetError(Exception):
    """Base class for every error raised by the package."""


class InputError(DomsetError, ValueError):
    """Malformed or out-of-contract input."""


class ParseError(InputError):
    """A file could not be parsed."""


class ValidationError(InputError):
    """A structure (usually a tree decomposition) violates an axiom."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class WidthExceeded(DomsetError):
    """A bounded-width constructor found that the width is larger than asked."""

    def __init__(self, d, message=None):
        super().__init__(message or "treewidth exceeds %d" % d)
        self.d = d


class StrategyFailure(DomsetError):
    """An internal heuristic could not meet its advertised guarantee."""


class ResourceError(DomsetError):
    """A configured size cap was exceeded."""

    def __init__(self, what, value, cap):
        super().__init__("%s = %s exceeds cap %s" % (what, value, cap))
        self.what = what
        self.value = value
        self.cap = cap


class InfeasibleError(DomsetError):
    """The instance has no feasible solution, or a contract check failed."""
