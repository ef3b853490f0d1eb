# /////////////////////////////////////////////////////////////////////////////
# Exception hierarchy shared by every module of the toolbox.
#
# Input problems subclass ValueError so callers that only know the builtin
# still catch them.


class GroupBriberyError(Exception):
    """Base class for all errors raised by gid_bribery."""


class FlipNotAChange(GroupBriberyError, ValueError):
    """A flip writes the value the profile already holds."""


class InvalidRuleParameters(GroupBriberyError, ValueError):
    """Consent parameters violate s >= 1, t >= 1 or s + t <= n + 2."""


class ValidationError(GroupBriberyError, ValueError):
    """A structurally well-formed object with inconsistent content."""


class ParseError(GroupBriberyError, ValueError):
    """Malformed instance or solution text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedInput(ParseError):
    """Malformed input for a hardness-reduction builder."""


class NoSeparatorExists(GroupBriberyError):
    """The source has an arc straight into the sink."""


class NotSpannable(GroupBriberyError):
    """Some vertex is unreachable from the arborescence root."""


class TerminalUnreachable(GroupBriberyError):
    """A Steiner terminal is unreachable from the root."""


class TooManyTerminals(GroupBriberyError):
    """More Steiner terminals than the configured cap."""


class TooManyTargets(GroupBriberyError):
    """Goal sets larger than a subset-guessing solver accepts."""


class Infeasible(GroupBriberyError):
    """A covering program with no feasible assignment."""


class InstanceTooLarge(GroupBriberyError):
    """An oracle was called on an instance above its size guard."""


class SearchBoundExceeded(GroupBriberyError):
    """The agent oracle could not certify optimality within its bound."""


class Unsupported(GroupBriberyError):
    """A solver was called outside the (rule, cost model, goal) cells it handles."""


class SolverError(GroupBriberyError):
    """A solver produced a witness that fails its own goal check."""
