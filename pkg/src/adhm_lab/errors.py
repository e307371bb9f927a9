"""Exception hierarchy.

Everything raised on purpose by this package derives from ``AdhmError`` so
callers (and the command line front end) can tell math failures apart from
programming errors.
"""


class AdhmError(Exception):
    """Base class for errors raised by adhm_lab."""


class DimensionError(AdhmError, ValueError):
    """Matrix shapes disagree with the dimension vector."""


class DomainError(AdhmError, ValueError):
    """Arguments are well formed but outside the supported domain."""


class ParameterError(AdhmError, ValueError):
    """A stability parameter violates its defining relation or type."""


class InvertibilityError(AdhmError, ValueError):
    """A gauge block is numerically singular."""


class PreconditionError(AdhmError, ValueError):
    """The input datum does not satisfy an operation's precondition."""


class CommutationError(AdhmError, ValueError):
    """A pair of matrices expected to commute does not."""


class GenerationError(AdhmError, RuntimeError):
    """Random generation failed after the retry budget was exhausted."""

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class LiftError(AdhmError, RuntimeError):
    """The fiber system has no usable solution."""


class FlowError(AdhmError, RuntimeError):
    """The balancing flow did not converge."""

    def __init__(self, msg, final_norm=None):
        super().__init__(msg)
        self.final_norm = final_norm
