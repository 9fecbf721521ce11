"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class so
that the CLI can map them to stable exit codes.
"""


class BetadimError(Exception):
    """Base class for all package-specific errors."""


class InvalidBeta(BetadimError):
    """The base specification does not denote a real number > 1."""


class PrecisionExhausted(BetadimError):
    """A certified decision could not be made within the precision budget."""


class ProbeExhausted(BetadimError):
    """A digit-stream probe ran past its depth cap without deciding."""


class CapExceeded(BetadimError):
    """An enumeration or materialization would exceed a configured cap."""


class NotAdmissible(BetadimError):
    """A digit word violates the lexicographic admissibility criterion."""


class PreconditionViolated(BetadimError):
    """A documented operation precondition does not hold."""


class ConstructionInfeasible(BetadimError):
    """No valid hit depth exists for the requested parameters."""


class InvariantFailure(BetadimError):
    """An internal invariant that should be unconditionally true failed."""


class ResolutionExceeded(BetadimError):
    """Requested scales are finer than the resolution of the sample."""
