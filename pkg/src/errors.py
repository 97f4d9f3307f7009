"""Exception hierarchy shared by the engines, the game graph and the command line."""


class ArenaError(Exception):
    """Base class for every error raised by the arena."""


class DimensionError(ArenaError, ValueError):
    """Operands disagree on bit-string width."""


class ParameterError(ArenaError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ValidityError(ArenaError, ValueError):
    """An object violates its own invariants (normalization, hermiticity, ...)."""


class CapacityError(ArenaError):
    """A dense representation would exceed the desk-scale width cap."""


class BudgetExceededError(ArenaError):
    """A sampler ran out of its trial budget."""


class ProtocolError(ArenaError):
    """The referee received sample batches that do not match the schedule."""


class ReductionFailureError(ArenaError):
    """Binarization found no threshold with the guaranteed gap."""


class InfeasibleError(ArenaError):
    """A request cannot be met at all (e.g. fewer distinct strings than asked for)."""


class UsageError(ArenaError):
    """Bad command-line or config-file input."""
