"""Exception types shared across the package."""


class PretenseError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(PretenseError, ValueError):
    """An argument violates a documented precondition."""


class OutOfRangeError(PretenseError, ValueError):
    """A requested point lies outside the computed or supported range."""


class LimitError(PretenseError, ValueError):
    """A documented hard cap was exceeded (these caps are policy, not physics)."""


class ResourceError(PretenseError, RuntimeError):
    """An allocation failed; the message states the bytes that were requested."""


class RuleError(PretenseError, RuntimeError):
    """A prime-power rule raised; carries the (p, k) that triggered it."""


class DegenerateFitError(PretenseError, ValueError):
    """Too few usable points remain for a least-squares fit."""
