"""Exception types shared across the package."""


class ContractError(ValueError):
    """An operation was called with arguments violating its preconditions."""


class InvalidPointError(ContractError):
    """Both projective coordinates are zero."""


class SystemFileError(ContractError):
    """A system description file is malformed; the message carries the
    position of the offending construct when known."""


class BudgetExceededError(RuntimeError):
    """A search exceeded its configured node or size budget (not a verdict)."""


class EscapeNotFoundError(RuntimeError):
    """Orbit search exhausted its budget before reaching the height threshold."""


class CacheIntegrityError(RuntimeError):
    """A sweep cache file is corrupt or belongs to a different system."""


class CoordinateSearchError(RuntimeError):
    """No suitable random coordinate change was found; indicates a bug."""
