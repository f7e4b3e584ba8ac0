"""Exception hierarchy shared across the package."""


class DronefuzzError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(DronefuzzError):
    """A document is structurally malformed (bad type, missing or unknown key)."""


class ConsistencyError(DronefuzzError):
    """A fuzz-space document violates an internal invariant."""


class ConstraintError(DronefuzzError):
    """A test or scenario constraint violates a legality rule of the space."""


class RejectedInput(DronefuzzError):
    """A manual control input referenced a value outside the declared space."""


class EmptyLog(DronefuzzError):
    """A flight log with no position samples was passed to an analysis step."""


class DegenerateInput(DronefuzzError):
    """Clustering input cannot support the requested structure."""


class RangeError(DronefuzzError):
    """A cluster-count sweep range is out of bounds for the data."""


class BudgetInfeasible(DronefuzzError):
    """A downselection budget cannot cover every non-empty cluster."""


class AgentUnavailable(DronefuzzError):
    """A live operator session dropped while a test was in flight."""
