"""Exception types shared across the package."""


class AffreachError(Exception):
    """Base class for all library errors."""


class PreconditionError(AffreachError, ValueError):
    """An operation was called outside its documented domain."""


class ResourceExceeded(AffreachError):
    """A configured resource cap (regex nodes, graph size, ...) was hit.

    Raised instead of returning a verdict, so a cap never turns into a
    wrong answer.
    """

    def __init__(self, what, limit, observed=None):
        self.what = what
        self.limit = limit
        self.observed = observed
        # largest structure actually built before the cap fired, if known
        self.peak = None
        msg = f"{what} exceeded cap {limit}"
        if observed is not None:
            msg += f" (observed {observed})"
        super().__init__(msg)


class WitnessUnavailable(AffreachError):
    """A reachability certificate could not be built within resource caps."""
