"""Exception hierarchy shared across the package."""


class NlaError(Exception):
    """Base class for all errors raised by this package."""


class DivergenceError(NlaError):
    """A geometric series parameter reached or exceeded 1, so the quantity diverges."""


class UnreachableTargetError(NlaError):
    """No physical input parameter can produce the requested output parameter."""


class TailBoundError(NlaError):
    """A truncated sum's remainder bound exceeds the configured tolerance."""


class CutoffSearchError(NlaError):
    """No cutoff within the search limit satisfies the requested constraint."""
