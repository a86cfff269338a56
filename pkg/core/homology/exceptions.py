from core.exceptions import CrosscapError


class HomologyError(CrosscapError, ValueError):
    """A vector or matrix has the wrong shape for the genus, or is singular."""
