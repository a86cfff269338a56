from core.exceptions import LocatedError


class WordSyntaxError(LocatedError):
    """A word does not follow the canonical word syntax."""
