from core.exceptions import CrosscapError, LocatedError


class ScriptSyntaxError(LocatedError):
    """A proof script line does not follow the script grammar."""


class ScriptError(LocatedError):
    """A well-formed script refers to something it may not use."""


class GenusOutOfRange(CrosscapError):
    def __init__(self, script, genus, message):
        self.script = script
        self.genus = genus
        super().__init__(message)


class GenusBelowMinimum(GenusOutOfRange):
    def __init__(self, script, genus, minimum):
        self.minimum = minimum
        super().__init__(script, genus,
                         f"min_genus violated: script {script} requires g >= {minimum}, got g={genus}")


class GenusAboveMaximum(GenusOutOfRange):
    def __init__(self, script, genus, maximum):
        self.maximum = maximum
        super().__init__(script, genus,
                         f"max_genus violated: script {script} is stated for g <= {maximum}, got g={genus}")
