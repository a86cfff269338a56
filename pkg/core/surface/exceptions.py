from core.exceptions import CrosscapError, LocatedError


class TableSyntaxError(LocatedError):
    """The curve table text does not follow the table grammar."""


class CurveUndefined(CrosscapError, LookupError):
    def __init__(self, curve_id, genus):
        self.curve_id = curve_id
        self.genus = genus
        super().__init__(f"curve undefined at this genus: {curve_id} (g={genus})")


class RotationUnknown(CrosscapError, LookupError):
    def __init__(self, curve_id, direction):
        self.curve_id = curve_id
        self.direction = direction
        what = "T" if direction > 0 else "T^-1"
        super().__init__(f"rotation action unknown for curve {curve_id}: no single-step fact for {what}")


class TableInvariantError(CrosscapError):
    """A parsed table breaks a consistency invariant and may not be used."""

    def __init__(self, violations, genus):
        self.violations = tuple(violations)
        self.genus = genus
        listed = "; ".join(str(violation) for violation in self.violations)
        super().__init__(f"curve table fails {len(self.violations)} consistency check(s) at g={genus}: {listed}")
