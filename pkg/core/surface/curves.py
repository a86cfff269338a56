"""Named two-sided curves on N_g in the circular crosscap model."""
import re
from dataclasses import dataclass, field
from enum import Enum

from .exceptions import CurveUndefined

MIN_GENUS = 3

_CURVE_NAME = re.compile(r"^(Gamma|Alpha|A|B|C)(\d+)$")


def validate_genus(g):
    if not isinstance(g, int) or g < MIN_GENUS:
        raise ValueError(f"genus must be an integer >= {MIN_GENUS}, got {g!r}")
    return g


def reduce_crosscap(index, g):
    """Crosscap indices are 1-based and cyclic."""
    return (index - 1) % g + 1


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    GAMMA = "Gamma"
    ALPHA = "Alpha"


@dataclass(frozen=True, order=True)
class CurveId:
    family: Family
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"curve index must be >= 1, got {self.index}")

    def __str__(self):
        return f"{self.family.value}{self.index}"

    @classmethod
    def parse(cls, text):
        match = _CURVE_NAME.match(text.strip())
        if not match:
            raise ValueError(f"not a curve name: {text!r}")
        return cls(Family(match.group(1)), int(match.group(2)))

    def reduced(self, g):
        if self.family is Family.GAMMA:
            return CurveId(self.family, reduce_crosscap(self.index, g))
        return self


@dataclass(frozen=True)
class CurveRecord:
    id: CurveId
    traversal: frozenset
    h_class: tuple
    two_sided: bool = True

    def avoids(self, crosscaps):
        return not (self.traversal & set(crosscaps))


@dataclass(frozen=True)
class CurveTable:
    """Per-genus instantiation of the curve table, keyed by canonical id."""

    genus: int
    records: dict
    aliases: dict = field(default_factory=dict)
    version: int = 1
    digest: str = ""

    def canonical(self, curve_id):
        reduced = curve_id.reduced(self.genus)
        reduced = self.aliases.get(reduced, reduced)
        if reduced not in self.records:
            raise CurveUndefined(curve_id, self.genus)
        return reduced

    def resolve(self, curve_id):
        return self.records[self.canonical(curve_id)]

    def __contains__(self, curve_id):
        try:
            self.canonical(curve_id)
        except CurveUndefined:
            return False
        return True

    def __iter__(self):
        return iter(sorted(self.records.values(), key=lambda record: record.id))

    def __len__(self):
        return len(self.records)


def resolve_curve(curve_id, table):
    """Instantiate a named curve at the table's genus; Gamma indices are cyclic."""
    return table.resolve(curve_id)
