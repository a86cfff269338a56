from dataclasses import dataclass, replace
from enum import Enum

from core.surface.curves import CurveId


class LetterKind(str, Enum):
    TWIST = "twist"
    TRANSPOSITION = "transposition"
    ROTATION = "rotation"


@dataclass(frozen=True)
class Letter:
    """A generator raised to a nonzero power: a Dehn twist, a crosscap transposition or T."""

    kind: LetterKind
    exponent: int = 1
    curve: CurveId | None = None
    position: int | None = None

    def __post_init__(self):
        if self.exponent == 0:
            raise ValueError("letter exponent must be nonzero")
        if self.kind is LetterKind.TWIST and self.curve is None:
            raise ValueError("a twist letter needs a curve")
        if self.kind is LetterKind.TRANSPOSITION and (self.position is None or self.position < 1):
            raise ValueError("a transposition letter needs a position >= 1")

    @classmethod
    def twist(cls, curve, exponent=1):
        return cls(LetterKind.TWIST, exponent, curve=curve)

    @classmethod
    def transposition(cls, position, exponent=1):
        return cls(LetterKind.TRANSPOSITION, exponent, position=position)

    @classmethod
    def rotation(cls, exponent=1):
        return cls(LetterKind.ROTATION, exponent)

    @property
    def target(self):
        return (self.kind, self.curve, self.position)

    def with_exponent(self, exponent):
        return replace(self, exponent=exponent)

    def inverse(self):
        return self.with_exponent(-self.exponent)

    def base(self):
        return self.with_exponent(1)

    def symbol(self):
        if self.kind is LetterKind.TWIST:
            return str(self.curve)
        if self.kind is LetterKind.TRANSPOSITION:
            return f"u{self.position}"
        return "T"

    def __str__(self):
        if self.exponent == 1:
            return self.symbol()
        return f"{self.symbol()}^{self.exponent}"
