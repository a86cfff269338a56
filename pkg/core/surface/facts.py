"""
The fact database: declared intersection numbers and generator actions.

Every fact carries a provenance tag. The checker reports the facts it
consumes, so the trusted base of a run is exactly what this module holds.
"""
from dataclasses import dataclass, field, replace
from enum import Enum

from core.words.letters import Letter


class Provenance(str, Enum):
    PAPER = "PAPER"
    FIGURE_AXIOM = "FIGURE-AXIOM"
    DERIVED_PATTERN = "DERIVED-PATTERN"

    @classmethod
    def parse(cls, token):
        try:
            return cls(token)
        except ValueError:
            allowed = ", ".join(member.value for member in cls)
            raise ValueError(f"unknown provenance {token!r}, expected one of {allowed}") from None


@dataclass(frozen=True)
class IntersectionFact:
    first: object
    second: object
    number: int
    provenance: Provenance
    lineno: int | None = field(default=None, compare=False)

    @property
    def key(self):
        return (self.first, self.second)

    def mirrored(self):
        return replace(self, first=self.second, second=self.first)

    def unordered(self):
        """The same fact written with its curves in sorted order."""
        return self if self.first <= self.second else self.mirrored()

    def __str__(self):
        return f"i({self.first}, {self.second}) = {self.number} [{self.provenance.value}]"


@dataclass(frozen=True)
class ActionFact:
    """``letter(source) = image^sign`` for a single generator letter."""

    letter: Letter
    source: object
    image: object
    sign: int
    provenance: Provenance
    lineno: int | None = field(default=None, compare=False)

    @property
    def key(self):
        return (self.letter, self.source)

    def __str__(self):
        sign = "+1" if self.sign > 0 else "-1"
        return f"{self.letter}({self.source}) = {self.image} ({sign}) [{self.provenance.value}]"


@dataclass(frozen=True)
class BraidFact:
    """AB(a) = b, licensed by the intersection fact i(a, b) = 1."""

    first: object
    second: object
    origin: IntersectionFact

    @property
    def key(self):
        return (self.first, self.second)

    @property
    def provenance(self):
        return self.origin.provenance

    def __str__(self):
        return f"{self.first}{self.second}({self.first}) = {self.second} [braid from {self.origin}]"


def base_fact(fact):
    """The declared fact behind a consumed fact; braid facts trace back to their intersection."""
    if isinstance(fact, BraidFact):
        return fact.origin.unordered()
    if isinstance(fact, IntersectionFact):
        return fact.unordered()
    return fact


@dataclass(frozen=True)
class FactDB:
    intersections: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    braids: dict = field(default_factory=dict)

    def intersection(self, first, second):
        return self.intersections.get((first, second))

    def action(self, letter, source):
        return self.actions.get((letter.base(), source))

    def action_preimage(self, letter, image):
        base = letter.base()
        for fact in self.actions.values():
            if fact.letter == base and fact.image == image:
                return fact
        return None

    def rotation_step(self, source):
        return self.action(Letter.rotation(), source)

    def rotation_preimage(self, image):
        return self.action_preimage(Letter.rotation(), image)

    def braid(self, first, second):
        return self.braids.get((first, second))

    def facts(self):
        """Declared facts, each intersection pair listed once."""
        seen = {fact.unordered() for fact in self.intersections.values()}
        return sorted(seen, key=str) + sorted(self.actions.values(), key=str)

    def by_provenance(self, provenance):
        return [fact for fact in self.facts() if fact.provenance == provenance]

    def with_intersection(self, fact, mirror=True):
        intersections = dict(self.intersections)
        intersections[fact.key] = fact
        if mirror:
            intersections[fact.mirrored().key] = fact.mirrored()
        return replace(self, intersections=intersections)

    def with_action(self, fact):
        return replace(self, actions={**self.actions, fact.key: fact})

    def with_braid(self, fact):
        if self.braids.get(fact.key) == fact:
            return self
        return replace(self, braids={**self.braids, fact.key: fact})

    def without(self, fact):
        """Drop a declared fact, both directions of an intersection and any braid it licensed."""
        fact = base_fact(fact)
        if isinstance(fact, IntersectionFact):
            gone = {fact.key, fact.mirrored().key}
            return replace(
                self,
                intersections={k: v for k, v in self.intersections.items() if k not in gone},
                braids={k: v for k, v in self.braids.items() if v.origin.key not in gone},
            )
        return replace(self, actions={k: v for k, v in self.actions.items() if v != fact})

    def __len__(self):
        return len(self.facts())
