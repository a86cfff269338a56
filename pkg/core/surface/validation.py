"""Consistency gate for a loaded curve table and its fact database."""
import logging
from dataclasses import dataclass

from core.homology import f2
from core.words.letters import Letter
from core.words.words import Word

from .curves import CurveId, Family
from .exceptions import CurveUndefined

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    check: str
    fact: str
    detail: str

    def __str__(self):
        return f"[{self.check}] {self.fact}: {self.detail}"


@dataclass(frozen=True)
class RequiredAction:
    """A single-letter action ``letter(source) = image^sign`` that a proof script relies on."""

    letter: Letter
    source: CurveId
    image: CurveId
    sign: int = 1

    def __str__(self):
        return f"{self.letter}({self.source}) = {self.image} ({self.sign:+d})"


def _curve_checks(table):
    g = table.genus
    for record in table:
        if not record.two_sided or len(record.traversal) % 2:
            yield Violation("two-sided", str(record.id),
                            f"traversal {sorted(record.traversal)} has odd size or the curve is one-sided")
        if record.id.family is Family.ALPHA and any(record.h_class):
            yield Violation("alpha-class", str(record.id), "Alpha curves must have class zero")
    for k in range(1, g + 1):
        gamma = CurveId(Family.GAMMA, k)
        if gamma not in table:
            continue
        expected = frozenset((k - 1 + step) % g + 1 for step in range(4))
        record = table.resolve(gamma)
        if record.traversal != expected:
            yield Violation("gamma-traversal", str(gamma),
                            f"expected crosscaps {sorted(expected)}, got {sorted(record.traversal)}")


def _intersection_checks(table, db):
    seen = set()
    for fact in db.intersections.values():
        pair = frozenset(fact.key)
        if pair in seen:
            continue
        seen.add(pair)
        mirror = db.intersection(fact.second, fact.first)
        if mirror is None or mirror.number != fact.number:
            yield Violation("symmetry", str(fact),
                            f"no matching fact i({fact.second}, {fact.first}) = {fact.number}")
        parity = f2.pairing(f2.class_vector(fact.first, table), f2.class_vector(fact.second, table))
        if fact.number % 2 != parity:
            yield Violation("parity", str(fact), f"mod-2 pairing of the classes is {parity}")


def _action_checks(table, db):
    for fact in db.actions.values():
        if not f2.action_consistent(Word.of(fact.letter), fact.source, fact.image, table):
            yield Violation("action-homology", str(fact),
                            f"{fact.letter} does not carry [{fact.source}] to [{fact.image}] mod 2")


def _required_action(table, db, requirement):
    label = str(requirement)
    try:
        source, image = table.canonical(requirement.source), table.canonical(requirement.image)
    except CurveUndefined as exc:
        yield Violation("required", label, str(exc))
        return
    fact = db.action(requirement.letter, source)
    if fact is None or fact.image != image or fact.sign != requirement.sign:
        yield Violation("required", label, "action fact required by a bundled script is missing")


def _required_checks(table, db, required):
    for requirement in required:
        if isinstance(requirement, RequiredAction):
            yield from _required_action(table, db, requirement)
            continue
        first, second, number = requirement
        label = f"i({first}, {second}) = {number}"
        try:
            fact = db.intersection(table.canonical(first), table.canonical(second))
        except CurveUndefined as exc:
            yield Violation("required", label, str(exc))
            continue
        if fact is None or fact.number != number:
            yield Violation("required", label, "fact required by a bundled script is missing")


def validate_table(table, db, required=()):
    """
    Return every violated table invariant; an empty list means the table is usable.

    ``required`` holds what some proof script relies on: (CurveId, CurveId, n)
    intersection triples and RequiredAction entries.
    """
    violations = [
        *_curve_checks(table),
        *_intersection_checks(table, db),
        *_action_checks(table, db),
        *_required_checks(table, db, required),
    ]
    for violation in violations:
        logger.warning("Table violation at g=%s: %s", table.genus, violation)
    return violations
