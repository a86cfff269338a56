"""
The partial, fact-licensed action of words on named curves.

Nothing here guesses: every Known result lists the facts that licensed it,
and anything the fact database does not cover comes back as Unknown with
the missing fact spelled out.
"""
import logging
from dataclasses import dataclass, field

from core.surface.curves import CurveId, Family, reduce_crosscap
from core.surface.exceptions import CurveUndefined, RotationUnknown
from core.surface.facts import BraidFact
from core.surface.rotation import rotate_curve
from core.words.letters import Letter, LetterKind
from core.words.words import Word

from .exceptions import BraidPreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Known:
    image: CurveId
    sign: int = 1
    facts: tuple = ()
    known = True

    def __str__(self):
        return f"{self.image} ({'+1' if self.sign > 0 else '-1'})"


@dataclass(frozen=True)
class Unknown:
    missing_fact: str
    known = False

    def __str__(self):
        return f"unknown: missing {self.missing_fact}"


@dataclass(frozen=True)
class Transport:
    """w l w^-1 was rewritten to ``image``; the checker re-checks it mod 2."""

    conjugator: Word
    letter: Letter
    image: Letter


@dataclass(frozen=True)
class Rewritten:
    word: Word
    facts: tuple = ()
    transports: tuple = field(default=(), compare=False)
    known = True


def derive_braid_fact(first, second, db, table=None):
    """Register AB(a) = b for a = first, b = second. Needs i(a, b) = 1 in the database."""
    if table is not None:
        first, second = table.canonical(first), table.canonical(second)
    fact = db.intersection(first, second)
    if first == second or fact is None or fact.number != 1:
        raise BraidPreconditionError(first, second)
    return db.with_braid(BraidFact(first, second, fact))


def derive_braid_facts(db):
    """Every intersection fact with i = 1 licenses a braid move, in both directions."""
    for fact in list(db.intersections.values()):
        if fact.number == 1:
            db = derive_braid_fact(fact.first, fact.second, db)
    logger.debug("Derived %d braid facts", len(db.braids))
    return db


def _adjacent_position(pair):
    low, high = sorted(pair)
    return low if high == low + 1 else None


class ActionEngine:
    def __init__(self, table, db):
        self.table = table
        self.db = db

    @property
    def genus(self):
        return self.table.genus

    def canonical_word(self, word):
        """Rename every twist curve to its canonical table name (Gamma1 -> A2, Gamma{g+k} -> Gammak)."""
        return Word(tuple(
            Letter.twist(self.table.canonical(letter.curve), letter.exponent)
            if letter.kind is LetterKind.TWIST else letter
            for letter in word.letters
        ))

    def _alpha(self, position):
        alpha = CurveId(Family.ALPHA, position)
        return self.table.canonical(alpha) if alpha in self.table else None

    def _explicit(self, letter, x):
        facts = []
        sign = 1
        current = x
        for _ in range(abs(letter.exponent)):
            if letter.exponent > 0:
                fact = self.db.action(letter, current)
                nxt = fact.image if fact else None
            else:
                fact = self.db.action_preimage(letter, current)
                nxt = fact.source if fact else None
            if fact is None:
                return None
            facts.append(fact)
            sign *= fact.sign
            current = nxt
        return Known(current, sign, tuple(facts))

    def act_letter(self, letter, x):
        try:
            x = self.table.canonical(x)
            if letter.kind is LetterKind.ROTATION:
                result = rotate_curve(x, letter.exponent, self.table, self.db)
                return Known(result.image, result.sign, result.facts)
            if letter.kind is LetterKind.TWIST:
                curve = self.table.canonical(letter.curve)
                if curve == x:
                    return Known(x)
                fact = self.db.intersection(curve, x)
                if fact is not None and fact.number == 0:
                    return Known(x, 1, (fact,))
                missing = f"i({curve}, {x}) = 0 or an action fact for {curve}({x})"
            else:
                j = letter.position
                alpha = self._alpha(j)
                if alpha is not None:
                    if alpha == x:
                        return Known(x)
                    fact = self.db.intersection(x, alpha)
                    if fact is not None and fact.number == 0 and self.table.resolve(x).avoids({j, j + 1}):
                        return Known(x, 1, (fact,))
                missing = (f"i({x}, Alpha{j}) = 0 with {x} avoiding crosscaps {j}, {j + 1}, "
                           f"or an action fact for u{j}({x})")
        except (CurveUndefined, RotationUnknown) as exc:
            return Unknown(str(exc))
        explicit = self._explicit(letter, x)
        return explicit if explicit is not None else Unknown(missing)

    def _braid_partner(self, letters, index, current):
        """
        Find A^e to the left of B^e = letters[index] so that A^e ... B^e moves
        ``current`` = a onto b. Letters in between must fix a.
        """
        letter = letters[index]
        if letter.kind is not LetterKind.TWIST or abs(letter.exponent) != 1:
            return None
        try:
            b = self.table.canonical(letter.curve)
        except CurveUndefined:
            return None
        braid = self.db.braid(current, b)
        if braid is None:
            return None
        wanted = Letter.twist(current, letter.exponent)
        fixes = []
        for j in range(index - 1, -1, -1):
            candidate = letters[j]
            if candidate.kind is LetterKind.TWIST and candidate.exponent == letter.exponent:
                try:
                    if self.table.canonical(candidate.curve) == current:
                        return j, braid, tuple(fixes)
                except CurveUndefined:
                    return None
            fixed = self.act_letter(candidate, current)
            if not fixed.known or fixed.image != current or fixed.sign != 1:
                return None
            fixes.extend(fixed.facts)
        logger.debug("No partner %s for braid move at %s", wanted, b)
        return None

    def act_word(self, word, x):
        """Fold the letters right to left; a failed letter may still be a braid move."""
        try:
            current = self.table.canonical(x)
        except CurveUndefined as exc:
            return Unknown(str(exc))
        letters = list(word.letters)
        sign = 1
        facts = []
        while letters:
            letter = letters[-1]
            result = self.act_letter(letter, current)
            if result.known:
                current = result.image
                sign *= result.sign
                facts.extend(result.facts)
                letters.pop()
                continue
            partner = self._braid_partner(letters, len(letters) - 1, current)
            if partner is None:
                return result
            j, braid, fixes = partner
            facts.append(braid)
            facts.extend(fixes)
            current = braid.second
            # the letters between the pair commute with A, so they act after AB
            letters = letters[:j] + letters[j + 1:-1]
        return Known(current, sign, tuple(facts))

    def _transport_transposition(self, word, position):
        g = self.genus
        if not 1 <= position <= g - 1:
            return Unknown(f"u{position} is not defined at g={g}"), ()
        pair = {position, position + 1}
        facts = []
        for letter in reversed(word.letters):
            if letter.kind is LetterKind.ROTATION:
                pair = {reduce_crosscap(c + letter.exponent, g) for c in pair}
            elif letter.kind is LetterKind.TRANSPOSITION:
                span = {letter.position, letter.position + 1}
                if pair == span or not pair & span:
                    continue
                if letter.exponent % 2 == 0:
                    return Unknown(f"{letter} moves only one of crosscaps {sorted(pair)}"), ()
                swap = {letter.position: letter.position + 1, letter.position + 1: letter.position}
                pair = {swap.get(c, c) for c in pair}
            else:
                low = _adjacent_position(pair)
                alpha = self._alpha(low) if low is not None else None
                if alpha is None:
                    return Unknown(f"a Klein bottle curve around crosscaps {sorted(pair)}"), ()
                try:
                    curve = self.table.canonical(letter.curve)
                except CurveUndefined as exc:
                    return Unknown(str(exc)), ()
                if curve == alpha:
                    continue
                fact = self.db.intersection(curve, alpha)
                if fact is None or fact.number != 0 or not self.table.resolve(curve).avoids(pair):
                    return Unknown(f"i({curve}, {alpha}) = 0 with {curve} avoiding crosscaps {sorted(pair)}"), ()
                facts.append(fact)
        low = _adjacent_position(pair)
        if low is None:
            return Unknown(f"crosscaps {sorted(pair)} are not adjacent after transport"), ()
        return low, tuple(facts)

    def rewrite_conjugation(self, w, x):
        """Rewrite w x w^-1 letter by letter into named-generator form."""
        letters = []
        facts = []
        transports = []
        for letter in x.letters:
            if letter.kind is LetterKind.TWIST:
                result = self.act_word(w, letter.curve)
                if not result.known:
                    return result
                image = Letter.twist(result.image, letter.exponent * result.sign)
                facts.extend(result.facts)
            elif letter.kind is LetterKind.TRANSPOSITION:
                position, used = self._transport_transposition(w, letter.position)
                if isinstance(position, Unknown):
                    return position
                image = Letter.transposition(position, letter.exponent)
                facts.extend(used)
            else:
                if not w.is_rotation():
                    return Unknown(f"conjugation of {letter} by a word that is not a power of T")
                image = letter
            letters.append(image)
            if letter.kind is not LetterKind.ROTATION:
                transports.append(Transport(w, letter, image))
        return Rewritten(Word(tuple(letters)), tuple(facts), tuple(transports))
