"""
Canonical word syntax: ``A2``, ``B4^-1``, ``u10``, ``T^3``, ``Gamma7``,
juxtaposed for products; ``1`` is the empty word.
"""
import re

from core.surface.curves import CurveId, Family

from .exceptions import WordSyntaxError
from .letters import Letter

_TOKEN = re.compile(
    r"(?:(?P<family>Gamma|Alpha|A|B|C)(?P<index>\d+)|u(?P<position>\d+)|(?P<rotation>T))"
    r"(?:\^(?P<exponent>[+-]?\d+))?"
)


def parse_letters(text):
    letters = []
    pos = 0
    stripped = text.strip()
    if stripped == "1":
        return letters
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if not match:
            raise WordSyntaxError(f"unexpected {text[pos]!r} in word {text!r}", column=pos + 1)
        exponent = int(match.group("exponent")) if match.group("exponent") else 1
        if exponent == 0:
            raise WordSyntaxError(f"zero exponent in word {text!r}", column=pos + 1)
        if match.group("family"):
            index = int(match.group("index"))
            if index < 1:
                raise WordSyntaxError(f"curve index must be >= 1 in {text!r}", column=pos + 1)
            letters.append(Letter.twist(CurveId(Family(match.group("family")), index), exponent))
        elif match.group("position"):
            position = int(match.group("position"))
            if position < 1:
                raise WordSyntaxError(f"transposition position must be >= 1 in {text!r}", column=pos + 1)
            letters.append(Letter.transposition(position, exponent))
        else:
            letters.append(Letter.rotation(exponent))
        pos = match.end()
    return letters


def parse_word(text):
    from .words import Word

    return Word(tuple(parse_letters(text)))


def parse_letter(text):
    letters = parse_letters(text)
    if len(letters) != 1:
        raise WordSyntaxError(f"expected a single letter, got {text!r}")
    return letters[0]


def format_word(word):
    return " ".join(str(letter) for letter in word.letters) or "1"
