"""Words over the generator alphabet: free reduction and the group operations."""
from dataclasses import dataclass

from .letters import Letter, LetterKind


def free_reduce(letters):
    """Merge adjacent same-target letters and drop zero exponents (stack pass)."""
    stack = []
    for letter in letters:
        if stack and stack[-1].target == letter.target:
            exponent = stack[-1].exponent + letter.exponent
            stack.pop()
            if exponent:
                stack.append(letter.with_exponent(exponent))
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def of(cls, *letters):
        return cls(tuple(letters))

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __str__(self):
        from .syntax import format_word

        return format_word(self)

    def is_rotation(self):
        return all(letter.kind is LetterKind.ROTATION for letter in self.letters)

    def rotation_power(self):
        return sum(letter.exponent for letter in self.letters if letter.kind is LetterKind.ROTATION)


IDENTITY = Word()


def multiply(w1, w2):
    return Word(w1.letters + w2.letters)


def invert(w):
    return Word(tuple(letter.inverse() for letter in reversed(w.letters)))


def power(w, n):
    result = IDENTITY
    for _ in range(abs(n)):
        result = result * w
    return invert(result) if n < 0 else result


def conjugate(w, x):
    """The formal conjugate w x w^-1, freely reduced."""
    return w * x * invert(w)


def commutator_form(u, v):
    """The sandwich (uv) u (uv)^-1 used throughout the generation proofs."""
    return conjugate(u * v, u)


def rotation(exponent=1):
    return Word.of(Letter.rotation(exponent))
