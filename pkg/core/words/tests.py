from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.surface.curves import CurveId, Family

from .exceptions import WordSyntaxError
from .letters import Letter, LetterKind
from .syntax import format_word, parse_letter, parse_word
from .words import IDENTITY, Word, commutator_form, conjugate, free_reduce, invert, multiply, power

exponents = st.integers(min_value=-3, max_value=3).filter(bool)
curves = st.builds(CurveId, st.sampled_from([Family.A, Family.B, Family.C, Family.GAMMA]),
                   st.integers(min_value=1, max_value=6))
letters = st.one_of(
    st.builds(Letter.twist, curves, exponents),
    st.builds(Letter.transposition, st.integers(min_value=1, max_value=6), exponents),
    st.builds(Letter.rotation, exponents),
)
words = st.lists(letters, max_size=8).map(lambda items: Word(tuple(items)))


def is_reduced(letters):
    return all(a.target != b.target for a, b in zip(letters, letters[1:])) and all(
        letter.exponent for letter in letters)


def reduce_in_random_order(letters, rng):
    """Merge one randomly chosen adjacent pair with a common target at a time."""
    letters = list(letters)
    while True:
        spots = [i for i in range(len(letters) - 1) if letters[i].target == letters[i + 1].target]
        if not spots:
            return tuple(letters)
        i = rng.choice(spots)
        exponent = letters[i].exponent + letters[i + 1].exponent
        letters[i:i + 2] = [letters[i].with_exponent(exponent)] if exponent else []


class SyntaxTests(SimpleTestCase):
    def test_parse_letters_and_exponents(self):
        word = parse_word("u10 A2 C2^-1 T^3")
        self.assertEqual([letter.kind for letter in word], [
            LetterKind.TRANSPOSITION, LetterKind.TWIST, LetterKind.TWIST, LetterKind.ROTATION])
        self.assertEqual(word.letters[0].position, 10)
        self.assertEqual(word.letters[2].exponent, -1)
        self.assertEqual(word.letters[3].exponent, 3)

    def test_juxtaposed_letters(self):
        self.assertEqual(parse_word("A2Gamma4^-1"), parse_word("A2 Gamma4^-1"))

    def test_format_round_trip(self):
        text = "u10 Gamma4 B4^-1"
        self.assertEqual(format_word(parse_word(text)), text)

    def test_empty_word(self):
        self.assertEqual(parse_word("1"), IDENTITY)
        self.assertEqual(str(IDENTITY), "1")

    def test_syntax_error_has_column(self):
        with self.assertRaises(WordSyntaxError) as ctx:
            parse_word("A2 X3")
        self.assertEqual(ctx.exception.column, 4)

    def test_zero_exponent_rejected(self):
        with self.assertRaises(WordSyntaxError):
            parse_word("A2^0")

    def test_parse_letter_needs_one_letter(self):
        self.assertEqual(parse_letter("T"), Letter.rotation())
        with self.assertRaises(WordSyntaxError):
            parse_letter("T A1")


class FreeReductionTests(SimpleTestCase):
    def test_cancellation(self):
        self.assertEqual(parse_word("A2 B4 B4^-1 A2^-1"), IDENTITY)

    def test_merging(self):
        self.assertEqual(str(parse_word("T T^2")), "T^3")
        self.assertEqual(str(parse_word("u3 u3")), "u3^2")

    def test_distinct_targets_are_kept(self):
        self.assertEqual(len(parse_word("A2 Gamma2 A2")), 3)

    def test_conjugate_and_sandwich(self):
        g1 = parse_word("u10 A2 C2^-1")
        self.assertEqual(conjugate(parse_word("T^3"), g1), parse_word("T^3 u10 A2 C2^-1 T^-3"))
        u, v = parse_word("A2"), parse_word("B4")
        self.assertEqual(commutator_form(u, v), parse_word("A2 B4 A2 B4^-1 A2^-1"))

    def test_power(self):
        self.assertEqual(power(parse_word("A2 B1"), 2), parse_word("A2 B1 A2 B1"))
        self.assertEqual(power(parse_word("A2 B1"), -1), parse_word("B1^-1 A2^-1"))
        self.assertEqual(power(parse_word("A2"), 0), IDENTITY)

    @given(st.lists(letters, max_size=12))
    def test_reduction_is_reduced_and_idempotent(self, items):
        reduced = free_reduce(items)
        self.assertTrue(is_reduced(reduced))
        self.assertEqual(free_reduce(reduced), reduced)

    @settings(max_examples=300)
    @given(st.lists(letters, max_size=16), st.randoms(use_true_random=False))
    def test_reduction_order_does_not_matter(self, items, rng):
        self.assertEqual(reduce_in_random_order(items, rng), free_reduce(items))

    @given(words, words, words)
    def test_associativity(self, a, b, c):
        self.assertEqual(multiply(multiply(a, b), c), multiply(a, multiply(b, c)))

    @given(words)
    def test_inverse(self, w):
        self.assertEqual(invert(invert(w)), w)
        self.assertEqual(w * ~w, IDENTITY)
        self.assertEqual(~w * w, IDENTITY)

    @given(words)
    def test_identity(self, w):
        self.assertEqual(w * IDENTITY, w)
        self.assertEqual(IDENTITY * w, w)

    def test_rotation_power(self):
        word = parse_word("T^3 T^-1")
        self.assertTrue(word.is_rotation())
        self.assertEqual(word.rotation_power(), 2)
        self.assertFalse(parse_word("T A2").is_rotation())
