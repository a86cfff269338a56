import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.surface.curves import CurveId
from core.surface.table import load_table
from core.utils.bundled import table_path
from core.words.letters import Letter
from core.words.syntax import parse_word
from core.words.words import Word, invert, multiply

from . import f2
from .exceptions import HomologyError

GENUS = 14
TABLES = {genus: load_table(table_path(), genus)[0] for genus in (13, 14)}
TABLE = TABLES[GENUS]


def letters(table):
    exponents = st.integers(-2, 2).filter(bool)
    return st.one_of(
        st.builds(Letter.twist, st.sampled_from([record.id for record in table]), exponents),
        st.builds(Letter.transposition, st.integers(1, table.genus - 1), exponents),
        st.builds(Letter.rotation, st.integers(-3, 3).filter(bool)),
    )


def words(table):
    return st.lists(letters(table), max_size=20).map(lambda items: Word(tuple(items)))


@st.composite
def word_pairs(draw):
    table = TABLES[draw(st.sampled_from(sorted(TABLES)))]
    return table, draw(words(table)), draw(words(table))


class MatrixTests(SimpleTestCase):
    def test_rotation_dump(self):
        table, _ = load_table(table_path(), 4)
        self.assertEqual(f2.dump_matrix(f2.word_matrix(parse_word("T"), table)), "0001\n1000\n0100\n0010")

    def test_parse_matrix(self):
        matrix = f2.parse_matrix("01\n10\n")
        self.assertTrue(np.array_equal(matrix, f2.transposition_matrix(1, 2)))
        with self.assertRaises(HomologyError):
            f2.parse_matrix("011\n10\n")

    def test_transposition_out_of_range(self):
        with self.assertRaises(HomologyError):
            f2.word_matrix(parse_word("u14"), TABLE)

    def test_alpha_twist_is_trivial(self):
        matrix = f2.word_matrix(parse_word("Alpha3"), TABLE)
        self.assertTrue(np.array_equal(matrix, f2.identity(GENUS)))

    def test_even_twist_is_trivial(self):
        matrix = f2.word_matrix(parse_word("A2^2"), TABLE)
        self.assertTrue(np.array_equal(matrix, f2.identity(GENUS)))

    def test_inverse(self):
        matrix = f2.word_matrix(parse_word("u10 A2 C2^-1 T"), TABLE)
        self.assertTrue(np.array_equal(f2.mat_mul(matrix, f2.gf2_inverse(matrix)), f2.identity(GENUS)))

    def test_singular(self):
        with self.assertRaises(HomologyError):
            f2.gf2_inverse(np.ones((3, 3), dtype=np.uint8))

    def test_pairing_shape(self):
        with self.assertRaises(HomologyError):
            f2.pairing([1, 0], [1, 0, 1])


class RelationTests(SimpleTestCase):
    def test_rotation_conjugates_transpositions(self):
        for i in range(1, GENUS - 1):
            lhs = parse_word(f"T u{i} T^-1")
            self.assertIsInstance(f2.oracle_check(lhs, parse_word(f"u{i + 1}"), TABLE), f2.ConsistentMod2)

    def test_rotation_order(self):
        self.assertTrue(np.array_equal(f2.rotation_matrix(GENUS, GENUS), f2.identity(GENUS)))
        self.assertTrue(f2.oracle_check(parse_word(f"T^{GENUS}"), Word(), TABLE).consistent)

    def test_rotation_conjugates_twists(self):
        lhs = parse_word("T^3 A2 T^-3")
        self.assertTrue(f2.oracle_check(lhs, parse_word("Gamma4"), TABLE).consistent)

    def test_refutation_witness(self):
        verdict = f2.oracle_check(parse_word("A2"), parse_word("Gamma2"), TABLE)
        self.assertFalse(verdict.consistent)
        # A2 and Gamma2 first differ on e1
        self.assertEqual(verdict.witness, 1)
        self.assertEqual(str(verdict), "RefutedMod2(e1)")

    def test_action_consistent(self):
        b1, c1 = CurveId.parse("B1"), CurveId.parse("C1")
        self.assertTrue(f2.action_consistent(parse_word("T"), b1, c1, TABLE))
        self.assertFalse(f2.action_consistent(parse_word("T^2"), b1, c1, TABLE))

    def test_noncommuting_generators(self):
        self.assertFalse(f2.commutes(f2.word_matrix(parse_word("T"), TABLE),
                                     f2.word_matrix(parse_word("u10 A2 C2^-1"), TABLE)))

    def test_rotation_relations_across_genera(self):
        for genus in range(13, 21):
            table, _ = load_table(table_path(), genus)
            with self.subTest(genus=genus):
                for i in range(1, genus - 1):
                    self.assertTrue(f2.oracle_check(parse_word(f"T u{i} T^-1"), parse_word(f"u{i + 1}"),
                                                    table).consistent)
                self.assertTrue(f2.oracle_check(parse_word(f"T^{genus}"), Word(), table).consistent)

    def test_every_generator_is_an_isometry(self):
        for genus in range(3, 21):
            table, _ = load_table(table_path(), genus)
            generators = [Letter.rotation()] + [Letter.transposition(j) for j in range(1, genus)]
            generators += [Letter.twist(record.id) for record in table]
            with self.subTest(genus=genus):
                for letter in generators:
                    self.assertTrue(f2.is_isometry(f2.generator_matrix(letter, table)), str(letter))


class PropertyTests(SimpleTestCase):
    @settings(max_examples=1000, deadline=None)
    @given(word_pairs())
    def test_homomorphism(self, pair):
        table, w1, w2 = pair
        product = f2.word_matrix(multiply(w1, w2), table)
        self.assertTrue(np.array_equal(product, f2.mat_mul(f2.word_matrix(w1, table), f2.word_matrix(w2, table))))

    @settings(max_examples=100, deadline=None)
    @given(words(TABLE))
    def test_inverse_word(self, w):
        self.assertTrue(np.array_equal(f2.word_matrix(invert(w), TABLE), f2.gf2_inverse(f2.word_matrix(w, TABLE))))

    @settings(max_examples=100, deadline=None)
    @given(words(TABLE))
    def test_isometry(self, w):
        self.assertTrue(f2.is_isometry(f2.word_matrix(w, TABLE)))
