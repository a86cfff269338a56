from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.surface.curves import CurveId
from core.surface.facts import ActionFact, Provenance
from core.surface.table import load_table
from core.utils.bundled import table_path
from core.words.letters import Letter
from core.words.syntax import parse_word
from core.words.words import Word, multiply

from .engine import ActionEngine, Known, Unknown, derive_braid_fact, derive_braid_facts
from .exceptions import BraidPreconditionError

A2, B1, B4 = (CurveId.parse(name) for name in ("A2", "B1", "B4"))
C2, GAMMA2, GAMMA4 = (CurveId.parse(name) for name in ("C2", "Gamma2", "Gamma4"))


def engine_at(genus):
    table, db = load_table(table_path(), genus)
    return ActionEngine(table, derive_braid_facts(db))


class ActLetterTests(SimpleTestCase):
    def setUp(self):
        self.engine = engine_at(14)

    def test_rotation(self):
        result = self.engine.act_word(parse_word("T^3"), A2)
        self.assertEqual(result, Known(GAMMA4, 1, result.facts))
        self.assertEqual(str(result), "Gamma4 (+1)")
        self.assertEqual(len(result.facts), 3)

    def test_twist_fixes_its_curve(self):
        self.assertEqual(self.engine.act_letter(Letter.twist(A2), A2).image, A2)

    def test_disjoint_twist(self):
        result = self.engine.act_letter(Letter.twist(C2, -1), B4)
        self.assertTrue(result.known)
        self.assertEqual(result.image, B4)
        self.assertEqual(str(result.facts[0]), "i(C2, B4) = 0 [DERIVED-PATTERN]")

    def test_transposition_fixes_distant_curve(self):
        result = self.engine.act_letter(Letter.transposition(13), GAMMA4)
        self.assertEqual(result.image, GAMMA4)

    def test_transposition_needs_fact(self):
        result = self.engine.act_letter(Letter.transposition(5), B1)
        self.assertIsInstance(result, Unknown)
        self.assertIn("Alpha5", result.missing_fact)

    def test_undefined_curve_is_unknown(self):
        result = self.engine.act_word(parse_word("T"), CurveId.parse("B9"))
        self.assertFalse(result.known)
        self.assertIn("B9", result.missing_fact)

    def test_missing_intersection_is_named(self):
        result = self.engine.act_letter(Letter.twist(B4), CurveId.parse("Gamma10"))
        self.assertFalse(result.known)
        self.assertIn("i(B4, Gamma10)", result.missing_fact)

    def test_explicit_action_fact(self):
        gamma10 = CurveId.parse("Gamma10")
        fact = ActionFact(Letter.twist(B4), gamma10, gamma10, 1, Provenance.DERIVED_PATTERN)
        engine = ActionEngine(self.engine.table, self.engine.db.with_action(fact))
        self.assertEqual(engine.act_letter(Letter.twist(B4), gamma10), Known(gamma10, 1, (fact,)))


class BraidTests(SimpleTestCase):
    def setUp(self):
        self.engine = engine_at(14)

    def test_braid_move(self):
        # AB(a) = b with B acting first
        result = self.engine.act_word(parse_word("A2 Gamma2"), A2)
        self.assertEqual(result.image, GAMMA2)
        self.assertEqual(self.engine.act_word(parse_word("Gamma2 A2"), GAMMA2).image, A2)

    def test_inverse_braid_move(self):
        result = self.engine.act_word(parse_word("A2^-1 Gamma2^-1"), A2)
        self.assertEqual(result.image, GAMMA2)

    def test_braid_with_commuting_letters_between(self):
        # Gamma8 and u13 fix both A2 and Gamma2, so they can sit between the pair
        result = self.engine.act_word(parse_word("A2 Gamma8 u13 Gamma2"), A2)
        self.assertTrue(result.known)
        self.assertEqual(result.image, GAMMA2)

    def test_wrong_order_is_unknown(self):
        self.assertFalse(self.engine.act_word(parse_word("Gamma2 A2"), A2).known)

    def test_precondition(self):
        table, db = self.engine.table, self.engine.db
        with self.assertRaises(BraidPreconditionError) as ctx:
            derive_braid_fact(A2, C2, db, table)
        self.assertIn("i(a,b)=1", str(ctx.exception))
        with self.assertRaises(BraidPreconditionError):
            derive_braid_fact(A2, A2, db, table)

    def test_braid_between_gammas(self):
        gamma5 = CurveId.parse("Gamma5")
        table, db = load_table(table_path(), 14)
        derived = derive_braid_fact(gamma5, GAMMA2, db, table)
        self.assertEqual(derived.braid(gamma5, GAMMA2).origin.number, 1)
        self.assertEqual(self.engine.act_word(parse_word("Gamma5 Gamma2"), gamma5).image, GAMMA2)

    def test_derived_braid_is_idempotent(self):
        db = self.engine.db
        self.assertIs(derive_braid_fact(A2, GAMMA2, db), db)


class ConjugationTests(SimpleTestCase):
    def test_rotation_conjugate(self):
        engine = engine_at(14)
        result = engine.rewrite_conjugation(parse_word("T^3"), parse_word("u10 A2 C2^-1"))
        self.assertEqual(result.word, parse_word("u13 Gamma4 B4^-1"))
        self.assertEqual(len(result.transports), 3)

    def test_transposition_transport_through_twists(self):
        engine = engine_at(14)
        conjugator = parse_word("u13 Gamma4 B4^-1 u10 A2 C2^-1")
        result = engine.rewrite_conjugation(conjugator, parse_word("u13 Gamma4 B4^-1"))
        self.assertEqual(result.word, parse_word("u13 A2 B4^-1"))

    def test_rotation_past_the_end(self):
        engine = engine_at(13)
        result = engine.rewrite_conjugation(parse_word("T^-3"), parse_word("A2 Gamma4^-1"))
        self.assertEqual(result.word, parse_word("Gamma11 A2^-1"))

    def test_unknown_is_reported(self):
        engine = engine_at(14)
        result = engine.rewrite_conjugation(parse_word("B4"), parse_word("Gamma10"))
        self.assertIsInstance(result, Unknown)

    def test_disjoint_twists_commute(self):
        table, db = load_table(table_path(), 14)
        engine = ActionEngine(table, derive_braid_facts(db))
        for fact in db.intersections.values():
            if fact.number:
                continue
            for exponent in (1, -1):
                x = Word.of(Letter.twist(fact.second, exponent))
                with self.subTest(fact=str(fact), exponent=exponent):
                    result = engine.rewrite_conjugation(Word.of(Letter.twist(fact.first, exponent)), x)
                    self.assertEqual(result.word, x)


ENGINE = engine_at(14)
CURVES = [A2, B1, B4, C2, GAMMA2, GAMMA4, CurveId.parse("A1"), CurveId.parse("Gamma8")]
act_letters = st.one_of(
    st.builds(Letter.twist, st.sampled_from(CURVES), st.sampled_from([1, -1])),
    st.builds(Letter.transposition, st.sampled_from([10, 13])),
    st.builds(Letter.rotation, st.sampled_from([1, -1, 2, -3])),
)
act_words = st.lists(act_letters, max_size=5).map(lambda items: Word(tuple(items)))


class CompositionTests(SimpleTestCase):
    @settings(max_examples=500, deadline=None)
    @given(act_words, act_words, st.sampled_from(CURVES))
    def test_action_of_a_product(self, w1, w2, x):
        inner = ENGINE.act_word(w2, x)
        if not inner.known:
            return
        outer = ENGINE.act_word(w1, inner.image)
        whole = ENGINE.act_word(multiply(w1, w2), x)
        if outer.known and whole.known:
            self.assertEqual((whole.image, whole.sign), (outer.image, outer.sign * inner.sign))

    def test_empty_word_fixes_everything(self):
        for curve in CURVES:
            self.assertEqual(ENGINE.act_word(Word(), curve), Known(curve, 1, ()))
