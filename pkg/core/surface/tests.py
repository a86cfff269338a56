from django.test import SimpleTestCase

from core.utils.bundled import table_path
from core.words.letters import Letter

from .curves import CurveId, Family, reduce_crosscap, resolve_curve, validate_genus
from .exceptions import CurveUndefined, RotationUnknown, TableSyntaxError
from .facts import FactDB, IntersectionFact, Provenance
from .rotation import rotate_curve
from .table import load_table, parse_table, template_facts
from .validation import RequiredAction, validate_table

A1, A2 = CurveId.parse("A1"), CurveId.parse("A2")
B1, B2, B4 = CurveId.parse("B1"), CurveId.parse("B2"), CurveId.parse("B4")
C1, C2 = CurveId.parse("C1"), CurveId.parse("C2")
GAMMA1, GAMMA2 = CurveId.parse("Gamma1"), CurveId.parse("Gamma2")

SMALL_TABLE = """\
version 1
[curves]
Gamma{k} : {k} {k+1} {k+2} {k+3}   @ k = 1..g
A2 = Gamma1
B1 : 2 3
[intersections]
A2 Gamma2 1 PAPER
[actions]
T Gamma{k} Gamma{k+1} +1 PAPER     @ k = 1..g
"""


def bundled(genus):
    return load_table(table_path(), genus)


class CurveTests(SimpleTestCase):
    def test_reduce_crosscap(self):
        self.assertEqual(reduce_crosscap(15, 14), 1)
        self.assertEqual(reduce_crosscap(0, 14), 14)

    def test_genus_validation(self):
        with self.assertRaises(ValueError):
            validate_genus(2)

    def test_parse_curve(self):
        self.assertEqual(CurveId.parse("Gamma12"), CurveId(Family.GAMMA, 12))
        with self.assertRaises(ValueError):
            CurveId.parse("D3")

    def test_gamma_indices_are_cyclic(self):
        table, _ = bundled(14)
        self.assertEqual(resolve_curve(CurveId.parse("Gamma16"), table).id, GAMMA2)
        self.assertEqual(table.canonical(CurveId.parse("Gamma15")), A2)

    def test_gamma_one_is_a2(self):
        table, _ = bundled(14)
        self.assertEqual(table.canonical(GAMMA1), A2)
        self.assertEqual(table.resolve(A2).traversal, frozenset({1, 2, 3, 4}))

    def test_undefined_curve(self):
        table, _ = bundled(14)
        with self.assertRaises(CurveUndefined) as ctx:
            table.resolve(CurveId.parse("B8"))
        self.assertIn("B8", str(ctx.exception))
        self.assertNotIn(CurveId.parse("B8"), table)

    def test_classes(self):
        table, _ = bundled(14)
        self.assertEqual(table.resolve(B4).h_class, tuple(1 if i in (8, 9) else 0 for i in range(1, 15)))
        self.assertFalse(any(table.resolve(CurveId.parse("Alpha13")).h_class))


class TableTests(SimpleTestCase):
    def test_small_table(self):
        table, db = parse_table(SMALL_TABLE, 6)
        self.assertEqual(len(table), 7)
        self.assertEqual(db.intersection(GAMMA2, A2).number, 1)
        self.assertEqual(table.digest, parse_table(SMALL_TABLE, 7)[0].digest)

    def test_missing_version(self):
        with self.assertRaises(TableSyntaxError) as ctx:
            parse_table("[curves]\nB1 : 2 3\n", 5)
        self.assertEqual(ctx.exception.line, 1)

    def test_unsupported_version(self):
        with self.assertRaises(TableSyntaxError):
            parse_table("version 2\n", 5)

    def test_conflicting_intersections(self):
        text = SMALL_TABLE + "[intersections]\nGamma2 A2 0 PAPER\n"
        with self.assertRaises(TableSyntaxError):
            parse_table(text, 6)

    def test_unknown_provenance(self):
        text = SMALL_TABLE.replace("A2 Gamma2 1 PAPER", "A2 Gamma2 1 FOLKLORE")
        with self.assertRaises(TableSyntaxError) as ctx:
            parse_table(text, 6)
        self.assertIn("FOLKLORE", str(ctx.exception))

    def test_bad_template(self):
        text = SMALL_TABLE.replace("{k+3}", "{k+}")
        with self.assertRaises(TableSyntaxError):
            parse_table(text, 6)

    def test_guards(self):
        _, db = bundled(12)
        self.assertIsNone(db.intersection(A2, GAMMA2))
        _, db = bundled(13)
        self.assertEqual(db.intersection(A2, GAMMA2).number, 1)

    def test_template_facts_keep_provenance(self):
        path = table_path()
        facts = template_facts(path.read_text(), str(path))
        axioms = [fact for fact in facts if fact.provenance is Provenance.FIGURE_AXIOM]
        self.assertEqual([fact.text for fact in axioms], ["T A1 B1 +1 FIGURE-AXIOM"])

    def test_only_one_figure_axiom_at_every_genus(self):
        for genus in (13, 14, 21):
            _, db = bundled(genus)
            self.assertEqual([str(fact) for fact in db.by_provenance(Provenance.FIGURE_AXIOM)],
                             ["T(A1) = B1 (+1) [FIGURE-AXIOM]"])


class RotationTests(SimpleTestCase):
    def test_gamma_chain(self):
        table, db = bundled(14)
        self.assertEqual(rotate_curve(A2, 3, table, db).image, CurveId.parse("Gamma4"))
        self.assertEqual(rotate_curve(CurveId.parse("Gamma14"), 1, table, db).image, A2)

    def test_inverse_rotation(self):
        table, db = bundled(14)
        result = rotate_curve(C2, -3, table, db)
        self.assertEqual(result.image, B1)
        self.assertEqual(len(result.facts), 3)
        self.assertEqual(rotate_curve(B1, 3, table, db).image, C2)

    def test_abc_chain(self):
        table, db = bundled(14)
        self.assertEqual(rotate_curve(A1, 1, table, db).image, B1)
        self.assertEqual(rotate_curve(B1, 1, table, db).image, C1)
        self.assertEqual(rotate_curve(C1, 1, table, db).image, B2)
        # the chain closes after g steps
        self.assertEqual(rotate_curve(A1, 14, table, db).image, A1)

    def test_full_turn_fixes_every_gamma(self):
        for genus in (13, 14, 17):
            table, db = bundled(genus)
            for k in range(1, genus + 1):
                gamma = table.canonical(CurveId(Family.GAMMA, k))
                with self.subTest(genus=genus, k=k):
                    result = rotate_curve(gamma, genus, table, db)
                    self.assertEqual((result.image, result.sign), (gamma, 1))

    def test_rotation_shifts_traversal(self):
        for genus in (13, 14, 17):
            table, db = bundled(genus)
            for record in table:
                step = db.rotation_step(record.id)
                if step is None:
                    continue
                shifted = {reduce_crosscap(crosscap + 1, genus) for crosscap in record.traversal}
                with self.subTest(genus=genus, curve=str(record.id)):
                    self.assertEqual(table.resolve(step.image).traversal, shifted)

    def test_missing_step(self):
        table, db = parse_table(SMALL_TABLE, 6)
        with self.assertRaises(RotationUnknown) as ctx:
            rotate_curve(B1, 1, table, db)
        self.assertIn("B1", str(ctx.exception))


class ValidationTests(SimpleTestCase):
    def test_bundled_table_is_consistent(self):
        for genus in (3, 4, 5, 12, 13, 14, 15, 20, 30):
            table, db = bundled(genus)
            self.assertEqual(validate_table(table, db), [], genus)

    def test_parity_violation(self):
        table, db = bundled(14)
        db = db.with_intersection(IntersectionFact(GAMMA2, A2, 0, Provenance.PAPER))
        violations = validate_table(table, db)
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].check, "parity")

    def test_symmetry_violation(self):
        table, _ = bundled(14)
        db = FactDB(intersections={(A2, GAMMA2): IntersectionFact(A2, GAMMA2, 1, Provenance.PAPER)})
        violations = validate_table(table, db)
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].check, "symmetry")

    def test_required_fact_missing(self):
        table, db = bundled(14)
        violations = validate_table(table, db, required=[(B1, B4, 1)])
        self.assertEqual([v.check for v in violations], ["required"])

    def test_required_action_missing(self):
        table, db = bundled(14)
        required = [RequiredAction(Letter.rotation(), A1, B1), RequiredAction(Letter.rotation(), B1, B2)]
        violations = validate_table(table, db, required)
        self.assertEqual([str(v) for v in violations],
                         ["[required] T(B1) = B2 (+1): action fact required by a bundled script is missing"])

    def test_action_homology(self):
        text = SMALL_TABLE + "[actions]\nT B1 Gamma2 +1 DERIVED-PATTERN\n"
        table, db = parse_table(text, 6)
        checks = [violation.check for violation in validate_table(table, db)]
        self.assertIn("action-homology", checks)

    def test_odd_traversal(self):
        table, db = parse_table(SMALL_TABLE + "[curves]\nC1 : 3 4 5\n", 6)
        checks = [violation.check for violation in validate_table(table, db)]
        self.assertIn("two-sided", checks)


class FactDBTests(SimpleTestCase):
    def test_without_drops_both_directions(self):
        _, db = bundled(14)
        fact = db.intersection(A2, GAMMA2)
        smaller = db.without(fact)
        self.assertIsNone(smaller.intersection(A2, GAMMA2))
        self.assertIsNone(smaller.intersection(GAMMA2, A2))
        self.assertEqual(len(smaller), len(db) - 1)

    def test_fact_strings(self):
        _, db = bundled(14)
        self.assertEqual(str(db.intersection(GAMMA2, A2).unordered()), "i(A2, Gamma2) = 1 [PAPER]")
