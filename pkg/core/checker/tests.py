import tempfile
from dataclasses import replace
from pathlib import Path

from django.contrib.auth.models import User
from django.test import SimpleTestCase, TestCase
from hypothesis import assume, given, settings, strategies as st
from rest_framework import status
from rest_framework.test import APIClient

from core.action.engine import ActionEngine
from core.surface.curves import CurveId
from core.surface.exceptions import TableInvariantError
from core.surface.table import load_table
from core.surface.validation import RequiredAction
from core.utils.bundled import bundled_scripts, table_path
from core.words.letters import Letter, LetterKind
from core.words.syntax import parse_word
from core.words.words import Word

from .checking import (
    EXIT_PASS,
    EXIT_REFUTED,
    EXIT_STEP_FAILURE,
    EXIT_STRICT_AXIOMS,
    OracleVerdict,
    Verdict,
    check_nonabelian,
    check_script,
    deletion_sweep,
    fingerprint,
    format_report,
)
from .exceptions import GenusAboveMaximum, GenusBelowMinimum, ScriptError, ScriptSyntaxError
from .models import VerificationRun
from .script import Justification, parse_script
from .serializers import ScriptReportSerializer
from .services import load_curves, parse_genera, read_script, record_run, required_facts, run_script

AXIOM = "T(A1) = B1 (+1) [FIGURE-AXIOM]"


def run_text(text, genus, strict_axioms=False):
    table, db = load_table(table_path(), genus)
    return check_script(parse_script(text, genus, source="<test>"), table, db, strict_axioms=strict_axioms)


def bundled_text(name):
    return read_script(name)[0]


class ScriptParserTests(SimpleTestCase):
    def test_bundled_scripts(self):
        self.assertEqual(bundled_scripts(), ["thm_main", "thm_main2"])

    def test_expansion(self):
        script = parse_script(bundled_text("thm_main"), 14)
        self.assertEqual(script.min_genus, 14)
        self.assertEqual([str(word) for word in script.generating_set], ["T", "u10 A2 C2^-1"])
        names = [step.name for step in script.steps]
        self.assertIn("D10", names)
        self.assertNotIn("D11", names)
        self.assertEqual(str(script.entries["D3"].claimed), "Gamma3 Gamma4^-1")
        self.assertIn(str(parse_word("u13")), [str(target) for target in script.targets])

    def test_step_flags(self):
        script = parse_script(bundled_text("thm_main"), 14)
        g45 = script.entries["G45"]
        self.assertEqual(str(g45.printed), "A2 Gamma2^-1")
        ga1 = script.entries["GA1"]
        self.assertIs(ga1.justification, Justification.AXIOM)
        self.assertEqual(ga1.reference, "T(A1) = B1")
        self.assertEqual(ga1.depends_on, {"GB"})
        self.assertEqual(script.entries["G4b"].depends_on, {"G4a"})

    def test_required_action(self):
        script = parse_script(bundled_text("thm_main"), 14)
        self.assertIn(RequiredAction(Letter.rotation(), CurveId.parse("A1"), CurveId.parse("B1"), 1), script.requires)
        text = "script s\nmin_genus 4\ngenerator T\nrequires T A1 B1 +2\n"
        with self.assertRaises(ScriptSyntaxError) as ctx:
            parse_script(text, 5)
        self.assertEqual(ctx.exception.line, 4)

    def test_below_minimum(self):
        with self.assertRaises(GenusBelowMinimum) as ctx:
            parse_script(bundled_text("thm_main"), 13)
        self.assertIn("min_genus violated", str(ctx.exception))

    def test_above_maximum(self):
        with self.assertRaises(GenusAboveMaximum) as ctx:
            parse_script(bundled_text("thm_main2"), 14)
        self.assertIn("max_genus violated", str(ctx.exception))

    def test_name_that_reads_as_a_word(self):
        text = "script s\nmin_genus 4\ngenerator T\nB12 := T * T => T^2 [free]\n"
        with self.assertRaises(ScriptSyntaxError) as ctx:
            parse_script(text, 5)
        self.assertEqual(ctx.exception.line, 4)

    def test_unknown_name(self):
        text = "script s\nmin_genus 4\ngenerator T\nX := inv(Y) => T [free]\n"
        with self.assertRaises(ScriptError):
            parse_script(text, 5)

    def test_axiom_needs_reference(self):
        text = "script s\nmin_genus 4\ngenerator T\nX := conj(T, T) => T [axiom]\n"
        with self.assertRaises(ScriptSyntaxError):
            parse_script(text, 5)

    def test_syntax_error_column(self):
        text = "script s\nmin_genus 4\ngenerator T\nX := conj(T, T)) => T [free]\n"
        with self.assertRaises(ScriptSyntaxError) as ctx:
            parse_script(text, 5)
        self.assertEqual(ctx.exception.line, 4)
        self.assertIsNotNone(ctx.exception.column)

    def test_missing_header(self):
        with self.assertRaises(ScriptSyntaxError):
            parse_script("generator T\n", 14)

    def test_unlicensed_literal(self):
        text = "script s\nmin_genus 14\ngenerator T\nG1 := A2\nX := G1 * B4 => A2 B4 [free]\n"
        with self.assertRaises(ScriptError):
            run_text(text, 14)


class MainScriptTests(SimpleTestCase):
    def test_passes_for_every_genus_from_14_to_30(self):
        for genus in range(14, 31):
            with self.subTest(genus=genus):
                report = run_script("thm_main", genus)
                self.assertTrue(report.passed, format_report(report))
                self.assertEqual(report.exit_code, EXIT_PASS)
                self.assertEqual(report.refutations, 0)
                self.assertTrue(report.nonabelian)

    def test_every_step_is_consistent_mod_2(self):
        report = run_script("thm_main", 14)
        self.assertEqual({step.oracle for step in report.steps}, {OracleVerdict.CONSISTENT})

    def test_targets(self):
        report = run_script("thm_main", 15)
        confirmed = {target.target: target.via for target in report.targets}
        self.assertEqual(confirmed, {"T": "T", "A1 A2^-1": "GAA", "B1 B2^-1": "GB", "u14": "Ug1"})

    def test_axiom_is_surfaced(self):
        report = run_script("thm_main", 14)
        self.assertEqual(report.axioms, [AXIOM])
        self.assertIs(report.step("GA1").verdict, Verdict.USES_AXIOM)
        self.assertIs(report.step("GC1").verdict, Verdict.VERIFIED)
        self.assertIn("FIGURE-AXIOM facts consumed", format_report(report))

    def test_strict_axioms(self):
        report = run_script("thm_main", 14, strict_axioms=True)
        self.assertTrue(report.passed)
        self.assertEqual(report.exit_code, EXIT_STRICT_AXIOMS)
        self.assertEqual(report.axioms, [AXIOM])

    def test_printed_discrepancy(self):
        report = run_script("thm_main", 14)
        self.assertEqual([step.step for step in report.discrepancies], ["G45"])
        g45 = report.step("G45")
        self.assertEqual(g45.claimed, "Gamma2 A2^-1")
        self.assertEqual(g45.printed, "A2 Gamma2^-1")
        self.assertTrue(g45.passed)

    def test_fingerprint_does_not_depend_on_genus(self):
        self.assertEqual(fingerprint(run_script("thm_main", 14)), fingerprint(run_script("thm_main", 20)))

    def test_every_consumed_fact_is_necessary(self):
        script = parse_script(bundled_text("thm_main"), 14)
        table, db = load_table(table_path(), 14)
        baseline, entries = deletion_sweep(script, table, db)
        self.assertTrue(baseline.passed)
        self.assertTrue(entries)
        self.assertEqual([entry.fact for entry in entries if not entry.necessary], [])
        axiom = next(entry for entry in entries if entry.fact == AXIOM)
        self.assertEqual(axiom.failing_steps, ["GA1"])

    def test_structured_report(self):
        data = ScriptReportSerializer(run_script("thm_main", 14)).data
        self.assertEqual(data["exit_code"], 0)
        self.assertEqual(data["axioms"], [AXIOM])
        self.assertEqual(data["discrepancies"],
                         [{"step": "G45", "printed": "A2 Gamma2^-1", "derived": "Gamma2 A2^-1"}])
        step = next(step for step in data["steps"] if step["step"] == "G2")
        self.assertEqual(step["verdict"], "Verified")
        self.assertEqual(step["oracle"], "ConsistentMod2")


class ThirteenScriptTests(SimpleTestCase):
    def test_passes_at_13(self):
        report = run_script("thm_main2", 13)
        self.assertTrue(report.passed, format_report(report))
        self.assertEqual(report.axioms, [AXIOM])

    def test_reconstructions_are_reported(self):
        report = run_script("thm_main2", 13)
        self.assertEqual(report.reconstructions, ["H9", "H89", "HB", "HA1", "HC1", "HA", "HAA"])
        self.assertIn("(reconstruction)", format_report(report))

    def test_u_targets(self):
        report = run_script("thm_main2", 13)
        target = next(target for target in report.targets if target.target == "u12")
        self.assertEqual(target.via, "U12")


class MutationTests(SimpleTestCase):
    def test_wrong_curve_is_refuted(self):
        text = bundled_text("thm_main").replace(
            "=> u{g-1} A2 B4^-1 [conjugation]", "=> u{g-1} Gamma2 B4^-1 [conjugation]")
        report = run_text(text, 14)
        g3 = report.step("G3")
        self.assertIs(g3.verdict, Verdict.FAILED)
        self.assertIs(g3.oracle, OracleVerdict.REFUTED)
        self.assertIsNotNone(g3.witness)
        self.assertEqual(report.exit_code, EXIT_REFUTED)

    def test_undefined_curve_fails_without_oracle(self):
        text = bundled_text("thm_main").replace(
            "=> u{g-1} A2 B4^-1 [conjugation]", "=> u{g-1} A2 B40^-1 [conjugation]")
        report = run_text(text, 14)
        g3 = report.step("G3")
        self.assertIs(g3.verdict, Verdict.FAILED)
        self.assertIs(g3.oracle, OracleVerdict.NOT_EVALUATED)
        self.assertIn("B40", g3.reason)
        self.assertEqual(report.exit_code, EXIT_STEP_FAILURE)

    def test_rotation_step_rejects_other_conjugators(self):
        text = bundled_text("thm_main").replace(
            "G7 := sandwich(G6, G1) => A2 C2^-1 [conjugation]",
            "G7 := sandwich(G6, G1) => A2 C2^-1 [rotation]")
        report = run_text(text, 14)
        self.assertIs(report.step("G7").verdict, Verdict.FAILED)
        self.assertIn("[conjugation]", report.step("G7").reason)

    def test_broken_telescope(self):
        text = bundled_text("thm_main").replace("telescope(G45inv, D2, D3, D4, D5)",
                                                "telescope(G45inv, D3, D2, D4, D5)")
        report = run_text(text, 14)
        self.assertIs(report.step("G6").verdict, Verdict.FAILED)
        self.assertIn("do not cancel", report.step("G6").reason)

    def test_missing_fact_is_named(self):
        table, db = load_table(table_path(), 14)
        a2, gamma2 = CurveId.parse("A2"), CurveId.parse("Gamma2")
        script = parse_script(bundled_text("thm_main"), 14)
        report = check_script(script, table, db.without(db.intersection(a2, gamma2)))
        self.assertFalse(report.passed)
        self.assertIn("missing fact", report.step("G5").reason)
        self.assertIn("A1 A2^-1", report.unconfirmed_targets)

    def test_target_up_to_rotation(self):
        text = bundled_text("thm_main") + "target u{g-2}\n"
        report = run_text(text, 14)
        target = next(target for target in report.targets if target.target == "u12")
        self.assertTrue(target.confirmed)
        self.assertEqual((target.via, target.how), ("U", "conjugation by T^2"))


def mutate(word):
    """Change the first non-rotation letter of a claim to its index neighbour."""
    letters = list(word.letters)
    index = next(i for i, letter in enumerate(letters) if letter.kind is not LetterKind.ROTATION)
    letter = letters[index]
    if letter.kind is LetterKind.TWIST:
        curve = CurveId(letter.curve.family, letter.curve.index + 1)
        letters[index] = Letter.twist(curve, letter.exponent)
    else:
        letters[index] = Letter.transposition(letter.position + 1, letter.exponent)
    return Word(tuple(letters))


SWEEP_GENUS = 14
SWEEP_TABLE, SWEEP_DB = load_table(table_path(), SWEEP_GENUS)
SWEEP_ENGINE = ActionEngine(SWEEP_TABLE, SWEEP_DB)
sweep_letters = st.one_of(
    st.builds(Letter.twist, st.sampled_from([record.id for record in SWEEP_TABLE]), st.sampled_from([1, -1])),
    st.builds(Letter.transposition, st.integers(1, SWEEP_GENUS - 1), st.sampled_from([1, -1])),
    st.builds(Letter.rotation, st.sampled_from([1, -1])),
)


class MutationSweepTests(SimpleTestCase):
    def test_every_single_letter_mutation_is_caught(self):
        script = parse_script(bundled_text("thm_main"), 14)
        table, db = load_table(table_path(), 14)
        for position, step in enumerate(script.steps):
            steps = list(script.steps)
            steps[position] = replace(step, claimed=mutate(step.claimed))
            with self.subTest(step=step.name):
                report = check_script(replace(script, steps=tuple(steps)), table, db)
                self.assertFalse(report.step(step.name).passed)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_random_single_letter_mutations_are_caught(self, data):
        script = parse_script(bundled_text("thm_main"), SWEEP_GENUS)
        position = data.draw(st.integers(0, len(script.steps) - 1))
        step = script.steps[position]
        letters = list(step.claimed.letters)
        letters[data.draw(st.integers(0, len(letters) - 1))] = data.draw(sweep_letters)
        mutated = Word(tuple(letters))
        assume(SWEEP_ENGINE.canonical_word(mutated) != SWEEP_ENGINE.canonical_word(step.claimed))
        steps = list(script.steps)
        steps[position] = replace(step, claimed=mutated)
        report = check_script(replace(script, steps=tuple(steps)), SWEEP_TABLE, SWEEP_DB)
        self.assertFalse(report.step(step.name).passed, f"{step.name}: {mutated}")

    def test_a2_to_gamma2_is_always_refuted(self):
        script = parse_script(bundled_text("thm_main"), 14)
        table, db = load_table(table_path(), 14)
        a2, gamma2 = CurveId.parse("A2"), CurveId.parse("Gamma2")
        for position, step in enumerate(script.steps):
            claimed = step.claimed
            if Letter.twist(a2) not in claimed.letters or Letter.twist(gamma2) in claimed.letters:
                continue
            swapped = Word(tuple(Letter.twist(gamma2, letter.exponent) if letter.curve == a2 else letter
                                 for letter in claimed.letters))
            steps = list(script.steps)
            steps[position] = replace(step, claimed=swapped)
            with self.subTest(step=step.name):
                report = check_script(replace(script, steps=tuple(steps)), table, db)
                self.assertIs(report.step(step.name).oracle, OracleVerdict.REFUTED)


class NonabelianTests(SimpleTestCase):
    def test_generators_do_not_commute(self):
        table, _ = load_table(table_path(), 14)
        self.assertTrue(check_nonabelian(parse_word("T"), parse_word("u10 A2 C2^-1"), table))
        self.assertFalse(check_nonabelian(parse_word("A2"), parse_word("B4"), table))


class ServiceTests(SimpleTestCase):
    def test_parse_genera(self):
        self.assertEqual(parse_genera(["14", "16..18", "20,21"]), [14, 16, 17, 18, 20, 21])
        with self.assertRaises(ValueError):
            parse_genera(["18..14"])
        with self.assertRaises(ValueError):
            parse_genera(["x"])

    def test_required_facts(self):
        self.assertEqual(required_facts(12), [])
        required = required_facts(14)
        self.assertIn((CurveId.parse("A2"), CurveId.parse("Gamma2"), 1), required)
        self.assertIn(RequiredAction(Letter.rotation(), CurveId.parse("A1"), CurveId.parse("B1")), required)
        self.assertEqual(len(required), 5)

    def test_inconsistent_table_is_refused(self):
        text = table_path().read_text().replace("[intersections]\n", "[intersections]\nB1 Gamma8 1 DERIVED-PATTERN\n", 1)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.tbl"
            path.write_text(text)
            with self.assertRaises(TableInvariantError) as ctx:
                load_curves(14, str(path))
            self.assertEqual([violation.check for violation in ctx.exception.violations], ["parity"])
            with self.assertRaises(TableInvariantError):
                run_script("thm_main", 14, table=str(path))


class RecordRunTests(TestCase):
    def test_record_run(self):
        run = record_run(run_script("thm_main", 14, strict_axioms=True))
        self.assertEqual(run.exit_code, EXIT_STRICT_AXIOMS)
        self.assertEqual(run.verdict, "axioms")
        self.assertEqual(run.report["script"], "thm_main")
        self.assertIsNone(run.requested_by)


class VerificationRunAPITests(TestCase):
    def setUp(self):
        self.client = APIClient()
        self.user = User.objects.create_user(username="checker", password="s3cret-pass")

    def test_anonymous_cannot_create(self):
        response = self.client.post("/api/runs/", {"script": "thm_main", "genus": 14}, format="json")
        self.assertEqual(response.status_code, status.HTTP_401_UNAUTHORIZED)

    def test_create_and_list(self):
        self.client.force_authenticate(self.user)
        response = self.client.post("/api/runs/", {"script": "thm_main", "genus": 14}, format="json")
        self.assertEqual(response.status_code, status.HTTP_201_CREATED, response.data)
        self.assertTrue(response.data["passed"])
        self.assertEqual(response.data["verdict"], "axioms")
        self.assertEqual(response.data["requested_by"], self.user.pk)
        self.client.force_authenticate(None)
        listing = self.client.get("/api/runs/", {"script": "thm_main"})
        self.assertEqual(listing.status_code, status.HTTP_200_OK)
        self.assertEqual(len(listing.data), 1)

    def test_genus_out_of_range(self):
        self.client.force_authenticate(self.user)
        response = self.client.post("/api/runs/", {"script": "thm_main", "genus": 13}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("min_genus", str(response.data))
        self.assertFalse(VerificationRun.objects.exists())

    def test_unknown_script(self):
        self.client.force_authenticate(self.user)
        response = self.client.post("/api/runs/", {"script": "nope", "genus": 14}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("script", response.data)


class QueryAPITests(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_index(self):
        response = self.client.get("/")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["scripts"], ["thm_main", "thm_main2"])

    def test_facts(self):
        response = self.client.get("/api/facts/", {"genus": 14, "provenance": "FIGURE-AXIOM"})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([item["fact"] for item in response.data], [AXIOM])

    def test_template_facts(self):
        response = self.client.get("/api/facts/", {"provenance": "PAPER"})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(all(item["provenance"] == "PAPER" for item in response.data))
        self.assertIn("A2 Gamma2 1 PAPER", [item["fact"].split("?")[0].strip() for item in response.data])

    def test_matrix(self):
        response = self.client.get("/api/matrix/", {"word": "T", "genus": 4})
        self.assertEqual(response.data["rows"], ["0001", "1000", "0100", "0010"])

    def test_act(self):
        response = self.client.get("/api/act/", {"word": "T^3", "curve": "A2", "genus": 14})
        self.assertEqual(response.data["image"], "Gamma4")
        self.assertEqual(response.data["sign"], 1)

    def test_act_unknown(self):
        response = self.client.get("/api/act/", {"word": "B4", "curve": "Gamma10", "genus": 14})
        self.assertFalse(response.data["known"])
        self.assertIn("Gamma10", response.data["missing_fact"])

    def test_bad_word(self):
        response = self.client.get("/api/matrix/", {"word": "X1", "genus": 14})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
