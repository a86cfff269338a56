import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from core.checker.models import VerificationRun
from core.checker.services import read_script
from core.utils.bundled import table_path

AXIOM = "T(A1) = B1 (+1) [FIGURE-AXIOM]"


class CommandTestCase(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()

    def fails_with(self, code, *args):
        with self.assertRaises(CommandError) as ctx:
            self.call(*args)
        self.assertEqual(ctx.exception.returncode, code, str(ctx.exception))
        return ctx.exception

    def write(self, name, text):
        path = Path(self.tmp.name) / name
        path.write_text(text)
        return str(path)


class VerifyCommandTests(CommandTestCase):
    def test_pass(self):
        output = self.call("verify", "thm_main", "--genus", "14")
        self.assertIn("target u13: confirmed by Ug1", output)
        self.assertTrue(output.rstrip().endswith("PASS: 0 failure(s), 0 refutation(s)"))

    def test_structured_range(self):
        output = self.call("verify", "--script", "thm_main", "--genus", "14..15", "--format", "structured")
        document = json.loads(output)
        self.assertEqual(document["exit_code"], 0)
        self.assertEqual([run["genus"] for run in document["runs"]], [14, 15])
        self.assertEqual(document["runs"][0]["axioms"], [AXIOM])

    def test_thirteen(self):
        output = self.call("verify", "thm_main2", "--genus", "13", "--record")
        self.assertIn("PASS", output)
        self.assertEqual(VerificationRun.objects.get().genus, 13)

    def test_genus_below_minimum(self):
        error = self.fails_with(5, "verify", "thm_main", "--genus", "13")
        self.assertIn("min_genus violated", str(error))

    def test_genus_gate_runs_before_checking(self):
        self.fails_with(5, "verify", "thm_main", "--genus", "13..15", "--record")
        self.assertFalse(VerificationRun.objects.exists())

    def test_strict_axioms(self):
        self.fails_with(6, "verify", "thm_main", "--genus", "14", "--strict-axioms")

    def test_refuted_script(self):
        text = read_script("thm_main")[0].replace(
            "=> u{g-1} A2 B4^-1 [conjugation]", "=> u{g-1} Gamma2 B4^-1 [conjugation]")
        self.fails_with(3, "verify", self.write("mutant.prf", text), "--genus", "14")

    def test_failed_step(self):
        text = read_script("thm_main")[0].replace(
            "G7 := sandwich(G6, G1) => A2 C2^-1 [conjugation]", "G7 := sandwich(G6, G1) => A2 C2^-1 [rotation]")
        error = self.fails_with(1, "verify", self.write("mutant.prf", text), "--genus", "14")
        self.assertIn("g=14", str(error))

    def test_refutation_wins_over_failure(self):
        text = read_script("thm_main")[0].replace(
            "=> u{g-1} A2 B4^-1 [conjugation]", "=> u{g-1} A2 B40^-1 [conjugation]").replace(
            "=> B2 C3^-1 [rotation]", "=> B2 C4^-1 [rotation]")
        self.fails_with(3, "verify", self.write("mutant.prf", text), "--genus", "14")

    def test_missing_script(self):
        self.fails_with(4, "verify", "no_such_script", "--genus", "14")

    def test_bad_genus(self):
        self.fails_with(4, "verify", "thm_main", "--genus", "fourteen")

    def test_script_syntax_error(self):
        path = self.write("broken.prf", "script broken\nmin_genus 4\nX := conj(T => T [free]\n")
        error = self.fails_with(4, "verify", path, "--genus", "5")
        self.assertIn("line 3", str(error))

    def test_table_failing_validation(self):
        text = table_path().read_text().replace(
            "[intersections]\n", "[intersections]\nB1 Gamma8 1 DERIVED-PATTERN\n", 1)
        error = self.fails_with(4, "verify", "thm_main", "--genus", "14", "--table", self.write("bad.tbl", text))
        self.assertIn("[parity]", str(error))

    def test_table_missing_required_action(self):
        lines = [line for line in table_path().read_text().splitlines() if not line.startswith("T A1 B1")]
        table = self.write("bad.tbl", "\n".join(lines) + "\n")
        error = self.fails_with(4, "verify", "thm_main", "--genus", "14", "--table", table)
        self.assertIn("[required] T(A1) = B1 (+1)", str(error))

    def test_table_syntax_error(self):
        table = self.write("bad.tbl", "version 1\n[curves]\nB1 2 3\n")
        self.fails_with(4, "verify", "thm_main", "--genus", "14", "--table", table)


class ActCommandTests(CommandTestCase):
    def test_rotation(self):
        self.assertEqual(self.call("act", "T^3", "A2", "--genus", "14").strip(), "Gamma4 (+1)")

    def test_braid(self):
        self.assertEqual(self.call("act", "A2 Gamma2", "A2", "--genus", "14").strip(), "Gamma2 (+1)")

    def test_facts(self):
        output = self.call("act", "T^-1", "B1", "--genus", "14", "--facts")
        self.assertIn(AXIOM, output)

    def test_unknown(self):
        error = self.fails_with(1, "act", "B4", "Gamma10", "--genus", "14")
        self.assertIn("i(B4, Gamma10)", str(error))


class MatrixCommandTests(CommandTestCase):
    def test_rotation(self):
        self.assertEqual(self.call("matrix", "T", "--genus", "4").split(), ["0001", "1000", "0100", "0010"])

    def test_out_of_range_transposition(self):
        self.fails_with(4, "matrix", "u4", "--genus", "4")


class FactsCommandTests(CommandTestCase):
    def test_expanded(self):
        output = self.call("facts", "--provenance", "FIGURE-AXIOM", "--genus", "14")
        self.assertEqual(output.splitlines(), [AXIOM])

    def test_template_lines(self):
        output = self.call("facts", "--provenance", "FIGURE-AXIOM")
        self.assertEqual(len(output.splitlines()), 1)
        self.assertTrue(output.strip().endswith("T A1 B1 +1 FIGURE-AXIOM"))

    def test_all_facts(self):
        output = self.call("facts", "--genus", "14")
        self.assertIn("i(A2, Gamma2) = 1 [PAPER]", output.splitlines())

    def test_missing_table(self):
        self.fails_with(4, "facts", "--table", str(Path(self.tmp.name) / "missing.tbl"))


class ValidateTableCommandTests(CommandTestCase):
    def test_bundled_table(self):
        output = self.call("validate_table", "--genus", "3..6", "--genus", "13..16")
        self.assertEqual(len(output.splitlines()), 8)
        self.assertNotIn("violation", output)

    def test_parity_violation(self):
        text = table_path().read_text().replace("A2 Gamma2 1 PAPER", "A2 Gamma2 0 PAPER")
        error = self.fails_with(4, "validate_table", "--genus", "14", "--table", self.write("bad.tbl", text))
        self.assertIn("2 table violation(s)", str(error))


class SweepCommandTests(CommandTestCase):
    def test_every_fact_is_needed(self):
        output = self.call("sweep", "--script", "thm_main", "--genus", "14")
        self.assertIn(f"{AXIOM}: needed by GA1", output)
        self.assertTrue(output.rstrip().endswith("0 redundant"))
