# core/management/commands/act.py
from django.core.management.base import CommandError

from core.action.engine import ActionEngine, derive_braid_facts
from core.checker.checking import EXIT_STEP_FAILURE
from core.checker.services import load_curves
from core.management.base import CrosscapCommand
from core.surface.curves import CurveId
from core.words.syntax import parse_word


class Command(CrosscapCommand):
    help = "Apply a word to a named curve using only the declared facts"

    def add_arguments(self, parser):
        parser.add_argument('word', help="Word in canonical syntax, e.g. 'T^3'")
        parser.add_argument('curve', help="Curve name, e.g. A2 or Gamma7")
        self.add_genus_argument(parser)
        self.add_table_argument(parser)
        parser.add_argument('--facts', action='store_true', help="List the facts the result rests on")

    def run(self, *args, **options):
        word = parse_word(options['word'])
        curve = CurveId.parse(options['curve'])
        table, db = load_curves(options['genus'], options['table'])
        result = ActionEngine(table, derive_braid_facts(db)).act_word(word, curve)
        if not result.known:
            raise CommandError(str(result), returncode=EXIT_STEP_FAILURE)
        self.stdout.write(str(result))
        if options['facts']:
            for fact in result.facts:
                self.stdout.write(f"  {fact}")
