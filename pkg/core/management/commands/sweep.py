# core/management/commands/sweep.py
from django.core.management.base import CommandError

from core.checker.checking import EXIT_STEP_FAILURE
from core.checker.services import sweep_script
from core.management.base import CrosscapCommand


class Command(CrosscapCommand):
    help = "Delete each consumed fact in turn and show which steps stop checking"

    def add_arguments(self, parser):
        parser.add_argument('--script', required=True)
        self.add_genus_argument(parser)
        self.add_table_argument(parser)

    def run(self, *args, **options):
        baseline, entries = sweep_script(options['script'], options['genus'], options['table'])
        if not baseline.passed:
            raise CommandError(f"{baseline.script} does not pass at g={baseline.genus}; nothing to sweep",
                               returncode=EXIT_STEP_FAILURE)
        redundant = 0
        for entry in entries:
            if entry.necessary:
                self.stdout.write(f"{entry.fact}: needed by {', '.join(entry.failing_steps)}")
            else:
                redundant += 1
                self.stdout.write(f"{entry.fact}: NOT needed")
        self.stdout.write(f"{len(entries)} fact(s) consumed, {redundant} redundant")
        if redundant:
            raise CommandError(f"{redundant} consumed fact(s) are redundant", returncode=EXIT_STEP_FAILURE)
