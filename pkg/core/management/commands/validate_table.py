# core/management/commands/validate_table.py
from django.core.management.base import CommandError

from core.checker.checking import EXIT_DATA_ERROR
from core.checker.services import required_facts
from core.management.base import CrosscapCommand
from core.surface.table import load_table
from core.surface.validation import validate_table
from core.utils.bundled import table_path


class Command(CrosscapCommand):
    help = "Check the curve table and fact database for consistency at the given genera"

    def add_arguments(self, parser):
        self.add_genus_argument(parser, multiple=True)
        self.add_table_argument(parser)

    def run(self, *args, **options):
        total = 0
        for genus in self.genera(options['genus']):
            table, db = load_table(table_path(options['table']), genus)
            violations = validate_table(table, db, required_facts(genus))
            total += len(violations)
            if violations:
                self.stdout.write(f"g={genus}: {len(violations)} violation(s)")
                for violation in violations:
                    self.stdout.write(f"  {violation}")
            else:
                self.stdout.write(f"g={genus}: ok ({len(table)} curves, {len(db)} facts)")
        if total:
            raise CommandError(f"{total} table violation(s)", returncode=EXIT_DATA_ERROR)
