# core/management/base.py
import logging

from django.core.management.base import BaseCommand, CommandError

from core.checker.checking import EXIT_DATA_ERROR, EXIT_GENUS
from core.checker.exceptions import GenusOutOfRange
from core.checker.services import parse_genera
from core.exceptions import CrosscapError

VERBOSITY_LEVELS = {2: logging.INFO, 3: logging.DEBUG}


class CrosscapCommand(BaseCommand):
    """
    Base for the verifier's commands: domain errors become CommandError
    with the documented return code, and -v 2 / -v 3 raise the log level.
    """

    def add_genus_argument(self, parser, multiple=False):
        if multiple:
            parser.add_argument('--genus', action='append', required=True,
                                help="Genus, comma list or range LO..HI; may be repeated")
        else:
            parser.add_argument('--genus', type=int, required=True)

    def add_table_argument(self, parser):
        parser.add_argument('--table', help="Curve table file (default: the bundled table)")

    def genera(self, values):
        try:
            return parse_genera(values)
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_DATA_ERROR)

    def execute(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options.get('verbosity', 1))
        if level is not None:
            logging.getLogger('core').setLevel(level)
        return super().execute(*args, **options)

    def handle(self, *args, **options):
        try:
            return self.run(*args, **options)
        except GenusOutOfRange as exc:
            raise CommandError(str(exc), returncode=EXIT_GENUS)
        except CrosscapError as exc:
            raise CommandError(str(exc), returncode=EXIT_DATA_ERROR)
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_DATA_ERROR)

    def run(self, *args, **options):
        raise NotImplementedError
