# core/management/commands/facts.py
from core.checker.services import load_curves
from core.exceptions import CrosscapError
from core.management.base import CrosscapCommand
from core.surface.facts import Provenance
from core.surface.table import template_facts
from core.utils.bundled import table_path


class Command(CrosscapCommand):
    help = "List the fact database, as written or expanded at a genus"

    def add_arguments(self, parser):
        parser.add_argument('--provenance', choices=[p.value for p in Provenance])
        parser.add_argument('--genus', type=int, help="Expand the table at this genus")
        self.add_table_argument(parser)

    def run(self, *args, **options):
        provenance = Provenance(options['provenance']) if options['provenance'] else None
        if options['genus'] is None:
            path = table_path(options['table'])
            try:
                text = path.read_text()
            except OSError as exc:
                raise CrosscapError(f"cannot read curve table {path}: {exc.strerror}") from exc
            lines = [
                f"line {fact.lineno}: {fact.text}"
                for fact in template_facts(text, source=str(path))
                if provenance is None or fact.provenance == provenance
            ]
        else:
            _, db = load_curves(options['genus'], options['table'])
            facts = db.facts() if provenance is None else db.by_provenance(provenance)
            lines = [str(fact) for fact in facts]
        for line in lines:
            self.stdout.write(line)
