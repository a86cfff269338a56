# core/management/commands/matrix.py
from core.checker.services import load_curves
from core.homology.f2 import dump_matrix, word_matrix
from core.management.base import CrosscapCommand
from core.words.syntax import parse_word


class Command(CrosscapCommand):
    help = "Print the mod-2 homology matrix of a word, one row of bits per line"

    def add_arguments(self, parser):
        parser.add_argument('word')
        self.add_genus_argument(parser)
        self.add_table_argument(parser)

    def run(self, *args, **options):
        word = parse_word(options['word'])
        table, _ = load_curves(options['genus'], options['table'])
        self.stdout.write(dump_matrix(word_matrix(word, table)))
