# core/management/commands/verify.py
import json

from django.core.management.base import CommandError

from core.checker.checking import (
    EXIT_PASS,
    EXIT_REFUTED,
    EXIT_STEP_FAILURE,
    EXIT_STRICT_AXIOMS,
    format_report,
)
from core.checker.script import check_genus, script_header
from core.checker.serializers import ScriptReportSerializer
from core.checker.services import read_script, record_run, run_script
from core.management.base import CrosscapCommand

# a run of several genera exits with the most serious individual code
EXIT_PRIORITY = [EXIT_REFUTED, EXIT_STEP_FAILURE, EXIT_STRICT_AXIOMS]


class Command(CrosscapCommand):
    help = "Check a proof script at one or more genera and report every step"

    def add_arguments(self, parser):
        parser.add_argument('script_name', nargs='?', help="Bundled script name or path")
        parser.add_argument('--script', dest='script_option', help="Bundled script name or path")
        self.add_genus_argument(parser, multiple=True)
        self.add_table_argument(parser)
        parser.add_argument('--format', choices=['text', 'structured'], default='text')
        parser.add_argument('--strict-axioms', action='store_true',
                            help="Fail when any FIGURE-AXIOM fact is consumed")
        parser.add_argument('--record', action='store_true', help="Store each run in the database")

    def run(self, *args, **options):
        script = options['script_option'] or options['script_name']
        if not script:
            raise CommandError("give a script name, e.g. 'verify thm_main --genus 14'")
        genera = self.genera(options['genus'])
        text, source = read_script(script)
        name, minimum, maximum = script_header(text, source)
        for genus in genera:
            check_genus(name, minimum, maximum, genus)

        reports = []
        for genus in genera:
            report = run_script(script, genus, table=options['table'], strict_axioms=options['strict_axioms'])
            reports.append(report)
            if options['record']:
                record_run(report)
            if options['format'] == 'text':
                self.stdout.write(format_report(report))

        codes = {report.exit_code for report in reports}
        exit_code = next((code for code in EXIT_PRIORITY if code in codes), EXIT_PASS)
        if options['format'] == 'structured':
            document = {
                "exit_code": exit_code,
                "runs": [ScriptReportSerializer(report).data for report in reports],
            }
            self.stdout.write(json.dumps(document, indent=2))
        if exit_code != EXIT_PASS:
            failed = [str(report.genus) for report in reports if report.exit_code != EXIT_PASS]
            raise CommandError(f"{name} did not pass at g={', '.join(failed)}", returncode=exit_code)
