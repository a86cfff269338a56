"""Load the bundled data, run scripts and record runs; shared by the commands and the API."""
import logging

from core.exceptions import CrosscapError
from core.surface.exceptions import TableInvariantError
from core.surface.table import load_table
from core.surface.validation import validate_table
from core.utils.bundled import bundled_scripts, script_path, table_path

from .checking import check_script, deletion_sweep
from .exceptions import GenusOutOfRange
from .models import VerificationRun
from .script import check_genus, parse_script, script_header
from .serializers import ScriptReportSerializer

logger = logging.getLogger(__name__)


def read_script(name_or_path):
    path = script_path(name_or_path)
    try:
        return path.read_text(), str(path)
    except OSError as exc:
        raise CrosscapError(f"cannot read proof script {path}: {exc.strerror}") from exc


def load_script(name_or_path, genus):
    text, source = read_script(name_or_path)
    return parse_script(text, genus, source=source)


def load_curves(genus, table=None, required=()):
    """Load the table at one genus and refuse it if validate_table finds anything."""
    curves, db = load_table(table_path(table), genus)
    violations = validate_table(curves, db, required)
    if violations:
        raise TableInvariantError(violations, genus)
    return curves, db


def run_script(name_or_path, genus, table=None, strict_axioms=False):
    script = load_script(name_or_path, genus)
    curves, db = load_curves(genus, table, script.requires)
    report = check_script(script, curves, db, strict_axioms=strict_axioms)
    logger.info("%s at g=%s: exit %s", script.name, genus, report.exit_code)
    return report


def sweep_script(name_or_path, genus, table=None):
    script = load_script(name_or_path, genus)
    curves, db = load_curves(genus, table, script.requires)
    return deletion_sweep(script, curves, db)


def required_facts(genus):
    """Intersection and action facts that the bundled scripts valid at this genus rely on."""
    required = []
    for name in bundled_scripts():
        text, source = read_script(name)
        script_name, minimum, maximum = script_header(text, source)
        try:
            check_genus(script_name, minimum, maximum, genus)
        except GenusOutOfRange:
            continue
        for fact in parse_script(text, genus, source=source).requires:
            if fact not in required:
                required.append(fact)
    return required


def record_run(report, user=None):
    data = ScriptReportSerializer(report).data
    return VerificationRun.objects.create(
        script=report.script,
        genus=report.genus,
        table_digest=report.table_digest,
        passed=report.passed,
        exit_code=report.exit_code,
        failures=report.failures,
        refutations=report.refutations,
        axioms=report.axioms,
        report=data,
        strict_axioms=report.strict_axioms,
        requested_by=user if user is not None and user.is_authenticated else None,
    )


def parse_genera(values):
    """Expand ``14``, ``14,15`` and ``14..30`` into a sorted list of genera."""
    genera = set()
    for value in values:
        for part in str(value).split(","):
            part = part.strip()
            if not part:
                continue
            lo, sep, hi = part.partition("..")
            try:
                start = int(lo)
                stop = int(hi) if sep else start
            except ValueError:
                raise ValueError(f"bad genus {part!r}, expected N or LO..HI") from None
            if stop < start:
                raise ValueError(f"empty genus range {part!r}")
            genera.update(range(start, stop + 1))
    return sorted(genera)
