# core/surface/table.py
"""
Loader for the line-oriented curve table.

    version 1
    [curves]
    Gamma{k} : {k} {k+1} {k+2} {k+3}   @ k = 1..g ? g >= 4
    A2 = Gamma1                         ? g >= 4
    [intersections]
    A2 Gamma2 1 PAPER                   ? g >= 13
    [actions]
    T B{i} C{i} +1 DERIVED-PATTERN      @ i = 1..(g-1)//2

Templates are expanded per genus before parsing, so every record and fact
in the result is concrete. See docs/FORMATS.md for the full grammar.
"""
import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

from core.exceptions import CrosscapError
from core.utils.templating import TemplateError, expand, split_directives
from core.words.exceptions import WordSyntaxError
from core.words.syntax import parse_letter

from .curves import CurveId, CurveRecord, CurveTable, reduce_crosscap, validate_genus
from .exceptions import CurveUndefined, TableSyntaxError
from .facts import ActionFact, FactDB, IntersectionFact, Provenance

logger = logging.getLogger(__name__)

SUPPORTED_VERSIONS = (1,)
SECTIONS = ("curves", "intersections", "actions")


@dataclass(frozen=True)
class TemplateFact:
    """A fact line as written, before genus expansion."""

    section: str
    text: str
    lineno: int
    provenance: Provenance


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _curve(token, lineno, source):
    try:
        return CurveId.parse(token)
    except ValueError as exc:
        raise TableSyntaxError(str(exc), line=lineno, source=source) from exc


def _sections(text, source):
    """Yield (section, lineno, line) and check the version header."""
    section = None
    version = None
    for lineno, line in _lines(text):
        if version is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "version" or not parts[1].isdigit():
                raise TableSyntaxError("table must start with 'version N'", line=lineno, source=source)
            version = int(parts[1])
            if version not in SUPPORTED_VERSIONS:
                raise TableSyntaxError(f"unsupported table version {version}", line=lineno, source=source)
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise TableSyntaxError(f"unknown section [{section}]", line=lineno, source=source)
            continue
        if section is None:
            raise TableSyntaxError("entry outside of a section", line=lineno, source=source)
        yield section, lineno, line
    if version is None:
        raise TableSyntaxError("empty table", source=source)


def table_version(text):
    for lineno, line in _lines(text):
        return int(line.split()[1]) if line.startswith("version") else None
    return None


def template_facts(text, source=None):
    """The fact lines of a table without expanding them for any genus."""
    facts = []
    for section, lineno, line in _sections(text, source):
        if section == "curves":
            continue
        body, _, _ = split_directives(line)
        tokens = body.split()
        try:
            provenance = Provenance.parse(tokens[-1])
        except (ValueError, IndexError) as exc:
            raise TableSyntaxError(str(exc), line=lineno, source=source) from exc
        facts.append(TemplateFact(section, line, lineno, provenance))
    return facts


class _Builder:
    def __init__(self, genus, source):
        self.genus = genus
        self.source = source
        self.records = {}
        self.aliases = {}
        self.intersections = {}
        self.actions = {}

    def error(self, message, lineno):
        return TableSyntaxError(message, line=lineno, source=self.source)

    def curve_line(self, line, lineno):
        if "=" in line and ":" not in line:
            name, _, target = line.partition("=")
            self.alias(_curve(name, lineno, self.source), _curve(target, lineno, self.source), lineno)
            return
        name, sep, rest = line.partition(":")
        if not sep:
            raise self.error(f"expected 'Name : crosscaps' or 'Name = Other', got {line!r}", lineno)
        curve_id = _curve(name, lineno, self.source).reduced(self.genus)
        tokens = rest.split()
        if tokens == ["-"]:
            tokens = []
        crosscaps = []
        for token in tokens:
            if not token.lstrip("-").isdigit():
                raise self.error(f"bad crosscap index {token!r}", lineno)
            crosscaps.append(reduce_crosscap(int(token), self.genus))
        if len(set(crosscaps)) != len(crosscaps):
            raise self.error(f"curve {curve_id} passes through a crosscap twice at g={self.genus}", lineno)
        if curve_id in self.records:
            raise self.error(f"curve {curve_id} defined twice", lineno)
        traversal = frozenset(crosscaps)
        h_class = tuple(1 if index in traversal else 0 for index in range(1, self.genus + 1))
        self.records[curve_id] = CurveRecord(curve_id, traversal, h_class)

    def alias(self, name, target, lineno):
        target = target.reduced(self.genus)
        if target not in self.records:
            raise self.error(f"alias target {target} is not defined", lineno)
        record = self.records.pop(target)
        self.records[name] = CurveRecord(name, record.traversal, record.h_class, record.two_sided)
        self.aliases[target] = name
        for old, new in list(self.aliases.items()):
            if new == target:
                self.aliases[old] = name

    def table(self, version, digest):
        return CurveTable(self.genus, dict(self.records), dict(self.aliases), version, digest)

    def canonical(self, token, lineno):
        table = self.table(1, "")
        try:
            return table.canonical(_curve(token, lineno, self.source))
        except CurveUndefined as exc:
            raise self.error(str(exc), lineno) from exc

    def intersection_line(self, line, lineno):
        tokens = line.split()
        if len(tokens) != 4:
            raise self.error(f"expected 'X Y n PROVENANCE', got {line!r}", lineno)
        first, second = self.canonical(tokens[0], lineno), self.canonical(tokens[1], lineno)
        if not tokens[2].isdigit():
            raise self.error(f"intersection number must be a nonnegative integer, got {tokens[2]!r}", lineno)
        fact = IntersectionFact(first, second, int(tokens[2]), self.provenance(tokens[3], lineno), lineno)
        for entry in (fact, fact.mirrored()):
            existing = self.intersections.get(entry.key)
            if existing is not None and existing.number != entry.number:
                raise self.error(f"conflicting intersection facts for {first} and {second}", lineno)
            self.intersections.setdefault(entry.key, entry)

    def action_line(self, line, lineno):
        tokens = line.split()
        if len(tokens) != 5:
            raise self.error(f"expected 'L X Y sign PROVENANCE', got {line!r}", lineno)
        try:
            letter = parse_letter(tokens[0])
        except WordSyntaxError as exc:
            raise self.error(exc.message, lineno) from exc
        if letter.exponent != 1:
            raise self.error("action facts are stated for single generator letters", lineno)
        source, image = self.canonical(tokens[1], lineno), self.canonical(tokens[2], lineno)
        if tokens[3] not in ("+1", "-1", "1"):
            raise self.error(f"sign must be +1 or -1, got {tokens[3]!r}", lineno)
        fact = ActionFact(letter, source, image, -1 if tokens[3] == "-1" else 1,
                          self.provenance(tokens[4], lineno), lineno)
        existing = self.actions.get(fact.key)
        if existing is not None and existing != fact:
            raise self.error(f"conflicting action facts for {letter}({source})", lineno)
        self.actions[fact.key] = fact

    def provenance(self, token, lineno):
        try:
            return Provenance.parse(token)
        except ValueError as exc:
            raise self.error(str(exc), lineno) from exc


def parse_table(text, genus, source=None):
    """Instantiate the table text at genus g, returning (CurveTable, FactDB)."""
    validate_genus(genus)
    builder = _Builder(genus, source)
    handlers = {
        "curves": builder.curve_line,
        "intersections": builder.intersection_line,
        "actions": builder.action_line,
    }
    for section, lineno, template in _sections(text, source):
        try:
            lines = expand(template, genus)
        except TemplateError as exc:
            raise TableSyntaxError(str(exc), line=lineno, column=exc.column, source=source) from exc
        for line in lines:
            handlers[section](line, lineno)
    version = table_version(text)
    digest = hashlib.sha256(text.encode()).hexdigest()
    table = builder.table(version, digest)
    db = FactDB(builder.intersections, builder.actions)
    logger.info("Loaded curve table %s at g=%s: %d curves, %d facts",
                source or "<text>", genus, len(table), len(db))
    return table, db


def load_table(path, genus):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CrosscapError(f"cannot read curve table {path}: {exc.strerror}") from exc
    return parse_table(text, genus, source=str(path))
