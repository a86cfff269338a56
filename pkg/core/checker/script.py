"""
Proof script parser.

A script is instantiated for one genus: index templates are expanded first,
then every line is parsed into a header entry, a declaration or a step.

    script thm_main
    min_genus 14
    generator T
    G1 := u{g-4} A2 C2^-1
    requires A2 Gamma2 1
    target u{g-1}
    G2 := conj(T^3, G1) => u{g-1} Gamma4 B4^-1 [rotation]
    D{i} := conj(T^{i-1}, G45inv) => Gamma{i} Gamma{i+1}^-1 [rotation] @ i = 2..g-4
"""
import re
from dataclasses import dataclass, field
from enum import Enum

from core.surface.curves import CurveId
from core.surface.validation import RequiredAction
from core.utils.templating import TemplateError, expand
from core.words.exceptions import WordSyntaxError
from core.words.syntax import parse_letter, parse_letters, parse_word
from core.words.words import Word, commutator_form, conjugate, invert, multiply

from .exceptions import GenusAboveMaximum, GenusBelowMinimum, ScriptError, ScriptSyntaxError

_NAME = re.compile(r"^[A-Za-z_]\w*$")
_TOKEN = re.compile(r"\s*(?:(?P<punct>[(),*])|(?P<ident>[A-Za-z_]\w*(?:\^[+-]?\d+)?)|(?P<one>1)(?!\w))")
_STEP_TAIL = re.compile(r"^(?P<claimed>[^\[]*)\[(?P<just>[^\]]*)\](?P<flags>.*)$")
_FLAG = re.compile(r"\{([^{}]*)\}")
_KEEP = re.compile(r"^\s*(reconstruction|printed\s*:.*)$")

FUNCTIONS = {"inv": 1, "conj": 2, "sandwich": 2, "telescope": None}


class Justification(str, Enum):
    FREE = "free"
    ROTATION = "rotation"
    CONJUGATION = "conjugation"
    TELESCOPING = "telescoping"
    AXIOM = "axiom"


# expression tree


@dataclass(frozen=True)
class Name:
    name: str

    def names(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Literal:
    word: Word

    def names(self):
        return set()

    def __str__(self):
        return str(self.word)


@dataclass(frozen=True)
class Call:
    function: str
    args: tuple

    def names(self):
        return set().union(*(arg.names() for arg in self.args)) if self.args else set()

    def __str__(self):
        return f"{self.function}({', '.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def names(self):
        return set().union(*(factor.names() for factor in self.factors))

    def __str__(self):
        return " * ".join(str(factor) for factor in self.factors)


def free_value(node, env):
    """Evaluate an expression in the free group over the stored words."""
    if isinstance(node, Name):
        return env[node.name]
    if isinstance(node, Literal):
        return node.word
    if isinstance(node, Product):
        result = Word()
        for factor in node.factors:
            result = multiply(result, free_value(factor, env))
        return result
    args = [free_value(arg, env) for arg in node.args]
    if node.function == "inv":
        return invert(args[0])
    if node.function == "conj":
        return conjugate(args[0], args[1])
    if node.function == "sandwich":
        return commutator_form(args[0], args[1])
    result = Word()
    for arg in args:
        result = multiply(result, arg)
    return result


def literals(node):
    if isinstance(node, Literal):
        return [node]
    if isinstance(node, Product):
        return [lit for factor in node.factors for lit in literals(factor)]
    if isinstance(node, Call):
        return [lit for arg in node.args for lit in literals(arg)]
    return []


# script structure


@dataclass(frozen=True)
class Declaration:
    name: str
    word: Word
    lineno: int


@dataclass(frozen=True)
class Step:
    name: str
    expression: object
    claimed: Word
    justification: Justification
    lineno: int
    reference: str | None = None
    reconstruction: bool = False
    printed: Word | None = None
    text: str = ""

    @property
    def depends_on(self):
        return self.expression.names()


@dataclass(frozen=True)
class ProofScript:
    name: str
    genus: int
    min_genus: int
    max_genus: int | None = None
    generators: tuple = ()
    declarations: tuple = ()
    steps: tuple = ()
    targets: tuple = ()
    requires: tuple = ()
    source: str | None = None
    entries: dict = field(default_factory=dict, compare=False)

    @property
    def generating_set(self):
        return tuple(self.generators) + tuple(decl.word for decl in self.declarations)


class _ExpressionParser:
    def __init__(self, text, lineno, source, offset=0):
        self.text = text
        self.lineno = lineno
        self.source = source
        self.offset = offset
        self.tokens = self._tokenize()
        self.pos = 0

    def error(self, message, column):
        return ScriptSyntaxError(message, line=self.lineno, column=self.offset + column, source=self.source)

    def _tokenize(self):
        tokens = []
        pos = 0
        while pos < len(self.text):
            if self.text[pos:].strip() == "":
                break
            match = _TOKEN.match(self.text, pos)
            if not match:
                stripped = len(self.text[pos:]) - len(self.text[pos:].lstrip())
                raise self.error(f"unexpected {self.text[pos + stripped]!r} in expression", pos + stripped + 1)
            kind = match.lastgroup
            column = match.start(kind) + 1
            tokens.append((kind, match.group(kind), column))
            pos = match.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.text) + 1)

    def take(self, value=None):
        token = self.peek()
        if token[0] is None or (value is not None and token[1] != value):
            expected = repr(value) if value else "more input"
            raise self.error(f"expected {expected}", token[2])
        self.pos += 1
        return token

    def parse(self):
        node = self.expression()
        if self.peek()[0] is not None:
            raise self.error(f"unexpected {self.peek()[1]!r}", self.peek()[2])
        return node

    def expression(self):
        factors = [self.term()]
        while True:
            kind, value, _ = self.peek()
            if value == "*":
                self.take()
                factors.append(self.term())
            elif kind in ("ident", "one") or value == "(":
                factors.append(self.term())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def term(self):
        kind, value, column = self.take()
        if value == "(":
            node = self.expression()
            self.take(")")
            return node
        if kind == "one":
            return Literal(Word())
        if kind != "ident":
            raise self.error(f"unexpected {value!r}", column)
        if value in FUNCTIONS and self.peek()[1] == "(":
            self.take("(")
            args = [self.expression()]
            while self.peek()[1] == ",":
                self.take(",")
                args.append(self.expression())
            self.take(")")
            arity = FUNCTIONS[value]
            if arity is not None and len(args) != arity:
                raise self.error(f"{value}() takes {arity} argument(s), got {len(args)}", column)
            return Call(value, tuple(args))
        try:
            return Literal(Word(tuple(parse_letters(value))))
        except WordSyntaxError:
            pass
        if "^" in value:
            raise self.error(f"names take no exponent, write inv({value.split('^')[0]}) instead", column)
        return Name(value)


def parse_expression(text, lineno=None, source=None, offset=0):
    return _ExpressionParser(text, lineno, source, offset).parse()


def _is_word(name):
    try:
        parse_letters(name)
    except WordSyntaxError:
        return False
    return True


def _header(text, source):
    """Read the genus range before any template is expanded."""
    name, minimum, maximum = None, None, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if len(parts) != 2:
            continue
        if parts[0] == "script":
            name = parts[1]
        elif parts[0] in ("min_genus", "max_genus"):
            if not parts[1].isdigit():
                raise ScriptSyntaxError(f"{parts[0]} must be an integer", line=lineno, source=source)
            if parts[0] == "min_genus":
                minimum = int(parts[1])
            else:
                maximum = int(parts[1])
    if name is None:
        raise ScriptSyntaxError("script has no 'script NAME' line", source=source)
    if minimum is None:
        raise ScriptSyntaxError("script has no 'min_genus N' line", source=source)
    return name, minimum, maximum


def check_genus(name, minimum, maximum, genus):
    if genus < minimum:
        raise GenusBelowMinimum(name, genus, minimum)
    if maximum is not None and genus > maximum:
        raise GenusAboveMaximum(name, genus, maximum)


class _ScriptBuilder:
    def __init__(self, name, genus, source):
        self.name = name
        self.genus = genus
        self.source = source
        self.generators = []
        self.declarations = []
        self.steps = []
        self.targets = []
        self.requires = []
        self.entries = {}

    def syntax(self, message, lineno, column=None):
        return ScriptSyntaxError(message, line=lineno, column=column, source=self.source)

    def word(self, text, lineno, offset=0):
        try:
            return parse_word(text)
        except WordSyntaxError as exc:
            column = offset + exc.column if exc.column is not None else None
            raise self.syntax(exc.message, lineno, column) from exc

    def define(self, name, lineno):
        if not _NAME.match(name):
            raise self.syntax(f"bad name {name!r}", lineno, 1)
        if _is_word(name):
            raise self.syntax(f"name {name!r} reads as a generator word; pick another name", lineno, 1)
        if name in self.entries:
            raise ScriptError(f"name {name!r} is already defined", line=lineno, source=self.source)

    def line(self, line, lineno):
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword in ("script", "min_genus", "max_genus"):
            return
        if keyword == "generator":
            word = self.word(rest, lineno, len(keyword) + 1)
            self.generators.append(word)
            self.entries[rest] = word
            return
        if keyword == "target":
            self.targets.append(self.word(rest, lineno, len(keyword) + 1))
            return
        if keyword == "requires":
            self.require(rest, lineno)
            return
        if ":=" not in line:
            raise self.syntax(f"unrecognised line {line!r}", lineno, 1)
        name, _, body = line.partition(":=")
        name = name.strip()
        self.define(name, lineno)
        offset = line.index(":=") + 2
        if "=>" in body:
            step = self.step(name, body, lineno, offset)
            self.steps.append(step)
            self.entries[name] = step
        else:
            declaration = Declaration(name, self.word(body, lineno, offset), lineno)
            self.declarations.append(declaration)
            self.entries[name] = declaration

    def require(self, rest, lineno):
        parts = rest.split()
        if len(parts) == 4:
            self.require_action(parts, lineno)
            return
        if len(parts) != 3 or not parts[2].isdigit():
            raise self.syntax("expected 'requires X Y n' or 'requires L X Y sign'", lineno)
        try:
            first, second = CurveId.parse(parts[0]), CurveId.parse(parts[1])
        except ValueError as exc:
            raise self.syntax(str(exc), lineno) from exc
        self.requires.append((first, second, int(parts[2])))

    def require_action(self, parts, lineno):
        try:
            letter = parse_letter(parts[0])
            source, image = CurveId.parse(parts[1]), CurveId.parse(parts[2])
        except WordSyntaxError as exc:
            raise self.syntax(exc.message, lineno) from exc
        except ValueError as exc:
            raise self.syntax(str(exc), lineno) from exc
        if letter.exponent != 1:
            raise self.syntax("required actions are stated for single generator letters", lineno)
        if parts[3] not in ("+1", "-1", "1"):
            raise self.syntax(f"sign must be +1 or -1, got {parts[3]!r}", lineno)
        self.requires.append(RequiredAction(letter, source, image, -1 if parts[3] == "-1" else 1))

    def step(self, name, body, lineno, offset):
        expr_text, _, tail = body.partition("=>")
        expression = parse_expression(expr_text, lineno, self.source, offset)
        for used in sorted(expression.names()):
            if used not in self.entries:
                raise ScriptError(f"unknown name {used!r} in step {name}", line=lineno, source=self.source)
        tail_offset = offset + len(expr_text) + 2
        match = _STEP_TAIL.match(tail)
        if not match:
            raise self.syntax("expected '=> WORD [justification]'", lineno, tail_offset + 1)
        claimed = self.word(match.group("claimed"), lineno, tail_offset)
        justification, reference = self.justification(match.group("just"), lineno)
        reconstruction, printed = False, None
        flags = match.group("flags")
        if _FLAG.sub("", flags).strip():
            raise self.syntax(f"unexpected text after the justification: {flags.strip()!r}", lineno)
        for flag in _FLAG.findall(flags):
            keyword, _, value = flag.partition(":")
            keyword = keyword.strip()
            if keyword == "reconstruction" and not value:
                reconstruction = True
            elif keyword == "printed":
                printed = self.word(value, lineno)
            else:
                raise self.syntax(f"unknown flag {{{flag}}}", lineno)
        return Step(name, expression, claimed, justification, lineno, reference,
                    reconstruction, printed, text=body.strip())

    def justification(self, text, lineno):
        keyword, sep, reference = text.partition(":")
        try:
            justification = Justification(keyword.strip())
        except ValueError:
            allowed = ", ".join(member.value for member in Justification)
            raise self.syntax(f"unknown justification [{text}], expected one of {allowed}", lineno) from None
        if justification is Justification.AXIOM and not reference.strip():
            raise self.syntax("[axiom: ...] needs a reference", lineno)
        return justification, reference.strip() or None


def parse_script(text, genus, source=None):
    """Instantiate a proof script at genus g. Genus range errors come before any expansion."""
    name, minimum, maximum = _header(text, source)
    check_genus(name, minimum, maximum, genus)
    builder = _ScriptBuilder(name, genus, source)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        template = raw.split("#", 1)[0].strip()
        if not template:
            continue
        try:
            lines = expand(template, genus, keep=_KEEP)
        except TemplateError as exc:
            raise ScriptSyntaxError(str(exc), line=lineno, column=exc.column, source=source) from exc
        for line in lines:
            builder.line(line, lineno)
    return ProofScript(
        name=name,
        genus=genus,
        min_genus=minimum,
        max_genus=maximum,
        generators=tuple(builder.generators),
        declarations=tuple(builder.declarations),
        steps=tuple(builder.steps),
        targets=tuple(builder.targets),
        requires=tuple(builder.requires),
        source=source,
        entries=dict(builder.entries),
    )


def script_header(text, source=None):
    """(name, min_genus, max_genus) without instantiating the script."""
    return _header(text, source)
