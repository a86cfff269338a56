"""
Step and script checking.

Each step is recomputed from its expression under the rules its
justification allows, compared letter for letter with the claimed form,
and independently run through the mod-2 homology oracle.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

from core.action.engine import ActionEngine, derive_braid_facts
from core.exceptions import CrosscapError
from core.homology import f2
from core.surface.curves import CurveId
from core.surface.exceptions import CurveUndefined
from core.surface.facts import ActionFact, IntersectionFact, Provenance, base_fact
from core.words.letters import LetterKind
from core.words.words import Word, conjugate, invert, multiply

from .exceptions import ScriptError
from .script import Call, Justification, Literal, Name, Product, check_genus, free_value, literals

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_STEP_FAILURE = 1
EXIT_REFUTED = 3
EXIT_DATA_ERROR = 4
EXIT_GENUS = 5
EXIT_STRICT_AXIOMS = 6

# indices this close to g are written relative to g in fingerprints
RELABEL_WINDOW = 5


class Verdict(str, Enum):
    VERIFIED = "Verified"
    FAILED = "Failed"
    USES_AXIOM = "UsesAxiom"


class OracleVerdict(str, Enum):
    CONSISTENT = "ConsistentMod2"
    REFUTED = "RefutedMod2"
    NOT_EVALUATED = "NotEvaluated"


@dataclass
class StepReport:
    step: str
    verdict: Verdict
    oracle: OracleVerdict
    claimed: str
    justification: str
    normal_form: str | None = None
    reason: str | None = None
    witness: int | None = None
    axioms: list = field(default_factory=list)
    facts: list = field(default_factory=list)
    reference: str | None = None
    reconstruction: bool = False
    printed: str | None = None
    lineno: int | None = None
    depends_on: tuple = ()
    consumed: tuple = field(default=(), repr=False)

    @property
    def passed(self):
        return self.verdict is not Verdict.FAILED and self.oracle is not OracleVerdict.REFUTED

    @property
    def refuted(self):
        return self.oracle is OracleVerdict.REFUTED


@dataclass
class TargetReport:
    target: str
    confirmed: bool
    via: str | None = None
    how: str | None = None


@dataclass
class ScriptReport:
    script: str
    genus: int
    steps: list
    targets: list
    table_digest: str = ""
    strict_axioms: bool = False
    nonabelian: bool | None = None

    @property
    def failures(self):
        return sum(1 for step in self.steps if step.verdict is Verdict.FAILED)

    @property
    def refutations(self):
        return sum(1 for step in self.steps if step.refuted)

    @property
    def axioms(self):
        return sorted({axiom for step in self.steps for axiom in step.axioms})

    @property
    def unconfirmed_targets(self):
        return [target.target for target in self.targets if not target.confirmed]

    @property
    def reconstructions(self):
        return [step.step for step in self.steps if step.reconstruction]

    @property
    def discrepancies(self):
        return [step for step in self.steps if step.printed is not None]

    @property
    def passed(self):
        return not self.failures and not self.refutations and not self.unconfirmed_targets

    @property
    def exit_code(self):
        if self.refutations:
            return EXIT_REFUTED
        if not self.passed:
            return EXIT_STEP_FAILURE
        if self.strict_axioms and self.axioms:
            return EXIT_STRICT_AXIOMS
        return EXIT_PASS

    def step(self, name):
        return next(step for step in self.steps if step.step == name)


class _Failure(Exception):
    pass


def _has_telescope(node):
    if isinstance(node, Call):
        return node.function == "telescope" or any(_has_telescope(arg) for arg in node.args)
    if isinstance(node, Product):
        return any(_has_telescope(factor) for factor in node.factors)
    return False


class StepChecker:
    def __init__(self, engine, env, rotation_allowed=True):
        self.engine = engine
        self.env = env
        self.rotation_allowed = rotation_allowed

    @property
    def table(self):
        return self.engine.table

    def canonical(self, word):
        try:
            return self.engine.canonical_word(word)
        except CurveUndefined as exc:
            raise _Failure(str(exc)) from exc

    def license_literals(self, step):
        known = set(self.env.values())
        for literal in literals(step.expression):
            word = literal.word
            if word.is_rotation():
                if not self.rotation_allowed:
                    raise ScriptError(f"literal {word} uses T, which the script does not declare",
                                      line=step.lineno)
                continue
            try:
                canonical = self.engine.canonical_word(word)
            except CurveUndefined:
                canonical = word
            if canonical not in known:
                raise ScriptError(f"literal {word} in step {step.name} is neither a power of T "
                                  f"nor an already derived word", line=step.lineno)

    def rewrite(self, w, x, collected):
        result = self.engine.rewrite_conjugation(self.canonical(w), self.canonical(x))
        if not result.known:
            raise _Failure(f"missing fact: {result.missing_fact}")
        collected["facts"].extend(result.facts)
        collected["transports"].extend(result.transports)
        return result.word

    def evaluate(self, node, mode, collected):
        if isinstance(node, Name):
            return self.env[node.name]
        if isinstance(node, Literal):
            return self.canonical(node.word)
        if isinstance(node, Product):
            result = Word()
            for factor in node.factors:
                result = multiply(result, self.evaluate(factor, mode, collected))
            return result
        args = [self.evaluate(arg, mode, collected) for arg in node.args]
        rewriting = mode in (Justification.ROTATION, Justification.CONJUGATION, Justification.AXIOM)
        if node.function == "inv":
            return invert(args[0])
        if node.function == "conj":
            if not rewriting:
                return conjugate(args[0], args[1])
            if mode is Justification.ROTATION and not args[0].is_rotation():
                raise _Failure(f"conjugator {args[0]} is not a power of T")
            return self.rewrite(args[0], args[1], collected)
        if node.function == "sandwich":
            if not rewriting:
                return conjugate(multiply(args[0], args[1]), args[0])
            if mode is Justification.ROTATION:
                raise _Failure("a sandwich needs the [conjugation] justification")
            return self.rewrite(multiply(args[0], args[1]), args[0], collected)
        if mode is Justification.TELESCOPING:
            self.check_telescope(args)
        result = Word()
        for arg in args:
            result = multiply(result, arg)
        return result

    def check_telescope(self, factors):
        for index, (left, right) in enumerate(zip(factors, factors[1:]), start=1):
            if not left or not right or left.letters[-1] != right.letters[0].inverse():
                raise _Failure(f"telescope factors {index} and {index + 1} do not cancel ({left} | {right})")

    def peel(self, word, collected):
        """While w = x m x^-1 for a single letter x, rewrite it as the conjugate of m."""
        while len(word) >= 2 and word.letters[0] == word.letters[-1].inverse():
            outer = Word.of(word.letters[0])
            result = self.engine.rewrite_conjugation(outer, Word(word.letters[1:-1]))
            if not result.known:
                break
            collected["facts"].extend(result.facts)
            collected["transports"].extend(result.transports)
            word = result.word
        return word

    def gate(self, transports):
        for transport in transports:
            lhs = conjugate(transport.conjugator, Word.of(transport.letter))
            verdict = f2.oracle_check(lhs, Word.of(transport.image), self.table)
            if not verdict.consistent:
                raise _Failure(f"rewriting {transport.letter} to {transport.image} under "
                               f"{transport.conjugator} fails the homology gate at e{verdict.witness}")

    def oracle(self, step, claimed):
        try:
            verdict = f2.oracle_check(free_value(step.expression, self.env), claimed, self.table)
        except CrosscapError as exc:
            logger.debug("Oracle not evaluated for %s: %s", step.name, exc)
            return OracleVerdict.NOT_EVALUATED, None
        if verdict.consistent:
            return OracleVerdict.CONSISTENT, None
        return OracleVerdict.REFUTED, verdict.witness

    def check(self, step):
        self.license_literals(step)
        mode = step.justification
        collected = {"facts": [], "transports": []}
        normal_form = reason = None
        try:
            claimed = self.canonical(step.claimed)
        except _Failure as exc:
            claimed, reason = step.claimed, str(exc)
        if reason is None:
            try:
                if mode is Justification.TELESCOPING and not _has_telescope(step.expression):
                    raise _Failure("[telescoping] needs a telescope(...) expression")
                normal_form = self.evaluate(step.expression, mode, collected)
                if mode in (Justification.CONJUGATION, Justification.AXIOM):
                    normal_form = self.peel(normal_form, collected)
                self.gate(collected["transports"])
                if normal_form != claimed:
                    reason = f"normal form {normal_form} differs from claimed {claimed}"
            except _Failure as exc:
                reason = str(exc)
        consumed = tuple(dict.fromkeys(base_fact(fact) for fact in collected["facts"]))
        axioms = [str(fact) for fact in consumed if fact.provenance is Provenance.FIGURE_AXIOM]
        if reason is not None:
            verdict = Verdict.FAILED
        elif axioms or mode is Justification.AXIOM:
            verdict = Verdict.USES_AXIOM
        else:
            verdict = Verdict.VERIFIED
        oracle, witness = self.oracle(step, claimed)
        return StepReport(
            step=step.name,
            verdict=verdict,
            oracle=oracle,
            claimed=str(claimed),
            justification=mode.value,
            normal_form=str(normal_form) if normal_form is not None else None,
            reason=reason,
            witness=witness,
            axioms=axioms,
            facts=sorted(str(fact) for fact in consumed),
            reference=step.reference,
            reconstruction=step.reconstruction,
            printed=str(step.printed) if step.printed is not None else None,
            lineno=step.lineno,
            depends_on=tuple(sorted(step.depends_on)),
            consumed=consumed,
        ), claimed


def check_step(step, env, engine, rotation_allowed=True):
    """Check one step against the words in ``env``; returns (StepReport, stored form)."""
    return StepChecker(engine, env, rotation_allowed).check(step)


def check_nonabelian(gen1, gen2, table):
    """True iff the two words' homology matrices do not commute (a sanity check, not a proof)."""
    return not f2.commutes(f2.word_matrix(gen1, table), f2.word_matrix(gen2, table))


def _confirm_targets(script, env, passing, engine):
    reports = []
    rotation = any(generator.is_rotation() for generator in script.generators)
    for target in script.targets:
        try:
            wanted = engine.canonical_word(target)
        except CurveUndefined:
            reports.append(TargetReport(str(target), False))
            continue
        exact = next((name for name in passing if env[name] == wanted), None)
        if exact is not None:
            reports.append(TargetReport(str(wanted), True, exact, "exact"))
            continue
        letters = wanted.letters
        found = None
        if rotation and len(letters) == 1 and letters[0].kind is LetterKind.TRANSPOSITION:
            for name in passing:
                word = env[name]
                if (len(word) == 1 and word.letters[0].kind is LetterKind.TRANSPOSITION
                        and word.letters[0].exponent == letters[0].exponent):
                    shift = letters[0].position - word.letters[0].position
                    found = (name, f"conjugation by T^{shift}")
                    break
        if found:
            reports.append(TargetReport(str(wanted), True, *found))
        else:
            reports.append(TargetReport(str(wanted), False))
    return reports


def check_script(script, table, db, strict_axioms=False):
    check_genus(script.name, script.min_genus, script.max_genus, table.genus)
    engine = ActionEngine(table, derive_braid_facts(db))
    env = {}
    passing = []
    for generator in script.generators:
        env[str(generator)] = generator
        passing.append(str(generator))
    for declaration in script.declarations:
        try:
            env[declaration.name] = engine.canonical_word(declaration.word)
        except CurveUndefined as exc:
            raise ScriptError(str(exc), line=declaration.lineno, source=script.source) from exc
        passing.append(declaration.name)
    rotation_allowed = any(generator.is_rotation() for generator in script.generators)
    checker = StepChecker(engine, env, rotation_allowed)
    steps = []
    for step in script.steps:
        report, stored = checker.check(step)
        env[step.name] = stored
        # a target is only derived if every step behind it passed too
        if report.passed and step.depends_on <= set(passing):
            passing.append(step.name)
            logger.debug("%s: %s (%s)", step.name, report.verdict.value, report.oracle.value)
        elif report.passed:
            logger.info("%s rests on a step that did not pass", step.name)
        else:
            logger.warning("%s at g=%s: step %s %s, %s: %s", script.name, table.genus, step.name,
                           report.verdict.value, report.oracle.value, report.reason or "")
        steps.append(report)
    generating = script.generating_set
    nonabelian = check_nonabelian(generating[0], generating[1], table) if len(generating) >= 2 else None
    return ScriptReport(
        script=script.name,
        genus=table.genus,
        steps=steps,
        targets=_confirm_targets(script, env, passing, engine),
        table_digest=table.digest,
        strict_axioms=strict_axioms,
        nonabelian=nonabelian,
    )


def dependency_closure(report):
    """Steps the confirmed targets rest on, in script order."""
    by_name = {step.step: step for step in report.steps}
    pending = [target.via for target in report.targets if target.via in by_name]
    needed = set()
    while pending:
        name = pending.pop()
        if name in needed or name not in by_name:
            continue
        needed.add(name)
        pending.extend(by_name[name].depends_on)
    return [step for step in report.steps if step.step in needed]


def _relabel_index(index, g):
    if index >= g - RELABEL_WINDOW:
        return "{g}" if index == g else f"{{g-{g - index}}}"
    return str(index)


def _relabel_curve(curve, g):
    if isinstance(curve, CurveId):
        return f"{curve.family.value}{_relabel_index(curve.index, g)}"
    return str(curve)


def _relabel_letter(letter, g):
    if letter.kind is LetterKind.TWIST:
        return _relabel_curve(letter.curve, g)
    if letter.kind is LetterKind.TRANSPOSITION:
        return f"u{_relabel_index(letter.position, g)}"
    return "T"


def relabel_fact(fact, g):
    if isinstance(fact, IntersectionFact):
        return f"i({_relabel_curve(fact.first, g)}, {_relabel_curve(fact.second, g)}) = {fact.number}"
    if isinstance(fact, ActionFact):
        return (f"{_relabel_letter(fact.letter, g)}({_relabel_curve(fact.source, g)}) = "
                f"{_relabel_curve(fact.image, g)} ({fact.sign:+d})")
    return str(fact)


def fingerprint(report):
    """The facts the targets depend on, with indices near g written as g-k."""
    return frozenset(
        relabel_fact(fact, report.genus)
        for step in dependency_closure(report)
        for fact in step.consumed
    )


@dataclass
class SweepEntry:
    fact: str
    provenance: str
    failing_steps: list

    @property
    def necessary(self):
        return bool(self.failing_steps)


def consumed_facts(report):
    return list(dict.fromkeys(fact for step in report.steps for fact in step.consumed))


def deletion_sweep(script, table, db):
    """Delete each consumed fact in turn and record which steps stop checking."""
    baseline = check_script(script, table, db)
    entries = []
    for fact in consumed_facts(baseline):
        rerun = check_script(script, table, db.without(fact))
        failing = [step.step for step in rerun.steps if step.verdict is Verdict.FAILED]
        logger.info("Without %s: %d failing step(s)", fact, len(failing))
        entries.append(SweepEntry(str(fact), fact.provenance.value, failing))
    return baseline, entries


def format_report(report):
    """Human-readable report; every verdict here also appears in the structured form."""
    lines = [f"script {report.script} at g={report.genus}  table {report.table_digest[:12]}"]
    for step in report.steps:
        flags = []
        if step.reconstruction:
            flags.append("reconstruction")
        if step.printed:
            flags.append(f"source prints {step.printed}")
        suffix = f"  ({'; '.join(flags)})" if flags else ""
        line = f"  {step.step:<8} {step.verdict.value:<10} {step.oracle.value:<14} {step.claimed}{suffix}"
        lines.append(line)
        if step.reason:
            lines.append(f"           reason: {step.reason}")
        if step.witness is not None:
            lines.append(f"           witness: e{step.witness}")
        for axiom in step.axioms:
            lines.append(f"           axiom: {axiom}")
    for target in report.targets:
        status = f"confirmed by {target.via} ({target.how})" if target.confirmed else "NOT derived"
        lines.append(f"  target {target.target}: {status}")
    if report.axioms:
        lines.append("  FIGURE-AXIOM facts consumed:")
        lines.extend(f"    {axiom}" for axiom in report.axioms)
    if report.nonabelian is not None:
        lines.append(f"  generators commute mod 2: {'no' if report.nonabelian else 'yes'}")
    outcome = "PASS" if report.passed else "FAIL"
    lines.append(f"{outcome}: {report.failures} failure(s), {report.refutations} refutation(s)")
    return "\n".join(lines)
