"""
Index templates shared by the curve table and the proof scripts.

A template line is ordinary text with ``{expr}`` placeholders, optionally
followed by a range directive ``@ k = lo..hi`` and a guard ``? cond``.
Expressions are integer arithmetic over the genus ``g`` and the loop
variable; nothing else is evaluated.
"""
import ast
import operator
import re

_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}

_COMPARE = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}

_PLACEHOLDER = re.compile(r"\{([^{}]*)\}")
_RANGE = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*(.+?)\s*\.\.\s*(.+?)\s*$")


class TemplateError(ValueError):
    def __init__(self, message, column=None):
        self.column = column
        super().__init__(message)


def evaluate(expr, names):
    """Evaluate an index expression such as ``g-4`` or ``(g-1)//2``."""
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise TemplateError(f"bad index expression {expr!r}", column=exc.offset) from exc
    return _eval(tree.body, names, expr)


def _eval(node, names, source):
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise TemplateError(f"unknown name {node.id!r} in {source!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval(node.operand, names, source)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        left = _eval(node.left, names, source)
        right = _eval(node.right, names, source)
        if type(node.op) in (ast.FloorDiv, ast.Mod) and right == 0:
            raise TemplateError(f"division by zero in {source!r}")
        return _BINARY[type(node.op)](left, right)
    if isinstance(node, ast.Compare) and len(node.ops) == 1 and type(node.ops[0]) in _COMPARE:
        left = _eval(node.left, names, source)
        right = _eval(node.comparators[0], names, source)
        return int(_COMPARE[type(node.ops[0])](left, right))
    if isinstance(node, ast.BoolOp):
        values = [_eval(value, names, source) for value in node.values]
        return int(all(values) if isinstance(node.op, ast.And) else any(values))
    raise TemplateError(f"unsupported construct in index expression {source!r}")


def split_directives(text):
    """Split a template line into (body, range, guard); range is (var, lo, hi) or None."""
    body, _, guard = text.partition("?")
    body, _, span = body.partition("@")
    loop = None
    if span.strip():
        match = _RANGE.match(span)
        if not match:
            raise TemplateError(f"bad range directive {span.strip()!r}, expected 'k = lo..hi'")
        loop = match.groups()
    return body.strip(), loop, guard.strip() or None


def substitute(body, names, keep=None):
    """Replace each {expr}; placeholders whose text matches ``keep`` are left alone."""

    def replace(match):
        if keep is not None and keep.match(match.group(1)):
            return match.group(0)
        return str(evaluate(match.group(1), names))

    return _PLACEHOLDER.sub(replace, body)


def expand(text, genus, keep=None):
    """Expand one template line for the given genus into concrete lines."""
    body, loop, guard = split_directives(text)
    base = {"g": genus}
    if loop is None:
        scopes = [base]
    else:
        variable, lo, hi = loop
        if variable == "g":
            raise TemplateError("the loop variable cannot be named 'g'")
        start, stop = evaluate(lo, base), evaluate(hi, base)
        scopes = [{**base, variable: value} for value in range(start, stop + 1)]
    return [substitute(body, scope, keep) for scope in scopes if guard is None or evaluate(guard, scope)]
