"""Parameterized cochain expressions used by the golden tables.

A template is written in the cochain grammar, except that multi-index
entries, targets and coefficients may be arithmetic in named parameters::

    -(n+1)*psi[1,1,m+n+1]_1 + (lam-n-1)*psi[1,1,m+n+1]_2

Basis cochains with a negative exponent evaluate to zero, so a template
written for general ``n`` also covers the boundary rows where some terms drop
out.  Evaluation goes through a whitelisting AST walker; nothing is passed to
``eval``.
"""

from __future__ import annotations

import ast
import operator
import re
from fractions import Fraction
from typing import Mapping

from .cochains import Cochain, format_key, key_parity
from .graded import SPACE_1_2, GradedSpace


class TemplateError(ValueError):
    pass


class LabelMismatch(TemplateError):
    """A ``phi``/``psi`` label that disagrees with the parity of the basis cochain."""


_GEN = re.compile(r"\b(phi|psi)\s*\[([^\]]*)\]\s*_\s*(\w+|\([^)]*\))")

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_CMPOPS = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


def _rewrite(text: str) -> str:
    return _GEN.sub(lambda mt: f"__gen('{mt.group(1)}', ({mt.group(2)},), {mt.group(3)})", text)


class _Evaluator:
    def __init__(self, params: Mapping[str, object], space: GradedSpace, strict_labels: bool):
        self.params = {k: (Fraction(v) if not isinstance(v, Fraction) else v) for k, v in params.items()}
        self.space = space
        self.strict = strict_labels

    def gen(self, label: str, index, target) -> Cochain:
        idx = []
        for e in index:
            if Fraction(e).denominator != 1:
                raise TemplateError(f"non-integer exponent {e}")
            idx.append(int(e))
        if Fraction(target).denominator != 1:
            raise TemplateError(f"non-integer target {target}")
        t = int(target) - 1
        if any(e < 0 for e in idx):
            return Cochain.zero(self.space)
        if len(idx) != self.space.ngens or not 0 <= t < self.space.ngens:
            raise TemplateError(f"malformed basis cochain {label}{idx}_{target}")
        if sum(idx) < 1:
            raise TemplateError(f"{label}{idx}_{target} has weight 0")
        try:
            key = (self.space.check_index(idx), t)
        except ValueError as exc:
            raise TemplateError(str(exc)) from None
        expected = "psi" if key_parity(self.space, key) else "phi"
        if self.strict and label != expected:
            raise LabelMismatch(f"{format_key(self.space, key)} printed as {label}")
        return Cochain(self.space, {key: 1})

    def visit(self, node):
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, str)) and not isinstance(node.value, bool):
            return node.value if isinstance(node.value, str) else Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in self.params:
                raise TemplateError(f"unknown parameter {node.id!r}")
            return self.params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.visit(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = self.visit(node.left), self.visit(node.right)
            if isinstance(node.op, ast.Div) and isinstance(right, Fraction) and not right:
                raise TemplateError("division by zero")
            if isinstance(node.op, ast.Mult) and isinstance(left, Cochain) and isinstance(right, Cochain):
                raise TemplateError("product of two cochains")
            if isinstance(node.op, ast.Pow):
                if not (isinstance(left, Fraction) and isinstance(right, Fraction) and right.denominator == 1):
                    raise TemplateError("bad power")
            return _BINOPS[type(node.op)](left, right)
        if isinstance(node, ast.Compare):
            left = self.visit(node.left)
            for op, comp in zip(node.ops, node.comparators):
                if type(op) not in _CMPOPS:
                    raise TemplateError("unsupported comparison")
                right = self.visit(comp)
                if not _CMPOPS[type(op)](left, right):
                    return False
                left = right
            return True
        if isinstance(node, ast.BoolOp):
            vals = [self.visit(v) for v in node.values]
            return all(vals) if isinstance(node.op, ast.And) else any(vals)
        if isinstance(node, ast.Tuple):
            return tuple(self.visit(e) for e in node.elts)
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "__gen"
                and len(node.args) == 3 and not node.keywords):
            label = self.visit(node.args[0])
            return self.gen(label, self.visit(node.args[1]), self.visit(node.args[2]))
        raise TemplateError(f"unsupported syntax: {ast.dump(node)[:60]}")


def evaluate(template: str, params: Mapping[str, object] | None = None, *,
             space: GradedSpace = SPACE_1_2, strict_labels: bool = True):
    """Value of ``template``: a Cochain, a Fraction, or a bool for conditions."""
    text = template.strip()
    if not text:
        raise TemplateError("empty template")
    try:
        tree = ast.parse(_rewrite(text), mode="eval")
    except SyntaxError as exc:
        raise TemplateError(f"cannot parse {template!r}: {exc.msg}") from None
    value = _Evaluator(params or {}, space, strict_labels).visit(tree)
    if isinstance(value, Fraction) and value == 0 and _GEN.search(text):
        return Cochain.zero(space)
    return value


def cochain(template: str, params: Mapping[str, object] | None = None, **kw) -> Cochain:
    value = evaluate(template, params, **kw)
    if isinstance(value, Fraction) and value == 0:
        return Cochain.zero(kw.get("space", SPACE_1_2))
    if not isinstance(value, Cochain):
        raise TemplateError(f"{template!r} is not a cochain expression")
    return value


def number(template, params: Mapping[str, object] | None = None) -> Fraction:
    if isinstance(template, (int, Fraction)):
        return Fraction(template)
    value = evaluate(str(template), params)
    if not isinstance(value, Fraction):
        raise TemplateError(f"{template!r} is not a number")
    return value


def integer(template, params: Mapping[str, object] | None = None) -> int:
    v = number(template, params)
    if v.denominator != 1:
        raise TemplateError(f"{template!r} is not an integer")
    return int(v)


def condition(template: str | None, params: Mapping[str, object] | None = None) -> bool:
    if template is None:
        return True
    value = evaluate(template, params)
    if not isinstance(value, bool):
        raise TemplateError(f"{template!r} is not a condition")
    return value
