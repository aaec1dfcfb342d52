"""Tiny arithmetic evaluator for angles and complex literals such as ``2*pi/3`` or ``0.3+1.2i``."""

from __future__ import annotations

import ast
import cmath
import math
import operator
import re

from .errors import ValidationError

_BIN = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: lambda a, b: complex(a) ** complex(b)}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e, "i": 1j, "j": 1j, "rho": cmath.exp(2j * math.pi / 3)}
_FUNCS = {"exp": cmath.exp, "sqrt": cmath.sqrt, "cos": cmath.cos, "sin": cmath.sin}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BIN:
        return _BIN[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval(node.operand))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise ValidationError("unsupported expression")


def _prepare(text):
    s = text.strip().replace(" ", "")
    if not s:
        raise ValidationError("empty expression")
    # "1.2i" -> "1.2*i", "2pi" -> "2*pi"
    s = re.sub(r"(?<=[\d.])(?=(?:pi|i|j|rho|exp|sqrt|cos|sin|\())", "*", s)
    s = s.replace(")(", ")*(")
    return s


def evaluate(text):
    try:
        tree = ast.parse(_prepare(text), mode="eval")
        val = _eval(tree)
    except ValidationError:
        raise ValidationError(f"cannot parse {text!r}") from None
    except (SyntaxError, ZeroDivisionError, OverflowError, TypeError, ValueError):
        raise ValidationError(f"cannot parse {text!r}") from None
    return complex(val)


def parse_real(text):
    v = evaluate(text)
    if abs(v.imag) > 1e-15 * max(1.0, abs(v.real)):
        raise ValidationError(f"{text!r} is not real")
    if not math.isfinite(v.real):
        raise ValidationError(f"{text!r} is not finite")
    return v.real


def parse_complex(text):
    v = evaluate(text)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise ValidationError(f"{text!r} is not finite")
    return v
