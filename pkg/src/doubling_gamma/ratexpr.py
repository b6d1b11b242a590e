"""Evaluate textual formulas in s into exact rational functions of T = q^{-s}.

The syntax is Python expression syntax with ``^`` accepted for powers::

    zeta(-s+1/2)/zeta(s+1/2) * gamma(s+1/2, disc)
    -q^(-s) * zeta(-s+1)/zeta(s+1) * eps(s+1/2, E)^2
    T^-2*(1 + (-sqrt(5) - 2*i*sqrt(5))*T)/(1 + T^2)

Names: ``s``, ``T``, ``q``, ``i``.  Functions: ``sqrt(q)``, ``zeta(arg)``
(of F), ``zetaE(arg, d)`` (of F(sqrt d)), ``L(arg, chi)``, ``gamma(arg, chi)``,
``eps(arg, chi)``, where every ``arg`` is ``+-s + c`` with rational ``c`` and
``chi`` is a square-class name (``1``, ``u``, ``pi``, ``upi``) or a name bound
in the ``chars`` mapping.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .exactnum import Coeff, RationalQS, q_power
from .localfield import AddChar, MultChar, SquareClass, classify_quad_ext, local_field, zeta_local
from .tate import tate_eps, tate_gamma, tate_L

__all__ = ["RatExprError", "evaluate"]


class RatExprError(ValueError):
    def __init__(self, msg: str, col: Optional[int] = None):
        super().__init__(msg if col is None else f"{msg} (column {col + 1})")
        self.col = col


@dataclass(frozen=True)
class _Affine:
    """a*s + b"""

    a: Fraction
    b: Fraction


class _QSym:
    pass


_Q = _QSym()


class _Evaluator:
    def __init__(self, q: int, psi: AddChar, chars: Mapping[str, MultChar]):
        self.q = q
        self.psi = psi
        self.chars = dict(chars)
        self.ctx = local_field(q)

    # -- helpers -----------------------------------------------------------
    def fail(self, node, msg):
        raise RatExprError(msg, getattr(node, "col_offset", None))

    def rat(self, v, node) -> RationalQS:
        if isinstance(v, RationalQS):
            return v
        if isinstance(v, Fraction):
            return RationalQS.constant(self.q, v)
        if isinstance(v, Coeff):
            return RationalQS.constant(self.q, v)
        if isinstance(v, _QSym):
            return RationalQS.constant(self.q, self.q)
        self.fail(node, "expected a value, got an expression in s")

    def apply(self, f: RationalQS, arg, node) -> RationalQS:
        if not isinstance(arg, _Affine) or arg.a not in (1, -1):
            self.fail(node, "argument must be +-s + constant")
        g = f.shift(arg.b)
        return g if arg.a == 1 else g.negate_s()

    def char(self, node) -> MultChar:
        if isinstance(node, ast.Name) and node.id in self.chars:
            return self.chars[node.id]
        if isinstance(node, ast.Constant) and node.value == 1:
            return MultChar.trivial(self.q)
        if isinstance(node, ast.Name):
            try:
                return MultChar.quadratic(self.q, SquareClass.parse(node.id))
            except ValueError:
                pass
        self.fail(node, "unknown character")

    # -- evaluation --------------------------------------------------------
    def ev(self, node):
        if isinstance(node, ast.Expression):
            return self.ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, int) and not isinstance(node.value, bool):
                return Fraction(node.value)
            self.fail(node, "only integer literals are allowed")
        if isinstance(node, ast.Name):
            if node.id == "s":
                return _Affine(Fraction(1), Fraction(0))
            if node.id == "T":
                return RationalQS.X(self.q)
            if node.id == "q":
                return _Q
            if node.id == "i":
                return Coeff.i(self.q)
            self.fail(node, f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            v = self.ev(node.operand)
            if isinstance(node.op, ast.USub):
                if isinstance(v, _Affine):
                    return _Affine(-v.a, -v.b)
                if isinstance(v, _QSym):
                    return Fraction(-self.q)
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
            self.fail(node, "unsupported unary operator")
        if isinstance(node, ast.BinOp):
            return self.binop(node)
        if isinstance(node, ast.Call):
            return self.call(node)
        self.fail(node, "unsupported syntax")

    def binop(self, node):
        left, right = self.ev(node.left), self.ev(node.right)
        op = node.op
        if isinstance(op, ast.Pow) and isinstance(left, _QSym):
            return self.q_pow(right, node)
        aff = isinstance(left, _Affine) or isinstance(right, _Affine)
        if aff:
            l = left if isinstance(left, _Affine) else _Affine(Fraction(0), self.scalar(left, node))
            r = right if isinstance(right, _Affine) else _Affine(Fraction(0), self.scalar(right, node))
            if isinstance(op, ast.Add):
                return _Affine(l.a + r.a, l.b + r.b)
            if isinstance(op, ast.Sub):
                return _Affine(l.a - r.a, l.b - r.b)
            if isinstance(op, ast.Mult) and (l.a == 0 or r.a == 0):
                return _Affine(l.a * r.b + r.a * l.b, l.b * r.b)
            if isinstance(op, ast.Div) and r.a == 0:
                return _Affine(l.a / r.b, l.b / r.b)
            self.fail(node, "s may only appear affinely")
        if isinstance(op, ast.Pow):
            if isinstance(left, _QSym):
                return self.q_pow(right, node)
            if not isinstance(right, Fraction) or right.denominator != 1:
                self.fail(node, "exponent must be an integer")
            return self.rat(left, node) ** int(right)
        if isinstance(left, Fraction) and isinstance(right, Fraction):
            if isinstance(op, ast.Add):
                return left + right
            if isinstance(op, ast.Sub):
                return left - right
            if isinstance(op, ast.Mult):
                return left * right
            if isinstance(op, ast.Div):
                return left / right
        a, b = self.rat(left, node), self.rat(right, node)
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            return a / b
        self.fail(node, "unsupported operator")

    def scalar(self, v, node) -> Fraction:
        if isinstance(v, _QSym):
            return Fraction(self.q)
        if isinstance(v, Fraction):
            return v
        self.fail(node, "s may only appear affinely")

    def q_pow(self, e, node):
        # q^(a s + b) = q^b T^{-a}
        if isinstance(e, Fraction):
            e = _Affine(Fraction(0), e)
        if not isinstance(e, _Affine) or (2 * e.b).denominator != 1 or e.a.denominator != 1:
            self.fail(node, "q may only be raised to (integer)*s + (half-integer)")
        return RationalQS.monomial(self.q, q_power(self.q, int(2 * e.b)), int(-e.a))

    def call(self, node):
        if not isinstance(node.func, ast.Name) or node.keywords:
            self.fail(node, "unsupported call")
        name, args = node.func.id, node.args
        if name == "sqrt":
            arg = self.ev(args[0]) if len(args) == 1 else None
            if not (isinstance(arg, _QSym) or arg == self.q):
                self.fail(node, "sqrt only applies to q")
            return Coeff.sqrt_q(self.q)
        if name == "zeta" and len(args) == 1:
            return self.apply(zeta_local(self.ctx), self.ev(args[0]), node)
        if name == "zetaE" and len(args) == 2:
            d = self.char(args[1]).quad
            return self.apply(zeta_local(self.ctx, classify_quad_ext(self.ctx, d)), self.ev(args[0]), node)
        if name in ("L", "gamma", "eps") and len(args) == 2:
            chi = self.char(args[1])
            f = {"L": lambda c: tate_L(c), "gamma": lambda c: tate_gamma(c, self.psi), "eps": lambda c: tate_eps(c, self.psi)}
            return self.apply(f[name](chi), self.ev(args[0]), node)
        self.fail(node, f"unknown function {name}/{len(args)}")


def evaluate(text: str, q: int, psi: AddChar | None = None, chars: Mapping[str, MultChar] | None = None) -> RationalQS:
    """Parse ``text`` and return the exact RationalQS it denotes."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise RatExprError(f"syntax error: {exc.msg}", (exc.offset or 1) - 1) from None
    ev = _Evaluator(q, psi or AddChar(), chars or {})
    return ev.rat(ev.ev(tree), tree.body)
