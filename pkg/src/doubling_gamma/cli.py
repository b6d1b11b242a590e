"""Command-line front end: a small request language over the doubling calculus.

A request is a ``;``-separated list of clauses::

    field q=3; space SO(n=3, disc=pi, hasse=-1); pi = minimal; omega = 1;
    psi level 0 seed 1; gamma --format text

``parse`` turns text into a :class:`Request`, ``format_request`` prints the
canonical form, and ``run`` evaluates a request to ``(output, exit_code)``.
Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .doubling import (
    AbstractGJ,
    CharTwist,
    DescriptorError,
    GLBlock,
    MINIMAL_FORMS,
    MinimalTrivial,
    ReprDescriptor,
    TrivialGroup,
    Unramified,
    Verdict,
    check_functional_equation,
    gamma_minimal,
    gamma_of_tower,
    psi_rescale,
)
from .exactnum import Coeff, PoleError, RationalQS, q_power
from .localfield import ONE, PI, SQUARE_CLASSES, U, UPI, AddChar, MultChar, SquareClass, hilbert_symbol, local_field
from .params import gamma_of_parameter, principal_parameter
from .ratexpr import RatExprError, evaluate
from .spaces import CASES, QUAT, HermSpace, SpaceError, classify_minimal

__all__ = ["CliError", "Request", "format_request", "main", "parse", "run"]

ACTIONS = ("gamma", "L", "eps", "check-fe", "check-psi", "verify-minimal", "verify-all")
FORMATS = ("text", "latex", "json")


class CliError(ValueError):
    """Input error; ``line``/``col`` are 1-based when known."""

    def __init__(self, msg: str, line: Optional[int] = None, col: Optional[int] = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Request:
    q: int
    action: str
    space: Optional[HermSpace] = None
    tower: tuple = ()
    leaf: object = None
    omega: object = None
    psi: Optional[AddChar] = None
    fmt: str = "text"
    eval_s: Optional[Fraction] = None
    flags: tuple = field(default=(), compare=True)

    def descriptor(self) -> ReprDescriptor:
        if self.space is None or self.leaf is None:
            raise CliError(f"action {self.action} needs a space and a representation")
        return ReprDescriptor(self.space, self.tower, self.leaf, self.omega)

    @property
    def psi_or_default(self) -> AddChar:
        return self.psi if self.psi is not None else AddChar()


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, q_override: Optional[int] = None):
        self.text = text
        self.pos = 0
        self.q_override = q_override
        self.q: Optional[int] = q_override
        self.space: Optional[HermSpace] = None

    # position helpers
    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, pos=None):
        raise CliError(msg, *self.where(pos))

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def eat(self, s: str):
        if not self.peek(s):
            got = self.text[self.pos:self.pos + 1] or "end of input"
            self.error(f"expected {s!r}, got {got!r}")
        self.pos += len(s)

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def word(self) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "_-"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a name")
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        try:
            return int(self.text[start:self.pos])
        except ValueError:
            self.error("expected an integer", start)

    def fraction(self) -> Fraction:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] in "+-/"):
            self.pos += 1
        try:
            return Fraction(self.text[start:self.pos])
        except (ValueError, ZeroDivisionError):
            self.error("expected a rational number", start)

    def sign(self) -> int:
        start = self.pos
        v = self.integer()
        if v not in (1, -1):
            self.error("expected +1 or -1", start)
        return v

    def sqclass(self) -> SquareClass:
        self.ws()
        start = self.pos
        w = self.word()
        try:
            return SquareClass.parse(w)
        except ValueError:
            self.error(f"unknown square class {w!r} (use 1, u, pi, upi)", start)

    def balanced(self, stops: str) -> tuple[str, int]:
        """Raw text up to a top-level character in ``stops``."""
        self.ws()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                if depth == 0 and ch in stops:
                    break
                depth -= 1
            elif depth == 0 and ch in stops:
                break
            self.pos += 1
        return self.text[start:self.pos].strip(), start

    def need_q(self):
        if self.q is None:
            self.error("the field clause 'field q=<int>' must come first")
        return self.q

    # values
    def coeff(self, text: str, start: int) -> Coeff:
        q = self.need_q()
        try:
            v = evaluate(text, q)
        except (RatExprError, PoleError, ValueError) as exc:
            self.error(f"bad coefficient {text!r}: {exc}", start)
        if not v.is_constant() or v.is_zero():
            self.error(f"coefficient {text!r} must be a nonzero constant", start)
        return v.constant_value()

    def ratexpr(self, text: str, start: int) -> RationalQS:
        q = self.need_q()
        try:
            return evaluate(text, q)
        except (RatExprError, PoleError, ValueError) as exc:
            self.error(f"bad rational expression: {exc}", start)

    def charexpr(self, ext: Optional[SquareClass]) -> MultChar:
        """``1`` or a product of ``chi(c)``, ``t^{s0=h}``, ``z^{c}``."""
        q = self.need_q()
        quad, z = ONE, Coeff.one(q)
        f = 1 if ext is None else _residue_degree(ext)
        while True:
            self.ws()
            start = self.pos
            if self.peek("chi("):
                self.eat("chi(")
                quad = quad * self.sqclass()
                self.eat(")")
            elif self.peek("t^{"):
                self.eat("t^{")
                self.eat("s0")
                self.eat("=")
                s0 = self.fraction()
                if (2 * s0).denominator != 1:
                    self.error("s0 must be a half-integer", start)
                self.eat("}")
                # |x|^{s0} at a uniformizer of E: q_E^{-s0}
                z = z * q_power(q, int(-2 * s0 * f))
            elif self.peek("z^{"):
                self.eat("z^{")
                text, cstart = self.balanced("}")
                z = z * self.coeff(text, cstart)
                self.eat("}")
            elif self.peek("1"):
                self.eat("1")
            elif any(self.peek(w) for w in ("upi", "u", "pi")):
                quad = quad * self.sqclass()  # bare class: shorthand for chi(<class>)
            else:
                self.error("expected a character: 1, chi(<class>), t^{s0=<h>} or z^{<coeff>}")
            if not self.peek("*"):
                break
            self.eat("*")
        if ext is not None and not quad.is_trivial():
            self.error("rule: characters of E^x are unramified twists; chi(<class>) is not allowed here", start)
        return MultChar(q, quad, z, ext)

    # clauses
    def field_clause(self):
        start = self.pos
        self.eat("q")
        self.eat("=")
        q = self.integer()
        if self.q_override is not None:
            q = self.q_override
        try:
            local_field(q)
        except ValueError as exc:
            self.error(str(exc), start)
        self.q = q

    def space_clause(self):
        q = self.need_q()
        self.ws()
        start = self.pos
        case = self.word()
        if case not in CASES:
            self.error(f"unknown case {case!r} (one of {', '.join(CASES)})", start)
        self.eat("(")
        self.eat("n")
        self.eat("=")
        n = self.integer()
        opts: dict = {}
        while self.peek(","):
            self.eat(",")
            kstart = self.pos
            key = self.word()
            self.eat("=")
            if key in opts:
                self.error(f"duplicate key {key!r}", kstart)
            if key in ("disc",):
                opts[key] = self.sqclass()
            elif key in ("hasse", "eps"):
                opts[key] = self.sign()
            elif key == "E":
                if self.peek("split"):
                    self.eat("split")
                    opts[key] = None
                else:
                    opts[key] = self.sqclass()
            elif key == "quat":
                if self.peek("split"):
                    self.eat("split")
                    opts[key] = None
                else:
                    self.eat("(")
                    a = self.sqclass()
                    self.eat(",")
                    b = self.sqclass()
                    self.eat(")")
                    opts[key] = (a, b)
            else:
                self.error(f"unknown space key {key!r}", kstart)
        self.eat(")")
        try:
            self.space = _make_space(case, n, q, opts)
        except (SpaceError, ValueError) as exc:
            self.error(f"invalid space: {exc}", start)

    def block(self) -> GLBlock:
        self.ws()
        start = self.pos
        kind = self.word()
        self.eat("(")
        m = self.integer()
        self.eat(",")
        if kind == "gl":
            self.eat("chi")
            self.eat("=")
            sp = self.space
            ext = sp.ext if sp is not None and sp.case in ("U", "qGL") else None
            chi = self.charexpr(ext)
            self.eat(")")
            return _mk_block(self, m, CharTwist(chi), start)
        if kind == "gj":
            self.eat("gamma")
            self.eat("=")
            gtext, gs = self.balanced(",")
            g = self.ratexpr(gtext, gs)
            self.eat(",")
            self.eat("dual")
            self.eat("=")
            dtext, ds = self.balanced(",)")
            d = self.ratexpr(dtext, ds)
            sign = 1
            if self.peek(","):
                self.eat(",")
                self.eat("sign")
                self.eat("=")
                sign = self.sign()
            self.eat(")")
            return _mk_block(self, m, AbstractGJ(g, d, "rho", sign), start)
        self.error(f"expected gl(...) or gj(...), got {kind!r}", start)

    def pi(self):
        """Returns (tower, leaf)."""
        self.ws()
        start = self.pos
        if self.peek("ind("):
            self.eat("ind(")
            b = self.block()
            self.eat(",")
            tower, leaf = self.pi()
            self.eat(")")
            return (b,) + tower, leaf
        if self.peek("gl(") or self.peek("gj("):
            return (self.block(),), TrivialGroup()
        w = self.word()
        if w == "minimal":
            return (), MinimalTrivial()
        if w == "trivial":
            return (), TrivialGroup()
        if w == "unramified":
            self.need_q()
            self.eat("(")
            self.eat("satake")
            self.eat("=")
            self.eat("[")
            vals = []
            while not self.peek("]"):
                text, cs = self.balanced(",]")
                vals.append(self.coeff(text, cs))
                if self.peek(","):
                    self.eat(",")
            self.eat("]")
            csign = 1
            if self.peek(","):
                self.eat(",")
                self.eat("csign")
                self.eat("=")
                csign = self.sign()
            self.eat(")")
            return (), Unramified(tuple(vals), csign)
        self.error(f"unknown representation {w!r}", start)

    def omega_clause(self):
        sp = self.space
        start = self.pos
        if self.peek("("):
            self.eat("(")
            w1 = self.charexpr(None)
            self.eat(",")
            w2 = self.charexpr(None)
            self.eat(")")
            omega = (w1, w2)
        else:
            omega = self.charexpr(None)
        if sp is not None:
            paired = sp.case in ("GL", "QGL") or (sp.case in ("U", "qGL") and sp.ext is None)
            if paired != isinstance(omega, tuple):
                want = "a pair (w1, w2)" if paired else "a single character"
                self.error(f"omega target mismatch: rule 'omega target' requires {want} for {sp.label()}", start)
        return omega

    def psi_clause(self) -> AddChar:
        self.eat("level")
        level = self.integer()
        seed = ONE
        if self.peek("seed"):
            self.eat("seed")
            start = self.pos
            seed = self.sqclass()
            if seed.val:
                self.error("the seed is a unit class: 1 or u", start)
        return AddChar(level, seed.nonsquare)

    def action_clause(self):
        self.ws()
        start = self.pos
        act = self.word()
        if act not in ACTIONS:
            self.error(f"unknown action {act!r} (one of {', '.join(ACTIONS)})", start)
        fmt, ev = "text", None
        flags = []
        while self.peek("--"):
            self.eat("--")
            fstart = self.pos
            name = self.word()
            if name == "format":
                f = self.word()
                if f not in FORMATS:
                    self.error(f"unknown format {f!r}", fstart)
                fmt = f
            elif name == "eval":
                self.eat("s")
                self.eat("=")
                ev = self.fraction()
            elif name == "trace":
                flags.append("trace")
            else:
                self.error(f"unknown option --{name}", fstart)
        return act, fmt, ev, tuple(flags)

    def parse(self) -> Request:
        tower, leaf, omega, psi = (), None, None, None
        pi_pos = 0
        seen = set()
        action = None
        while not self.at_end():
            if action is not None:
                self.error("the action must be the last clause")
            start = self.pos
            key = self.word()
            if key in seen:
                self.error(f"duplicate clause {key!r}", start)
            seen.add(key)
            if key == "field":
                if seen - {"field"}:
                    self.error("the field clause must come first", start)
                self.field_clause()
            elif key == "space":
                self.space_clause()
            elif key == "pi":
                self.need_q()
                if self.space is None:
                    self.error("the space clause must precede pi", start)
                self.eat("=")
                pi_pos = self.pos
                tower, leaf = self.pi()
            elif key == "omega":
                self.need_q()
                self.eat("=")
                omega = self.omega_clause()
            elif key == "psi":
                psi = self.psi_clause()
            else:
                self.pos = start
                self.need_q()
                action = self.action_clause()
            if not self.at_end():
                self.eat(";")
        if action is None:
            self.error("missing action")
        if self.q is None:
            self.error("missing field clause")
        act, fmt, ev, flags = action
        req = Request(self.q, act, self.space, tower, leaf, omega, psi, fmt, ev, flags)
        if req.space is not None and req.leaf is not None:
            try:
                req.descriptor()
            except DescriptorError as exc:
                self.error(f"invalid representation: {exc}", pi_pos)
        return req


def _residue_degree(ext: SquareClass) -> int:
    return 1 if ext.val else 2


def _mk_block(p: _Parser, m: int, kind, start: int) -> GLBlock:
    try:
        return GLBlock(m, kind)
    except DescriptorError as exc:
        p.error(str(exc), start)


def _make_space(case: str, n: int, q: int, opts: dict) -> HermSpace:
    ctx = local_field(q)
    ext = opts.get("E")
    quat = opts.get("quat")
    disc = opts.get("disc", ONE)
    hasse = opts.get("hasse", 1)
    if case in ("U", "qGL") and "E" not in opts:
        raise SpaceError(f"case {case} needs E=<class> or E=split")
    if case in QUAT and "quat" not in opts:
        raise SpaceError(f"case {case} needs quat=(a,b) or quat=split")
    if case == "Q1" and "disc" not in opts:
        disc = ONE if n % 2 == 0 else ctx.minus_one
    if case == "U" and "eps" in opts:
        if ext is None:
            raise SpaceError("eps is an invariant only for E a field")
        if "disc" in opts:
            raise SpaceError("give either disc or eps for a unitary space")
        target = opts["eps"]
        disc = next(c for c in SQUARE_CLASSES if hilbert_symbol(ctx, ext, c) == target)
    elif "eps" in opts:
        raise SpaceError(f"eps is not an invariant in case {case}")
    return HermSpace(case, n, q, ext=ext, quat=quat, disc=disc, hasse=hasse)


def parse(text: str, q: Optional[int] = None) -> Request:
    """Parse request text; ``q`` overrides the field clause."""
    return _Parser(text, q).parse()


# -- printer ---------------------------------------------------------------


def _char_text(chi: MultChar) -> str:
    parts = []
    if not chi.quad.is_trivial():
        parts.append(f"chi({chi.quad.name})")
    if not chi.z.is_one():
        parts.append("z^{" + chi.z.to_text() + "}")
    return " * ".join(parts) or "1"


def _space_text(sp: HermSpace) -> str:
    parts = [f"n={sp.n}"]
    if sp.case in ("U", "qGL"):
        parts.append(f"E={sp.ext.name if sp.ext is not None else 'split'}")
    if sp.case in QUAT:
        parts.append("quat=split" if sp.quat is None else f"quat=({sp.quat[0].name},{sp.quat[1].name})")
    if sp.case in ("SO", "Q-1") and not sp.disc.is_trivial():
        parts.append(f"disc={sp.disc.name}")
    if sp.hasse != 1:
        parts.append(f"hasse={sp.hasse}")
    if sp.case == "U" and sp.ext is not None and sp.eps != 1:
        parts.append(f"eps={sp.eps}")
    return f"{sp.case}({', '.join(parts)})"


def _block_text(b: GLBlock) -> str:
    k = b.kind
    if isinstance(k, CharTwist):
        return f"gl({b.m}, chi={_char_text(k.chi)})"
    tail = "" if k.sign == 1 else f", sign={k.sign}"
    return f"gj({b.m}, gamma={k.gamma.to_text()}, dual={k.dual.to_text()}{tail})"


def _leaf_text(leaf) -> str:
    if isinstance(leaf, MinimalTrivial):
        return "minimal"
    if isinstance(leaf, TrivialGroup):
        return "trivial"
    vals = ", ".join(_coeff_text(z) for z in leaf.satake)
    return f"unramified(satake=[{vals}], csign={leaf.csign})"


def _coeff_text(z) -> str:
    return z.to_text() if isinstance(z, Coeff) else str(z)


def format_request(req: Request) -> str:
    """Canonical text of a request."""
    clauses = [f"field q={req.q}"]
    if req.space is not None:
        clauses.append(f"space {_space_text(req.space)}")
    if req.leaf is not None:
        body = _leaf_text(req.leaf)
        for b in reversed(req.tower):
            body = f"ind({_block_text(b)}, {body})"
        clauses.append(f"pi = {body}")
    if req.omega is not None:
        if isinstance(req.omega, tuple):
            clauses.append(f"omega = ({_char_text(req.omega[0])}, {_char_text(req.omega[1])})")
        else:
            clauses.append(f"omega = {_char_text(req.omega)}")
    if req.psi is not None:
        clauses.append(f"psi level {req.psi.level} seed {req.psi.seed.name}")
    act = req.action
    if req.fmt != "text":
        act += f" --format {req.fmt}"
    if req.eval_s is not None:
        act += f" --eval s={req.eval_s}"
    if "trace" in req.flags:
        act += " --trace"
    clauses.append(act)
    return "; ".join(clauses)


# -- running ---------------------------------------------------------------


def _render(name: str, val: RationalQS, fmt: str, eval_s) -> str:
    if fmt == "latex":
        out = f"{name}(s) = {val.to_text(latex=True)}"
    else:
        out = f"{name}(s) = {val.to_text()}"
    if eval_s is not None:
        z = val.eval_numeric(complex(eval_s))
        out += f"\n{name}({eval_s}) ~ {z.real:.12g}{z.imag:+.12g}i"
    return out


_MINIMAL_CASES = (
    ("SOa2/Q-1_1", ("SOa2", "Q-1_1")),
    ("U1", ("U1",)),
    ("Q1_1", ("Q1_1",)),
    ("SOa3", ("SOa3",)),
    ("SOa4", ("SOa4",)),
    ("Ura2", ("Ura2",)),
)


def minimal_spaces(q: int):
    """Every anisotropic minimal space over F, grouped by minimal tag."""
    out: dict = {}
    sq = SQUARE_CLASSES
    cands = []
    for d in sq:
        for h in (1, -1):
            for n in (2, 3, 4):
                cands.append(("SO", n, dict(disc=d, hasse=h)))
            cands.append(("Q-1", 1, dict(disc=d, hasse=h, quat=(U, PI))))
    for e in sq:
        if e.is_trivial():
            continue
        for d in sq:
            cands += [("U", 1, dict(E=e, disc=d)), ("U", 2, dict(E=e, disc=d))]
    cands.append(("Q1", 1, dict(quat=(U, PI))))
    for case, n, opts in cands:
        opts = dict(opts)
        if case == "Q-1":
            opts.pop("hasse")
        try:
            sp = _make_space(case, n, q, opts)
        except (SpaceError, ValueError):
            continue
        if not sp.anisotropic:
            continue
        tag = classify_minimal(sp)
        if tag in MINIMAL_FORMS and sp not in out.setdefault(tag, []):
            out[tag].append(sp)
    return out


def verify_minimal(q: int) -> list[Verdict]:
    spaces = minimal_spaces(q)
    verdicts = []
    for name, tags in _MINIMAL_CASES:
        ok, checked = True, 0
        for tag in tags:
            for sp in spaces.get(tag, []):
                for seed in (0, 1):
                    psi = AddChar(0, seed)
                    g = gamma_minimal(sp, psi).gamma
                    ok &= g == gamma_of_parameter(principal_parameter(sp), psi, q)
                    checked += 1
        verdicts.append(Verdict(ok and checked > 0, name, detail=f"{checked} spaces x seeds"))
    return verdicts


def _minimal_line(v: Verdict) -> str:
    return f"{'EQUAL' if v.ok else 'DIFFER'} {v.name} ({v.detail})"


def check_psi(desc: ReprDescriptor, psi: AddChar, printed: bool = False) -> list[Verdict]:
    base = gamma_of_tower(desc, psi)
    out = []
    for a in (U, PI, UPI):
        moved = gamma_of_tower(desc, psi.rescale(a.val, SquareClass(0, a.nonsquare)))
        expect = psi_rescale(base, desc.space, desc.omega, a.val, SquareClass(0, a.nonsquare), printed).gamma
        ok = moved.gamma == expect
        out.append(Verdict(ok, f"psi-dependence a={a.name}", None if ok else moved.gamma / expect))
    return out


def _suite_descriptors(q: int):
    """A fixed battery of descriptors covering every case tag."""
    one = MultChar.trivial(q)
    tw = MultChar.unramified(q, Coeff(q, 2))
    out = [
        ReprDescriptor(HermSpace("GL", 2, q), (GLBlock(1, CharTwist(tw)), GLBlock(1, CharTwist(MultChar.quadratic(q, PI)))),
                       TrivialGroup()),
        ReprDescriptor(HermSpace("Sp", 4, q), (GLBlock(1, CharTwist(MultChar.quadratic(q, U))),), Unramified((Coeff(q, 3),))),
        ReprDescriptor(HermSpace("Sp", 2, q), (GLBlock(1, CharTwist(tw)),), MinimalTrivial()),
        ReprDescriptor(HermSpace("U", 3, q, ext=U), (GLBlock(1, CharTwist(MultChar.unramified(q, 5, U))),), MinimalTrivial()),
        ReprDescriptor(HermSpace("U", 2, q, ext=PI), (GLBlock(1, CharTwist(MultChar.unramified(q, 3, PI))),), MinimalTrivial()),
        ReprDescriptor(HermSpace("qGL", 1, q, ext=U, quat=(U, PI)), (GLBlock(1, CharTwist(MultChar.unramified(q, 2, U))),),
                       TrivialGroup(), one),
        ReprDescriptor(HermSpace("QGL", 1, q, quat=(U, PI)), (GLBlock(1, CharTwist(tw)),), TrivialGroup()),
        ReprDescriptor(HermSpace("Q1", 2, q, quat=(U, PI)), (GLBlock(1, CharTwist(tw)),), MinimalTrivial()),
        ReprDescriptor(HermSpace("Q-1", 2, q, quat=(U, PI), disc=U), (GLBlock(1, CharTwist(tw)),), MinimalTrivial()),
        ReprDescriptor(HermSpace("Q1", 1, q), (GLBlock(1, CharTwist(tw)),), TrivialGroup()),
        ReprDescriptor(HermSpace("SO", 5, q), (GLBlock(2, CharTwist(tw)),), MinimalTrivial()),
    ]
    return out


def verify_all(q: int) -> list[Verdict]:
    verdicts = list(verify_minimal(q))
    for desc in _suite_descriptors(q):
        for psi in (AddChar(0, 0), AddChar(1, 1)):
            v = check_functional_equation(desc, psi)
            verdicts.append(Verdict(v.ok, f"functional-equation {desc.space.label()} level {psi.level}", v.residual))
        for v in check_psi(desc, AddChar()):
            verdicts.append(Verdict(v.ok, f"{v.name} {desc.space.label()}", v.residual))
        res = gamma_of_tower(desc, AddChar())
        if res.eps is not None:
            verdicts.append(Verdict(res.eps.is_monomial() and res.consistent(), f"eps-monomial {desc.space.label()}"))
    return verdicts


def run(req: Request) -> tuple[str, int]:
    """Evaluate a request; returns (output, exit code)."""
    trace = "trace" in req.flags
    try:
        if req.action in ("verify-minimal", "verify-all"):
            vs = verify_minimal(req.q) if req.action == "verify-minimal" else verify_all(req.q)
            ok = all(v.ok for v in vs)
            if req.fmt == "json":
                body = {"version": 1, "request": format_request(req),
                        "verdicts": [{"name": v.name, "ok": v.ok} for v in vs]}
                return json.dumps(body, sort_keys=True), 0 if ok else 1
            lines = [_minimal_line(v) if req.action == "verify-minimal" else v.line() for v in vs]
            return "\n".join(lines), 0 if ok else 1
        desc = req.descriptor()
        psi = req.psi_or_default
        if req.action == "check-fe":
            vs = [check_functional_equation(desc, psi)]
        elif req.action == "check-psi":
            vs = check_psi(desc, psi)
        else:
            vs = None
        if vs is not None:
            ok = all(v.ok for v in vs)
            if req.fmt == "json":
                body = {"version": 1, "request": format_request(req),
                        "verdicts": [{"name": v.name, "ok": v.ok} for v in vs]}
                return json.dumps(body, sort_keys=True), 0 if ok else 1
            return "\n".join(v.line() for v in vs), 0 if ok else 1
        res = gamma_of_tower(desc, psi)
        if req.fmt == "json":
            body = {"version": 1, "request": format_request(req), "result": res.to_json_obj()}
            if req.eval_s is not None:
                z = res.gamma.eval_numeric(complex(req.eval_s))
                body["eval"] = {"s": str(req.eval_s), "gamma": [z.real, z.imag]}
            return json.dumps(body, sort_keys=True), 0
        val = {"gamma": res.gamma, "L": res.L, "eps": res.eps}[req.action]
        if val is None:
            raise CliError(f"{req.action} is not available for this representation (abstract GL data)")
        out = _render(req.action, val, req.fmt, req.eval_s)
        if trace:
            out += "\n" + "\n".join(f"  trace: {t}" for t in res.trace)
        return out, 0
    except (DescriptorError, SpaceError, CliError, PoleError) as exc:
        return f"error: {exc}", 2


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="doubling-gamma", description="Doubling gamma factors from a request string.")
    ap.add_argument("request", nargs="*", help="request text (read from stdin when absent)")
    ap.add_argument("--q", type=int, help="override the residue field size")
    ap.add_argument("--trace", action="store_true", help="print provenance")
    ap.add_argument("--tolerance", type=float, default=1e-9, help="tolerance for numeric oracles")
    ap.add_argument("--format", choices=FORMATS, help="output format")
    args = ap.parse_args(argv)
    text = " ".join(args.request) if args.request else sys.stdin.read()
    try:
        req = parse(text, args.q)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    flags = set(req.flags)
    if args.trace:
        flags.add("trace")
    req = Request(req.q, req.action, req.space, req.tower, req.leaf, req.omega, req.psi,
                  args.format or req.fmt, req.eval_s, tuple(sorted(flags)))
    out, code = run(req)
    print(out, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
