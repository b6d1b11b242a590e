"""Doubling gamma factors of representation descriptors.

A representation is described by a tower of GL blocks over a base leaf;
gamma is assembled by multiplicativity from Godement-Jacquet factors of the
blocks and the gamma factor of the leaf.  Every value is an exact RationalQS
in ``X = q^{-s}``.

Conventions for the twisting character ``omega``:

* GL, QGL: a pair ``(omega1, omega2)`` of characters of ``F^x``.
* U, qGL: ``omega = omega_F o N_{E/F}`` for an unramified ``omega_F``; it may
  be given as that F-character or as an unramified character of ``E^x`` when
  ``E/F`` is ramified.
* SO, Sp, Q1, Q-1: a character of ``F^x``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

from .exactnum import Coeff, RationalQS, product, q_power
from .localfield import ONE, PI, AddChar, MultChar, SquareClass, chi_eval, dual_psi, hilbert_symbol
from .params import (
    PRINTED_CLOSED_FORMS,
    StdParameter,
    L_of_parameter,
    _shifts,
    gamma_of_parameter,
    principal_parameter,
)
from .spaces import (
    GL_TYPE,
    NOT_MINIMAL,
    QUAT,
    DoublingNilpotent,
    HermSpace,
    SpaceError,
    classify_minimal,
    disc_of_nilpotent,
    std_dimension,
)
from .tate import tate_eps, tate_gamma, tate_L

__all__ = [
    "CharTwist",
    "AbstractGJ",
    "GLBlock",
    "MinimalTrivial",
    "Unramified",
    "TrivialGroup",
    "ReprDescriptor",
    "GammaResult",
    "DescriptorError",
    "Verdict",
    "correction_R",
    "gamma_minimal",
    "gamma_minimal_printed",
    "gamma_unramified",
    "gamma_gl_block",
    "gamma_of_tower",
    "psi_rescale",
    "t_factor",
    "check_functional_equation",
    "central_sign",
    "big_gamma",
    "split_rewrite",
    "dual_descriptor",
    "MINIMAL_FORMS",
    "PRINTED_MINIMAL_FORMS",
]


class DescriptorError(ValueError):
    pass


# -- descriptors ---------------------------------------------------------


@dataclass(frozen=True)
class CharTwist:
    """chi o det (chi o Nrd over D); chi is a character of E^x in the U/qGL cases."""

    chi: MultChar


@dataclass(frozen=True)
class AbstractGJ:
    """A GL-block with user-supplied Godement-Jacquet data.

    ``gamma`` is gamma(s, rho, psi), ``dual`` is gamma(s, rho^v, psi^{-1}) and
    ``sign`` is the central sign rho(-1).
    """

    gamma: RationalQS
    dual: RationalQS
    label: str = "rho"
    sign: int = 1


@dataclass(frozen=True)
class GLBlock:
    m: int
    kind: Union[CharTwist, AbstractGJ]

    def __post_init__(self):
        if self.m < 1:
            raise DescriptorError("GL blocks have rank >= 1")


@dataclass(frozen=True)
class MinimalTrivial:
    """The trivial representation of an anisotropic minimal (or zero) space."""


@dataclass(frozen=True)
class Unramified:
    """Spherical representation with Satake values ``z_1..z_r`` of the leaf space."""

    satake: tuple
    csign: int = 1


@dataclass(frozen=True)
class TrivialGroup:
    """Leaf of rank zero: the group is trivial (or GL_0)."""


Leaf = Union[MinimalTrivial, Unramified, TrivialGroup]


@dataclass(frozen=True)
class ReprDescriptor:
    space: HermSpace
    tower: tuple = ()
    leaf: Leaf = MinimalTrivial()
    omega: object = None
    csign: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "tower", tuple(self.tower))
        if self.omega is None:
            object.__setattr__(self, "omega", default_omega(self.space))
        _check_omega(self.space, self.omega)
        self.leaf_space()  # rank bookkeeping

    def leaf_space(self) -> HermSpace:
        """The space left after the GL blocks; the natural space in split cases."""
        sp = self.space
        used = sum(b.m for b in self.tower)
        if sp.is_split:
            # blocks GL_m(D) of a split quaternionic case are GL_{2m}(F); in the
            # split U/qGL cases the blocks are given on the natural GL_n(F)
            sp = sp.natural()
            if self.space.case in QUAT:
                used *= 2
        try:
            return sp.peel(used)
        except SpaceError as exc:
            raise DescriptorError(f"tower ranks exceed the Witt index: {exc}") from None

    def label(self) -> str:
        blocks = ", ".join(_block_label(b) for b in self.tower)
        return f"{self.space.label()} [{blocks}] / {type(self.leaf).__name__}"


def _block_label(b: GLBlock) -> str:
    if isinstance(b.kind, CharTwist):
        return f"GL{b.m}({b.kind.chi.label()})"
    return f"GL{b.m}({b.kind.label})"


def default_omega(space: HermSpace):
    one = MultChar.trivial(space.q)
    if space.case in ("GL", "QGL") or (space.case in ("U", "qGL") and space.ext is None):
        return (one, one)
    return one


def _check_omega(space: HermSpace, omega):
    if space.case in ("GL", "QGL"):
        if not (isinstance(omega, tuple) and len(omega) == 2 and all(isinstance(w, MultChar) and w.ext is None for w in omega)):
            raise DescriptorError(f"case {space.case}: omega is a pair of characters of F^x")
        return
    if space.case in ("U", "qGL") and space.ext is None:
        if not (isinstance(omega, tuple) and len(omega) == 2 and all(isinstance(w, MultChar) and w.ext is None for w in omega)):
            raise DescriptorError(f"split {space.case}: omega is a pair of characters of F^x")
        return
    if not isinstance(omega, MultChar):
        raise DescriptorError(f"case {space.case}: omega is a single character")
    if space.case in ("U", "qGL"):
        _omega_F(space, omega)
    elif omega.ext is not None:
        raise DescriptorError(f"case {space.case}: omega is a character of F^x")


def _omega_F(space: HermSpace, omega: MultChar) -> MultChar:
    """omega_F with omega = omega_F o N_{E/F} (U and qGL cases)."""
    if space.ext is None:
        return omega
    if omega.ext is None:
        if omega.is_ramified:
            raise DescriptorError("omega_F must be unramified in the U/qGL cases")
        return omega
    if omega.ext != space.ext:
        raise DescriptorError("omega lives on a different extension")
    if space.ext_info.ramified:
        return MultChar.unramified(space.q, omega.z)
    raise DescriptorError("for unramified E give omega as the F-character omega_F")


def _omega_E(space: HermSpace, omega: MultChar) -> MultChar:
    w = _omega_F(space, omega)
    return MultChar.unramified(space.q, w.z ** space.ext_info.f, space.ext)


def omega_pair(space: HermSpace, omega):
    """(omega1, omega2) as used by the GL-block rule."""
    if isinstance(omega, tuple):
        return omega
    if space.case in ("U", "qGL") and space.ext is not None:
        w = _omega_E(space, omega)
        return (w, w)
    return (omega, omega)


# -- results -------------------------------------------------------------


@dataclass(frozen=True)
class GammaResult:
    gamma: RationalQS
    L: Optional[RationalQS] = None
    L_dual: Optional[RationalQS] = None
    eps: Optional[RationalQS] = None
    trace: tuple = ()

    def __mul__(self, other: "GammaResult") -> "GammaResult":
        def mul(a, b):
            return None if a is None or b is None else a * b

        return GammaResult(
            self.gamma * other.gamma,
            mul(self.L, other.L),
            mul(self.L_dual, other.L_dual),
            mul(self.eps, other.eps),
            self.trace + other.trace,
        )

    def with_trace(self, *entries) -> "GammaResult":
        return replace(self, trace=self.trace + tuple(entries))

    def consistent(self) -> bool:
        """gamma = eps * L_dual(1-s) / L(s) when the compositional data exist."""
        if self.L is None or self.eps is None or self.L_dual is None:
            return True
        return self.gamma == self.eps * self.L_dual.reflect() / self.L

    def to_json_obj(self) -> dict:
        def enc(v):
            return None if v is None else v.to_json_obj()

        return {
            "version": 1,
            "gamma": enc(self.gamma),
            "L": enc(self.L),
            "L_dual": enc(self.L_dual),
            "eps": enc(self.eps),
            "trace": list(self.trace),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GammaResult":
        def dec(v):
            return None if v is None else RationalQS.from_json_obj(v)

        return cls(dec(obj["gamma"]), dec(obj["L"]), dec(obj["L_dual"]), dec(obj["eps"]), tuple(obj["trace"]))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _from_gamma_and_L(gamma: RationalQS, L: RationalQS, L_dual: RationalQS, trace) -> GammaResult:
    eps = gamma * L / L_dual.reflect()
    return GammaResult(gamma, L, L_dual, eps, tuple(trace))


def _result_from_parameter(par: StdParameter, psi: AddChar, q: int, gamma: RationalQS | None, trace) -> GammaResult:
    g = gamma_of_parameter(par, psi, q) if gamma is None else gamma
    return _from_gamma_and_L(g, L_of_parameter(par, q), L_of_parameter(par.dual(), q), trace)


# -- small helpers -------------------------------------------------------


def _omega_s_inv(omega: MultChar, val: int, cls: SquareClass) -> RationalQS:
    """omega_s(x)^{-1} = omega(x)^{-1} |x|^{-s} for x of valuation val and unit class cls."""
    q = omega.q
    unit = SquareClass(0, cls.nonsquare)
    w = chi_eval(omega, val, unit)
    return RationalQS.monomial(q, w.inverse(), -val)


def eps_at_half(chi: MultChar, psi: AddChar) -> Coeff:
    """epsilon(1/2, chi, psi) as an exact constant."""
    c, m = tate_eps(chi, psi).monomial_parts()
    return c * q_power(chi.q, -m)


# -- correction term ------------------------------------------------------


def correction_R(space: HermSpace, omega, A: DoublingNilpotent, psi: AddChar) -> RationalQS:
    """The normalizing factor R(s, omega, A, psi) turning Gamma into gamma."""
    q, ctx, case = space.q, space.ctx, space.case
    if omega is None:
        omega = default_omega(space)
    odd_so = case == "SO" and space.n % 2 == 1
    if A.corank_one != odd_so:
        raise SpaceError("A must have corank one exactly in the odd orthogonal case")
    nv = SquareClass(A.val % 2, A.cls.nonsquare)
    if case in ("GL", "QGL"):
        w1, w2 = omega
        return _omega_s_inv(w1, A.val, A.cls) * _omega_s_inv(w2, A.val2, A.cls2)
    if case == "qGL":
        # omega_s(N(A/2)) omega_s(N(-A/2)^*); both norms are stored over F
        w = _omega_F(space, omega) if not isinstance(omega, tuple) else omega[0]
        return _omega_s_inv(w, A.val, A.cls) * _omega_s_inv(w, A.val2, A.cls2)
    if case in ("Sp", "Q1"):
        disc_a = disc_of_nilpotent(ctx, space.n, nv)
        chi = MultChar.quadratic(q, disc_a)
        g = tate_gamma(omega * chi, psi).shift(Fraction(1, 2))
        return _omega_s_inv(omega, A.val, A.cls) * g / RationalQS.constant(q, eps_at_half(chi, psi))
    if case == "U":
        w = _omega_F(space, omega)
        return _omega_s_inv(w, A.val, A.cls) * RationalQS.constant(q, space.eps)
    if odd_so:
        return _omega_s_inv(omega, A.val, A.cls) * RationalQS.constant(q, space.hasse)
    # even SO, Q-1
    chi = MultChar.quadratic(q, space.disc)
    return _omega_s_inv(omega, A.val, A.cls) * RationalQS.constant(q, eps_at_half(chi, psi))


# -- psi dependence -------------------------------------------------------


def _omega_F_content(space: HermSpace, omega, a_val: int, a_unit: SquareClass) -> Coeff:
    """The character part of omega_{s-1/2}(a)^N (or ^{N/2} for pairs)."""
    q = space.q
    N = std_dimension(space)
    if isinstance(omega, tuple):
        w1, w2 = omega
        c = chi_eval(w1, a_val, a_unit) * chi_eval(w2, a_val, a_unit)
        return c ** (N // 2)
    if space.case in ("U", "qGL"):
        w = _omega_F(space, omega)
    else:
        w = omega
    return chi_eval(w, a_val, a_unit) ** N


def t_factor(space: HermSpace, omega, a_val: int, a_unit: SquareClass = ONE, printed: bool = False) -> RationalQS:
    """T_N(s, omega, a) for a of valuation ``a_val`` and unit class ``a_unit``.

    The absolute value is |.|_F in every row, so each row reads
    omega_F(a)^N |a|^{N(s-1/2)} times the quadratic factor.  With
    ``printed=False`` two refinements are applied: the odd orthogonal case
    carries no chi_{disc V}(a), and the unitary case with n odd carries
    chi_E(a).  Both follow from the minimal-case formulas.
    """
    q, ctx = space.q, space.ctx
    if omega is None:
        omega = default_omega(space)
    N = std_dimension(space)
    a_cls = SquareClass(a_val % 2, a_unit.nonsquare)
    c = _omega_F_content(space, omega, a_val, a_unit)
    # |a|^{N(s - 1/2)} = q^{N a_val / 2} X^{N a_val}
    mono = RationalQS.monomial(q, c * q_power(q, N * a_val), N * a_val)
    sign = 1
    if space.case == "SO" or space.case == "Q-1":
        if printed or space.case == "Q-1" or space.n % 2 == 0:
            sign = hilbert_symbol(ctx, space.disc, a_cls)
    if space.case == "U" and space.ext is not None and not printed and space.n % 2 == 1:
        sign = hilbert_symbol(ctx, space.ext, a_cls)
    return mono if sign == 1 else -mono


def psi_rescale(result: GammaResult, space: HermSpace, omega, a_val: int, a_unit: SquareClass = ONE,
                printed: bool = False) -> GammaResult:
    T = t_factor(space, omega, a_val, a_unit, printed)
    eps = None if result.eps is None else result.eps * T
    return GammaResult(result.gamma * T, result.L, result.L_dual, eps,
                       result.trace + (f"[psi] psi -> psi_a, a = ({a_val}, {a_unit.name}): T_N = {T.to_text()}",))


# -- minimal cases -------------------------------------------------------

# gamma(s + 1/2, 1_V x 1, psi) in the minimal cases, psi of level 0.
PRINTED_MINIMAL_FORMS = {
    "SOa2": "zetaE(-s+1/2, disc)/zetaE(s+1/2, disc) * eps(s+1/2, disc)",
    "Q-1_1": "zetaE(-s+1/2, disc)/zetaE(s+1/2, disc) * eps(s+1/2, disc)",
    "U1": "zetaE(-s+1/2, E)/zetaE(s+1/2, E) * eps(s+1/2, E)",
    "Q1_1": "zeta(-s+3/2)/zeta(s+3/2) * zeta(-s+1/2)/zeta(s+1/2) * zeta(-s-1/2)/zeta(s-1/2)",
    "SOa3": "zeta(-s)/zeta(s) * zeta(-s+1)/zeta(s+1)",
    "SOa4": "zeta(-s+3/2)/zeta(s+3/2) * zeta(-s+1/2)/zeta(s+1/2) * zeta(-s-1/2)/zeta(s-1/2)",
    "Ura2": "gamma(s, 1) * gamma(s, E) * gamma(s+1, 1) * gamma(s+1, E)",
}

# The anisotropic quaternary form has parameter r_3 + r_1, so the middle
# ratio appears squared (as in the closed form for r_3 + r_1).
MINIMAL_FORMS = dict(PRINTED_MINIMAL_FORMS)
MINIMAL_FORMS["SOa4"] = PRINTED_CLOSED_FORMS["SOa4"]


def _minimal_chars(space: HermSpace) -> dict:
    q = space.q
    chars = {"disc": MultChar.quadratic(q, space.disc)}
    if space.ext is not None:
        chars["E"] = MultChar.quadratic(q, space.ext)
    return chars


def _eval_minimal(space: HermSpace, psi0: AddChar, forms: dict) -> RationalQS:
    from .ratexpr import evaluate

    tag = classify_minimal(space)
    return evaluate(forms[tag], space.q, psi0, _minimal_chars(space)).shift(Fraction(-1, 2))


def gamma_minimal_printed(space: HermSpace, psi: AddChar) -> RationalQS:
    """The minimal-case formula exactly as printed (psi of level 0)."""
    tag = classify_minimal(space)
    if tag not in PRINTED_MINIMAL_FORMS:
        raise SpaceError(f"{space.label()} has no printed minimal formula")
    return _eval_minimal(space, AddChar(0, psi.seed_nonsquare), PRINTED_MINIMAL_FORMS)


def gamma_minimal(space: HermSpace, psi: AddChar) -> GammaResult:
    """gamma(s, 1_V x 1, psi) for a minimal or trivial space."""
    tag = classify_minimal(space)
    if tag == NOT_MINIMAL:
        raise SpaceError(f"{space.label()} is not a minimal case")
    q = space.q
    par = principal_parameter(space)
    if tag == "trivial":
        trace = [f"trivial group, N = {par.N}: gamma of the parameter {par.label()}"]
        return _result_from_parameter(par, psi, q, None, trace)
    psi0 = AddChar(0, psi.seed_nonsquare)
    g = _eval_minimal(space, psi0, MINIMAL_FORMS)
    trace = [f"minimal case {tag}: {MINIMAL_FORMS[tag]} at s -> s - 1/2"]
    if psi.level:
        T = t_factor(space, default_omega(space), psi.level, ONE)
        g = g * T
        trace.append(f"[psi] level {psi.level}: T_N = {T.to_text()}")
    return _result_from_parameter(par, psi, q, g, trace)


def _twist_leaf(res: GammaResult, y: Coeff, label: str) -> GammaResult:
    """Unramified twist omega = |.|^{s0} with q^{-s0} = y: X -> y X."""
    if y.is_one():
        return res

    def sc(v):
        return None if v is None else v.scale(y)

    L_dual = None if res.L_dual is None else res.L_dual.scale(y.inverse())
    return GammaResult(res.gamma.scale(y), sc(res.L), L_dual, sc(res.eps),
                       res.trace + (f"[twist] unramified twist by {label}",))


def _leaf_omega_z(space: HermSpace, omega) -> Coeff:
    """Value y = omega_F(pi) for an unramified omega at a leaf."""
    if isinstance(omega, tuple):
        raise DescriptorError("GL-type leaves are trivial")
    w = _omega_F(space, omega) if space.case in ("U", "qGL") else omega
    if w.is_ramified:
        raise DescriptorError("only unramified omega is supported at minimal leaves")
    return w.z


# -- unramified leaves ---------------------------------------------------


def _coeff(q, z) -> Coeff:
    return z if isinstance(z, Coeff) else Coeff(q, z)


def unramified_parameter(space: HermSpace, satake) -> StdParameter:
    """std o (Satake parameter) as a sum of unramified characters."""
    q = space.q
    zs = [_coeff(q, z) for z in satake]
    r = space.witt_index()
    if len(zs) != r:
        raise DescriptorError(f"{space.label()} needs {r} Satake values, got {len(zs)}")
    one = MultChar.trivial(q)
    summ = []
    if space.case in ("Sp", "SO"):
        if space.case == "SO" and space.kernel_dim() > 2:
            raise DescriptorError("unramified leaves need a quasi-split space")
        for z in zs:
            summ += [(1, MultChar.unramified(q, z)), (1, MultChar.unramified(q, z.inverse()))]
        if space.case == "Sp":
            summ.append((1, one))
        elif space.kernel_dim() == 2:
            if space.disc.val:
                raise DescriptorError("unramified leaves need an unramified discriminant")
            summ += [(1, one), (1, MultChar.quadratic(q, space.disc))]
        elif space.kernel_dim() == 1:
            pass
        return StdParameter.of(q, summ)
    if space.case == "U":
        if space.ext is None or space.ext_info.ramified or space.kernel_dim() == 2:
            raise DescriptorError("unramified leaves need a quasi-split unramified unitary space")
        for z in zs:
            summ += [(1, MultChar.unramified(q, z, space.ext)), (1, MultChar.unramified(q, z.inverse(), space.ext))]
        if space.n % 2:
            summ += [(1, one), (1, MultChar.quadratic(q, space.ext))]
        return StdParameter.of(q, summ)
    raise DescriptorError(f"no unramified leaves in case {space.case}")


def gamma_unramified(space: HermSpace, satake, omega, psi: AddChar) -> GammaResult:
    """The standard L-ratio (times the epsilon of psi) of a spherical representation."""
    par = unramified_parameter(space, satake)
    if omega is None:
        omega = default_omega(space)
    y = _leaf_omega_z(space, omega)
    q = space.q
    if space.case == "U":
        yE = y ** space.ext_info.f
        summ = [(m, chi.twist(yE) if chi.ext is not None else chi.twist(y)) for m, chi in par.summands]
        # Ind(1) + ... twisted by omega_F: 1 -> omega_F, chi_E -> chi_E omega_F
    else:
        summ = [(m, chi.twist(y)) for m, chi in par.summands]
    par = StdParameter.of(q, summ)
    trace = [f"[unramified] L-ratio of {par.label()}"]
    return _result_from_parameter(par, psi, q, None, trace)


# -- GL blocks ------------------------------------------------------------


def _block_shifts(space: HermSpace, m: int):
    # a block GL_m(D) of a quaternionic case has parameter sum_j r_2 x |.|^{m-1-2j},
    # whose shifts coincide with those of GL_{2m}
    if space.case in QUAT:
        return _shifts(2 * m)
    return _shifts(m)


def gamma_gl_block(block: GLBlock, omega, psi: AddChar, space: HermSpace) -> GammaResult:
    """gamma^{GJ}(s, pi x omega1) gamma^{GJ}(s, pi* x omega2) for one block."""
    q = space.q
    w1, w2 = omega_pair(space, omega)
    kind = block.kind
    shifts = _block_shifts(space, block.m)
    if isinstance(kind, CharTwist):
        chi = kind.chi
        if space.case in ("U", "qGL") and space.ext is not None:
            if chi.ext != space.ext:
                raise DescriptorError("blocks of the U/qGL cases carry characters of E^x")
        elif chi.ext is not None:
            raise DescriptorError(f"blocks of case {space.case} carry characters of F^x")
        c1, c2 = chi * w1, chi.inverse() * w2
        gam, L, Ld, eps = [], [], [], []
        for c in (c1, c2):
            for t in shifts:
                gam.append(tate_gamma(c, psi).shift(t))
                L.append(tate_L(c).shift(t))
                Ld.append(tate_L(c.inverse()).shift(-t))
                eps.append(tate_eps(c, psi).shift(t))
        return GammaResult(product(gam, q), product(L, q), product(Ld, q), product(eps, q),
                           (f"[block] GL block {_block_label(block)}: Tate factors at shifts {[str(t) for t in shifts]}",))
    # abstract Godement-Jacquet data
    ys = []
    for w in (w1, w2):
        if w.is_ramified:
            raise DescriptorError("abstract GL blocks only take unramified omega")
        ys.append(w.z)
    g = kind.gamma.scale(ys[0]) * (kind.dual * RationalQS.constant(q, kind.sign)).scale(ys[1])
    return GammaResult(g, trace=(f"[block] GL block {kind.label}: stored Godement-Jacquet data",))


# -- towers ---------------------------------------------------------------


def gamma_leaf(desc: ReprDescriptor, psi: AddChar) -> GammaResult:
    leaf_sp = desc.leaf_space()
    leaf = desc.leaf
    omega = desc.omega
    if isinstance(leaf, TrivialGroup) or (isinstance(leaf, MinimalTrivial) and leaf_sp.n == 0):
        if leaf_sp.n != 0:
            raise DescriptorError("TrivialGroup leaf needs rank zero")
        if leaf_sp.case in GL_TYPE:
            return GammaResult(RationalQS.one(leaf_sp.q), RationalQS.one(leaf_sp.q), RationalQS.one(leaf_sp.q),
                               RationalQS.one(leaf_sp.q), ("GL_0 leaf: gamma = 1",))
        # N = 1 for Sp(0), Q1(0): parameter omega
        N = std_dimension(leaf_sp)
        q = leaf_sp.q
        if N == 0:
            one = RationalQS.one(q)
            return GammaResult(one, one, one, one, ("zero space, N = 0: gamma = 1",))
        par = StdParameter.of(q, [(1, omega)])
        return _result_from_parameter(par, psi, q, None, [f"trivial group, N = 1: gamma(s, {omega.label()})"])
    if isinstance(leaf, Unramified):
        return gamma_unramified(leaf_sp, leaf.satake, omega, psi)
    if leaf_sp.case in GL_TYPE:
        raise DescriptorError("GL-type towers end in the trivial group")
    if not leaf_sp.anisotropic or classify_minimal(leaf_sp) == NOT_MINIMAL:
        raise DescriptorError(f"leaf space {leaf_sp.label()} is not a minimal case")
    res = gamma_minimal(leaf_sp, psi)
    y = _leaf_omega_z(leaf_sp, omega)
    return _twist_leaf(res, y, omega.label())


def gamma_of_tower(desc: ReprDescriptor, psi: AddChar) -> GammaResult:
    """gamma by multiplicativity: GL blocks times the leaf."""
    if desc.space.is_split:
        return split_rewrite(desc, psi)
    res = gamma_leaf(desc, psi)
    for b in reversed(desc.tower):
        res = gamma_gl_block(b, desc.omega, psi, desc.space) * res
    return res.with_trace(f"[tower] multiplicativity over {desc.label()}")


# -- split cases ----------------------------------------------------------


def _natural_block(desc: ReprDescriptor, b: GLBlock) -> GLBlock:
    if desc.space.case in QUAT:
        # GL_m(M_2(F)) = GL_{2m}(F), Nrd = det
        return GLBlock(2 * b.m, b.kind)
    return b


def split_rewrite(desc: ReprDescriptor, psi: AddChar) -> GammaResult:
    """Compute gamma of a split case on the natural space over F."""
    sp = desc.space
    if not sp.is_split:
        raise DescriptorError("split_rewrite needs split algebra data")
    nat = sp.natural()
    tower = tuple(_natural_block(desc, b) for b in desc.tower)
    if sp.case == "qGL":
        w1, w2 = desc.omega
        a = gamma_of_tower(ReprDescriptor(nat, tower, TrivialGroup(), (w1, w2)), psi)
        b = gamma_of_tower(ReprDescriptor(nat, tower, TrivialGroup(), (w2, w1)), psi)
        return (a * b).with_trace("[split] split qGL: product of two GL factors with swapped omega")
    if sp.case == "U":
        omega = desc.omega
        nd = ReprDescriptor(nat, tower, TrivialGroup(), omega)
        return gamma_of_tower(nd, psi).with_trace("[split] split U: GL_n(F)")
    if sp.case == "QGL":
        nd = ReprDescriptor(nat, tower, TrivialGroup(), desc.omega)
        return gamma_of_tower(nd, psi).with_trace("[split] split QGL: GL_2n(F)")
    nd = ReprDescriptor(nat, tower, desc.leaf, desc.omega)
    if sp.case == "Q-1" and isinstance(desc.leaf, MinimalTrivial):
        leaf = nd.leaf_space()
        if leaf.n and classify_minimal(leaf) == NOT_MINIMAL:
            raise DescriptorError(f"natural leaf {leaf.label()} is not minimal")
    return gamma_of_tower(nd, psi).with_trace(f"[split] split {sp.case}: natural space {nat.label()}")


# -- functional equation --------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    name: str
    residual: Optional[RationalQS] = None
    detail: str = ""

    def line(self) -> str:
        tail = "" if self.ok else f" residual {self.residual.to_text() if self.residual is not None else '?'}"
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tail}"


def _dual_kind(kind):
    if isinstance(kind, CharTwist):
        return CharTwist(kind.chi.inverse())
    return AbstractGJ(kind.dual, kind.gamma, kind.label + "^v", kind.sign)


def dual_descriptor(desc: ReprDescriptor) -> ReprDescriptor:
    """pi^v x omega^{-1}."""
    om = desc.omega
    om_inv = tuple(w.inverse() for w in om) if isinstance(om, tuple) else om.inverse()
    leaf = desc.leaf
    if isinstance(leaf, Unramified):
        leaf = Unramified(tuple(_coeff(desc.space.q, z).inverse() for z in leaf.satake), leaf.csign)
    tower = tuple(GLBlock(b.m, _dual_kind(b.kind)) for b in desc.tower)
    return ReprDescriptor(desc.space, tower, leaf, om_inv, desc.csign)


def check_functional_equation(desc: ReprDescriptor, psi: AddChar) -> Verdict:
    g = gamma_of_tower(desc, psi).gamma
    gd = gamma_of_tower(dual_descriptor(desc), dual_psi(desc.space.ctx, psi)).gamma
    prod = g * gd.reflect()
    return Verdict(prod.is_one(), "functional-equation", None if prod.is_one() else prod)


# -- central sign and the un-normalized factor ------------------------------


def central_sign(desc: ReprDescriptor) -> int:
    """c_pi(-1); the stored value wins, otherwise it is read off the blocks."""
    if desc.csign is not None:
        return desc.csign
    sign = desc.leaf.csign if isinstance(desc.leaf, Unramified) else 1
    sp = desc.space
    for b in desc.tower:
        if isinstance(b.kind, AbstractGJ):
            sign *= b.kind.sign
        elif sp.case in QUAT or b.kind.chi.ext is not None:
            continue  # Nrd(-1) = 1; unramified characters of E^x are trivial on -1
        else:
            sign *= b.kind.chi.value_at_minus_one() ** b.m
    return sign


def big_gamma(desc: ReprDescriptor, A: DoublingNilpotent, psi: AddChar) -> RationalQS:
    """Gamma^V(s, pi, omega, A, psi) = gamma(s + 1/2) / (c_pi(-1) R(s))."""
    g = gamma_of_tower(desc, psi).gamma.shift(Fraction(1, 2))
    R = correction_R(desc.space, desc.omega, A, psi)
    return g / (R * RationalQS.constant(desc.space.q, central_sign(desc)))
