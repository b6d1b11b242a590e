"""Standard parameters sum r_m (x) chi and their gamma/L factors.

A summand ``(m, chi)`` with ``chi`` a character of ``F^x`` is ``r_m (x) chi``
with ``r_m`` expanded as ``chi |.|^{(m-1)/2 - j}``, ``j = 0..m-1``.  A summand
whose character lives on ``E^x`` stands for ``r_m (x) Ind_{W_E}^{W_F} chi``;
its gamma factor is ``lambda(E/F, psi) * gamma_E(s, chi, psi o Tr)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactnum import RationalQS, product
from .localfield import AddChar, MultChar
from .spaces import HermSpace, SpaceError, classify_minimal, std_dimension, NOT_MINIMAL
from .tate import tate_eps, tate_gamma, tate_L

__all__ = [
    "StdParameter",
    "principal_parameter",
    "gamma_of_parameter",
    "L_of_parameter",
    "langlands_lambda",
    "closed_form",
    "PRINTED_CLOSED_FORMS",
]


@dataclass(frozen=True)
class StdParameter:
    summands: tuple
    N: int

    def __post_init__(self):
        dim = sum(m * chi.field_degree for m, chi in self.summands)
        if dim != self.N:
            raise ValueError(f"summand dimensions add up to {dim}, expected {self.N}")
        for m, _ in self.summands:
            if m < 1:
                raise ValueError("r_m needs m >= 1")

    @classmethod
    def of(cls, q: int, summands: Iterable) -> "StdParameter":
        summands = tuple(summands)
        return cls(summands, sum(m * chi.field_degree for m, chi in summands))

    def dual(self) -> "StdParameter":
        return StdParameter(tuple((m, chi.inverse()) for m, chi in self.summands), self.N)

    def label(self) -> str:
        return " + ".join(f"r{m}x{chi.label()}" for m, chi in self.summands) or "0"


def _shifts(m: int):
    return [Fraction(m - 1, 2) - j for j in range(m)]


def langlands_lambda(chi: MultChar, psi: AddChar) -> RationalQS:
    """lambda(E/F, psi) = eps(Ind 1_E) / eps_E(1_E), a constant."""
    q = chi.q
    one_E = MultChar(q, ext=chi.ext)
    chi_E = MultChar.quadratic(q, chi.ext)
    lam = tate_eps(MultChar.trivial(q), psi) * tate_eps(chi_E, psi) / tate_eps(one_E, psi)
    assert lam.is_constant()
    return lam


def gamma_of_parameter(par: StdParameter, psi: AddChar, q: int | None = None) -> RationalQS:
    factors = []
    for m, chi in par.summands:
        base = tate_gamma(chi, psi)
        if chi.ext is not None:
            base = base * langlands_lambda(chi, psi)
        factors.extend(base.shift(t) for t in _shifts(m))
    if not factors:
        if q is None:
            raise ValueError("empty parameter needs q")
        return RationalQS.one(q)
    return product(factors, factors[0].q)


def L_of_parameter(par: StdParameter, q: int | None = None) -> RationalQS:
    factors = [tate_L(chi).shift(t) for m, chi in par.summands for t in _shifts(m)]
    if not factors:
        if q is None:
            raise ValueError("empty parameter needs q")
        return RationalQS.one(q)
    return product(factors, factors[0].q)


def principal_parameter(space: HermSpace) -> StdParameter:
    """std o phi_0 for the trivial representation of a minimal or trivial space.

    The unitary cases are written over W_F: ``1 + chi_E`` for U(1) and
    ``r_2 (x) (1 + chi_E)`` for the ramified anisotropic U(2), both of
    dimension N.
    """
    tag = classify_minimal(space)
    q = space.q
    one = MultChar.trivial(q)
    if tag == NOT_MINIMAL:
        raise SpaceError(f"{space.label()} is not a minimal case")
    if tag == "trivial":
        N = std_dimension(space)
        return StdParameter.of(q, [(1, one)] * N)
    if tag in ("SOa2", "Q-1_1"):
        return StdParameter.of(q, [(1, one), (1, MultChar.quadratic(q, space.disc))])
    if tag in ("SOa3", "Q1_1"):
        return StdParameter.of(q, [(std_dimension(space), one)])
    if tag == "SOa4":
        return StdParameter.of(q, [(3, one), (1, one)])
    chi_E = MultChar.quadratic(q, space.ext)
    m = 1 if tag == "U1" else 2
    return StdParameter.of(q, [(m, one), (m, chi_E)])


# gamma(s + 1/2, std o phi_0, psi) as printed, for psi of level 0; ``disc`` is
# chi_{disc V} and ``E`` is chi_E.
PRINTED_CLOSED_FORMS = {
    "SOa2": "zeta(-s+1/2)/zeta(s+1/2) * gamma(s+1/2, disc)",
    "Q-1_1": "zeta(-s+1/2)/zeta(s+1/2) * gamma(s+1/2, disc)",
    "SOa3": "zeta(-s)/zeta(s) * zeta(-s+1)/zeta(s+1)",
    "SOa4": "zeta(-s+3/2)/zeta(s+3/2) * zeta(-s+1/2)^2/zeta(s+1/2)^2 * zeta(-s-1/2)/zeta(s-1/2)",
    "Q1_1": "zeta(-s+3/2)/zeta(s+3/2) * zeta(-s+1/2)/zeta(s+1/2) * zeta(-s-1/2)/zeta(s-1/2)",
    "U1": "zeta(-s+1/2)/zeta(s+1/2) * gamma(s+1/2, E)",
    "Ura2": "-q^(-s) * zeta(-s+1)/zeta(s+1) * eps(s+1/2, E)^2",
}


def closed_form(space: HermSpace, psi: AddChar) -> RationalQS:
    """The printed standard gamma factor of the principal parameter, as a function of s."""
    from .ratexpr import evaluate

    tag = classify_minimal(space)
    if tag not in PRINTED_CLOSED_FORMS:
        raise SpaceError(f"no printed closed form for {space.label()}")
    q = space.q
    chars = {"disc": MultChar.quadratic(q, space.disc)}
    if space.ext is not None:
        chars["E"] = MultChar.quadratic(q, space.ext)
    return evaluate(PRINTED_CLOSED_FORMS[tag], q, psi, chars).shift(Fraction(-1, 2))
