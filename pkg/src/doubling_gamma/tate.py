"""Tate local factors for quadratic characters times unramified twists.

Conventions: ``psi`` of level ``n`` is trivial on ``t^{-n} O`` and the Haar
measure is self-dual for ``psi``.  Then

    eps(s, chi, psi) = c(chi, psi) * chi(t)^n * q^{(a(chi) + n)(1/2 - s)}

where ``c`` is 1 for unramified ``chi`` and ``chi(t) G(chi, psi) / sqrt(q)``
for ramified quadratic ``chi`` with ``G`` the residue-field Gauss sum of the
level-0 character with the same seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .exactnum import Coeff, RationalQS, q_power
from .localfield import (
    AddChar,
    LocalFieldCtx,
    MultChar,
    SquareClass,
    classify_quad_ext,
    chi_eval,
)

__all__ = [
    "GaussConstant",
    "UnsupportedCharacter",
    "gauss_sum_exact",
    "gauss_sum_numeric",
    "gauss_constant",
    "tate_L",
    "tate_eps",
    "tate_gamma",
    "ext_psi_level",
    "numeric_tate_gamma",
]


class UnsupportedCharacter(ValueError):
    pass


@dataclass(frozen=True)
class GaussConstant:
    value: Coeff
    conductor: int


def gauss_sum_exact(ctx: LocalFieldCtx, seed: SquareClass) -> Coeff:
    """sum_{t in F_q^x} legendre(t) exp(2 pi i Tr(c t)/p), exactly.

    Gauss's sign for the prime field, lifted to q = p^k by Hasse-Davenport:
    -G_{p^k} = (-G_p)^k.
    """
    p, k, q = ctx.p, ctx.k, ctx.q
    root = Coeff(q, 0, 1) if p % 4 == 3 else Coeff(q, 1)
    g = Coeff(q, (-1) ** (k - 1)) * root**k * Coeff.sqrt_q(q)  # (sqrt p)^k = sqrt q
    return -g if seed.nonsquare else g


def gauss_sum_numeric(ctx: LocalFieldCtx, seed: SquareClass) -> complex:
    R = ctx.residue
    c = R.nonsquare if seed.nonsquare else 1
    zeta = cmath.exp(2j * math.pi / R.p)
    return sum(R.legendre[t] * zeta ** R.trace[R.mul[c][t]] for t in R.units())


def gauss_constant(chi: MultChar, psi: AddChar) -> GaussConstant:
    """Normalized epsilon constant of ``chi`` against the level-0 character with psi's seed."""
    if chi.ext is not None or not chi.is_ramified:
        return GaussConstant(Coeff.one(chi.q), 0)
    ctx = chi.ctx
    g = gauss_sum_exact(ctx, psi.seed)
    return GaussConstant(chi.value_at_uniformizer() * g / Coeff.sqrt_q(chi.q), 1)


def ext_psi_level(chi: MultChar, psi: AddChar) -> int:
    """Level of psi o Tr_{E/F} on E (Tate convention)."""
    if chi.ext is None:
        return psi.level
    info = classify_quad_ext(chi.ctx, chi.ext)
    return 2 * psi.level + 1 if info.ramified else psi.level


def tate_L(chi: MultChar) -> RationalQS:
    q = chi.q
    if chi.is_ramified:
        return RationalQS.one(q)
    f = chi.residue_degree()
    one = Coeff.one(q)
    den = [one] + [Coeff.zero(q)] * (f - 1) + [-chi.value_at_uniformizer()]
    return RationalQS.from_polys(q, [one], den)


def tate_eps(chi: MultChar, psi: AddChar) -> RationalQS:
    q = chi.q
    if chi.ext is not None:
        f = chi.residue_degree()
        n = ext_psi_level(chi, psi)
        return RationalQS.monomial(q, chi.z**n * q_power(q, f * n), f * n)
    const = gauss_constant(chi, psi)
    m = const.conductor + psi.level
    c = const.value * chi.value_at_uniformizer() ** psi.level * q_power(q, m)
    return RationalQS.monomial(q, c, m)


def tate_gamma(chi: MultChar, psi: AddChar) -> RationalQS:
    """eps(s, chi, psi) L(1 - s, chi^{-1}) / L(s, chi)."""
    return tate_eps(chi, psi) * tate_L(chi.inverse()).reflect() / tate_L(chi)


# -- numeric oracle ------------------------------------------------------------


def _psi_numeric(ctx: LocalFieldCtx, psi: AddChar, coeff_index: int, coeff: int) -> complex:
    """psi(x) given the coefficient of t^{coeff_index} of x; only t^{-level-1} matters."""
    if coeff_index != -psi.level - 1:
        return 1.0
    R = ctx.residue
    c = R.nonsquare if psi.seed_nonsquare else 1
    return cmath.exp(2j * math.pi * R.trace[R.mul[c][coeff]] / R.p)


def numeric_tate_gamma(chi: MultChar, psi: AddChar, s: complex, terms: int = 400) -> complex:
    """gamma(s, chi, psi) from Tate's local functional equation, numerically.

    Uses ``f = 1_O`` (unramified chi) or ``f = 1_{1 + tO}`` (ramified chi),
    computes the Fourier transform against the explicit residue character
    and sums both zeta integrals shell by shell.  Needs ``0 < Re s < 1``.
    """
    if chi.ext is not None:
        raise UnsupportedCharacter("numeric oracle covers characters of F^x only")
    ctx = chi.ctx
    R = ctx.residue
    q, n = ctx.q, psi.level
    m = 1 if chi.is_ramified else 0
    vol_O = q ** (-n / 2)

    zpi = complex(chi.value_at_uniformizer())
    on_units = {ns: complex(chi_eval(chi, 0, SquareClass(0, ns))) for ns in (0, 1)}

    def chi_num(val, u0):
        return zpi**val * on_units[0 if R.legendre[u0] == 1 else 1]

    if m == 0:
        z_s = sum((complex(chi.value_at_uniformizer()) * q ** (-s)) ** k for k in range(terms))
    else:
        z_s = 1.0 / (q - 1)  # d^x-volume of 1 + tO with vol(O^x) = 1

    z_dual = 0j
    for k in range(-n - m, terms):
        # A_k = average over u in O^x of chi^{-1}(t^k u) psi(t^k u)
        # k >= -n - 1, so psi sees the leading coefficient only when k = -n - 1
        total = 0j
        count = 0
        for u0 in R.units():
            ps = _psi_numeric(ctx, psi, k, u0)
            total += ps / chi_num(k, u0)
            count += 1
        a_k = total / count
        z_dual += q ** (-k * (1 - s)) * a_k
    z_dual *= vol_O * q ** (-m)
    return z_dual / z_s
