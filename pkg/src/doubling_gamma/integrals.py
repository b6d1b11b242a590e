"""Shell integrals behind the Whittaker functionals of the minimal cases.

The integrals have the shape

    P(s) * sum_k 1_O(t) |t|^w  prod_i  int_F 1_{t^{-1}O}(c_i x^{e_i}) psi(d_i x) dx,

summed over the shells ``ord t = k``.  Every inner integral is the volume of a
lattice or zero (a non-trivial character integrates to zero over a group on
which it is non-trivial), so the outer sum is finite or a geometric series
in ``q^{-w}`` and has an exact closed form.  Measures: ``vol(O) = 1`` and
``vol(O^x) = 1`` for ``d^x t``; ``psi`` has level 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import Coeff, RationalQS, q_power
from .localfield import ONE, PI, U, UPI, AddChar, MultChar, SquareClass, hilbert_symbol, local_field, zeta_local
from .localfield import _representative, _trunc_add, _trunc_mul, classify_quad_ext
from .spaces import DoublingNilpotent, HermSpace, SpaceError, classify_minimal

__all__ = [
    "InnerFactor",
    "ShellTerm",
    "ShellIntegrand",
    "ShellError",
    "eval_shell_integral",
    "numeric_shell_integral",
    "whittaker_minimal",
    "shell_integrand_for",
    "gamma_from_whittaker",
    "check_quat_indicator",
    "QuatVerdict",
]


class ShellError(ValueError):
    pass


@dataclass(frozen=True)
class InnerFactor:
    """int_F 1_{t^{-1}O}(c x^e) psi(d x) dx; ``d_val = None`` drops the character."""

    c_val: int = 0
    e: int = 1
    d_val: Optional[int] = 0

    def __post_init__(self):
        if self.e not in (1, 2):
            raise ShellError("only x and x^2 appear in the inner integrals")

    def lower(self, k: int) -> int:
        """Smallest m with c x^e in t^{-k} O for all x in t^m O."""
        return -((k + self.c_val) // self.e)

    def value(self, q: int, k: int) -> Optional[int]:
        """Exponent j with integral = q^j, or None when it vanishes."""
        m = self.lower(k)
        if self.d_val is not None and m < -self.d_val:
            return None
        return -m


@dataclass(frozen=True)
class ShellTerm:
    """prefactor * sum_{k >= 0} |t|^w prod(factors) over ord t = k.

    ``w = w_s * s + w_c``.  With ``outer=False`` the term is just the
    product of the inner integrals at ``t = 1``.
    """

    prefactor: RationalQS
    factors: tuple = ()
    w_s: int = 0
    w_c: Fraction = Fraction(0)
    outer: bool = True


@dataclass(frozen=True)
class ShellIntegrand:
    q: int
    terms: tuple

    def __add__(self, other: "ShellIntegrand") -> "ShellIntegrand":
        return ShellIntegrand(self.q, self.terms + other.terms)


def _shell_monomial(q: int, term: ShellTerm, k: int) -> Optional[RationalQS]:
    exps = [f.value(q, k) for f in term.factors]
    if any(x is None for x in exps):
        return None
    # |t|^w = q^{-k w} = X^{k w_s} q^{-k w_c}
    half = 2 * sum(exps) - 2 * k * term.w_c
    if half.denominator != 1:
        raise ShellError("weights must be half-integers")
    return RationalQS.monomial(q, q_power(q, int(half)), k * term.w_s)


def _eval_term(q: int, term: ShellTerm) -> RationalQS:
    if not term.outer:
        mono = _shell_monomial(q, ShellTerm(term.prefactor, term.factors), 0)
        return term.prefactor * (mono if mono is not None else RationalQS.zero(q))
    with_psi = [f for f in term.factors if f.d_val is not None]
    period = 2 if any(f.e == 2 for f in term.factors) else 1
    if with_psi:
        # the character factors die from some shell on; the sum is finite
        total, k = RationalQS.zero(q), 0
        while True:
            if any(f.value(q, k) is None for f in with_psi):
                break
            mono = _shell_monomial(q, term, k)
            total = total + mono
            k += 1
        return term.prefactor * total
    # geometric in each residue class of k mod period
    total = RationalQS.zero(q)
    for r in range(period):
        first = _shell_monomial(q, term, r)
        ratio = _shell_monomial(q, term, r + period) / first
        if not ratio.is_monomial() or ratio.e == 0:
            raise ShellError("shell sum does not converge for any s")
        total = total + first / (RationalQS.one(q) - ratio)
    return term.prefactor * total


def eval_shell_integral(integrand: ShellIntegrand) -> RationalQS:
    """Exact value (the meromorphic continuation) of a shell integral."""
    return sum((_eval_term(integrand.q, t) for t in integrand.terms), RationalQS.zero(integrand.q))


def numeric_shell_integral(integrand: ShellIntegrand, s: complex, shells: int = 12) -> complex:
    """Direct truncated summation over the shells ``ord t = 0..shells``.

    The inner integrals are summed digit by digit: over ``t^m O / t^M O`` with
    ``M`` large enough that the character and the indicator are constant on
    cosets, so the value is a finite character sum times a coset volume.
    """
    import cmath

    q = integrand.q
    total = 0j
    for term in integrand.terms:
        pre = term.prefactor.eval_numeric(s)
        ks = range(shells + 1) if term.outer else [0]
        acc = 0j
        for k in ks:
            val = 1.0 + 0j
            for f in term.factors:
                val *= _inner_numeric(q, f, k)
            acc += val * q ** (-k * (term.w_s * s + float(term.w_c))) if term.outer else val
        total += pre * acc
    return total


def _inner_numeric(q: int, f: InnerFactor, k: int) -> complex:
    """int_F 1_{t^{-1}O}(c x^e) psi(d x) dx by a finite character sum."""
    import cmath

    m = f.lower(k)
    if f.d_val is None:
        return float(q) ** (-m)
    # psi(d x) depends on x modulo t^{-d} O (level 0); sum over cosets of t^{-d}O in t^m O
    lo = -f.d_val
    if m >= lo:
        return float(q) ** (-m)
    ctx = local_field(q)
    R = ctx.residue
    # x = sum_{j=m}^{lo-1} x_j t^j; psi(2 d x) only sees the digit x_{-1-d_val},
    # the other lo - m - 1 digits each contribute a factor q
    p = ctx.p
    two = R.from_int(2)
    acc = sum(cmath.exp(2j * math.pi * R.trace[R.mul[two][x]] / p) for x in range(R.q))
    acc *= float(q) ** (lo - m - 1)
    return acc * float(q) ** (-lo)


# -- Whittaker functionals of the minimal cases ----------------------------


def shell_integrand_for(tag: str, a_val: int, q: int) -> ShellIntegrand:
    """The shell integrand whose value is zeta * l_{psi_A}(f_s).

    ``tag`` is ``"SOa2"``, ``"U1"`` or ``"Q-1_1"`` (with ``a_val = ord a``)
    or ``"Q1_1"``.  The normalizing zeta is zeta_F(2s+1) in the first three
    cases and zeta_F(s+3/2) for Q1.
    """
    one = RationalQS.one(q)
    psi2 = 0  # psi(2x): 2 is a unit
    if tag in ("SOa2", "U1", "Q-1_1"):
        if a_val == 0:
            return ShellIntegrand(q, (ShellTerm(one, (InnerFactor(0, 1, psi2),), 2, Fraction(1)),))
        if a_val == 1:
            y = RationalQS.monomial(q, q_power(q, -1), 1)  # q^{-s-1/2}
            qs = y.inverse()  # q^{s+1/2}
            main = ShellTerm(qs, (InnerFactor(0, 1, psi2),), 1, Fraction(1, 2))
            corr = ShellTerm(-qs / (one + y), (InnerFactor(0, 1, psi2),), outer=False)
            return ShellIntegrand(q, (main, corr))
        raise ShellError("ord(a) must be 0 or 1")
    if tag == "Q1_1":
        # ord a = 0, ord b = 1
        fx = InnerFactor(0, 2, psi2)
        fy = InnerFactor(1, 2, None)
        return ShellIntegrand(q, (ShellTerm(one, (fx, fy, fy), 1, Fraction(3, 2)),))
    raise ShellError(f"unsupported case {tag}")


def whittaker_minimal(tag: str, q: int, a_val: int = 0) -> RationalQS:
    """l_{psi_A}(f_s) for the K-invariant section with f(1) = 1."""
    ctx = local_field(q)
    zeta = zeta_local(ctx)
    val = eval_shell_integral(shell_integrand_for(tag, a_val, q))
    if tag == "Q1_1":
        return val / zeta.shift(Fraction(3, 2))
    # zeta_F(2s+1) as a function of s: X -> q^{-1} X^2
    z2 = RationalQS.from_polys(q, [1], [1, 0, -Coeff(q, Fraction(1, q))])
    return val / z2


def _minimal_data(space: HermSpace):
    """(tag, ord a, A) for the element A used in the Whittaker computation."""
    tag = classify_minimal(space)
    ctx = space.ctx
    if tag in ("SOa2", "Q-1_1"):
        a = space.disc
    elif tag == "U1":
        a = space.ext
    elif tag == "Q1_1":
        a = U  # the unit generator alpha^2 = a of the division algebra
    else:
        raise ShellError(f"no Whittaker computation for {space.label()}")
    # N_V(A) = (-a)^{-1} in all four cases
    nv = ctx.minus_one * a
    return tag, a.val, DoublingNilpotent(val=-a.val, cls=SquareClass(0, nv.nonsquare))


def gamma_from_whittaker(space: HermSpace, psi: AddChar = AddChar()) -> RationalQS:
    """gamma(s + 1/2, 1_V x 1, psi) = Gamma(s) c(-1) R(s) with Gamma = l(s)/l(-s)."""
    from .doubling import correction_R, default_omega

    if psi.level != 0:
        raise ShellError("the Whittaker computation assumes psi of level 0")
    tag, a_val, A = _minimal_data(space)
    l = whittaker_minimal(tag, space.q, a_val)
    big = l / l.negate_s()
    return big * correction_R(space, default_omega(space), A, psi)


# -- the indicator factorization for division quaternion algebras -----------


@dataclass(frozen=True)
class QuatVerdict:
    ok: bool
    checked: int
    counterexample: Optional[tuple] = None

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} quaternion-indicator ({self.checked} classes)"


def _poly_ord(x, N):
    for i, d in enumerate(x):
        if d:
            return i
    return N


def check_quat_indicator(q: int, a: SquareClass, b: SquareClass, N: int = 6, brute: bool = False,
                         require_division: bool = True) -> QuatVerdict:
    """Check 1_{t^{-1}O}(ax^2+by^2-abz^2) = 1(ax^2) 1(by^2) 1(abz^2).

    For ``x, y, z`` in ``t^{-M}(O/t^N)`` (``M <= N/2``) and every ``t``
    whose indicator is decided at precision ``N``, the identity says
    ``ord(ax^2+by^2-abz^2) = min`` of the three orders.  The default
    enumeration runs over the orders of ``x, y, z`` and their leading digits,
    which fix the leading coefficient of the sum; ``brute=True`` runs over
    all of ``(O/t^N)^3`` instead (feasible for small ``N``).  With
    ``require_division=False`` a split pair is checked too, which must fail.
    """
    ctx = local_field(q)
    if require_division and hilbert_symbol(ctx, a, b) != -1:
        raise ShellError(f"({a.name}, {b.name}) is split: the identity needs a division algebra")
    R = ctx.residue
    ra, rb = _representative(ctx, a, N), _representative(ctx, b, N)
    rab = _trunc_mul(R, ra, rb, N)
    neg = tuple(R.sub(0, d) for d in rab)
    coeffs = (ra, rb, neg)

    def decide(orders_sum, term_orders):
        for M in range(N // 2 + 1):
            # ord S = ord S' - 2M; 1_{t^{-1}O}(S) for ord t = k compares -k
            for k in range(2 * M - N + 1, 2 * M + 1):
                lhs = orders_sum - 2 * M >= -k
                rhs = all(o - 2 * M >= -k for o in term_orders)
                if lhs != rhs:
                    return False
        return True

    checked = 0
    if brute:
        units = list(itertools.product(range(R.q), repeat=N))
        squares = [_trunc_mul(R, x, x, N) for x in units]
        terms = [[_trunc_mul(R, c, sq, N) for sq in squares] for c in coeffs]
        for i, j, k in itertools.product(range(len(units)), repeat=3):
            tx, ty, tz = terms[0][i], terms[1][j], terms[2][k]
            S = _trunc_add(R, _trunc_add(R, tx, ty), tz)
            checked += 1
            if not decide(_poly_ord(S, N), [_poly_ord(t, N) for t in (tx, ty, tz)]):
                return QuatVerdict(False, checked, (units[i], units[j], units[k]))
        return QuatVerdict(True, checked)
    lead = [(c[_poly_ord(c, N)], _poly_ord(c, N)) for c in coeffs]
    vals = list(range(N)) + [None]  # None: the variable is 0 mod t^N
    for ords in itertools.product(vals, repeat=3):
        digit_sets = [range(1, R.q) if o is not None else [0] for o in ords]
        for digits in itertools.product(*digit_sets):
            term_orders, leads = [], []
            for (c0, cv), o, d in zip(lead, ords, digits):
                if o is None or cv + 2 * o >= N:
                    term_orders.append(N)
                    leads.append(None)
                else:
                    term_orders.append(cv + 2 * o)
                    leads.append(R.mul[c0][R.mul[d][d]])
            mn = min(term_orders)
            if mn >= N:
                order_sum = N
            else:
                s = 0
                for to, ld in zip(term_orders, leads):
                    if to == mn:
                        s = R.add[s][ld]
                # cancellation pushes the order up; a lower bound suffices
                order_sum = mn if s else mn + 1
            checked += 1
            if not decide(order_sum, term_orders):
                return QuatVerdict(False, checked, (ords, digits))
    return QuatVerdict(True, checked)
