"""The local field F = F_q((t)) at the level of computable invariants.

Elements of ``F`` are never stored as power series.  Everything the local
factors need factors through the valuation and the square class, plus
finite truncations ``O/t^N`` that only the brute-force oracles touch.
The uniformizer is the variable ``t`` itself.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .exactnum import Coeff, RationalQS

__all__ = [
    "ResidueField",
    "LocalFieldCtx",
    "SquareClass",
    "ONE",
    "U",
    "PI",
    "UPI",
    "SQUARE_CLASSES",
    "MultChar",
    "AddChar",
    "QuadExtInfo",
    "local_field",
    "hilbert_symbol",
    "hilbert_symbol_bruteforce",
    "chi_eval",
    "classify_quad_ext",
    "zeta_local",
    "dual_psi",
]


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 3 or q % 2 == 0:
        raise ValueError(f"q={q} must be an odd prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, k


# -- polynomials over GF(p), lowest degree first ------------------------


def _fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = _fp_trim(a)
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        f = a[-1] * inv % p
        s = len(a) - len(m)
        for i, c in enumerate(m):
            a[s + i] = (a[s + i] - f * c) % p
        a = _fp_trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(out, m, p)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_powmod(a, e, m, p):
    out, base = [1], _fp_mod(a, m, p)
    while e:
        if e & 1:
            out = _fp_mulmod(out, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return out


def _is_irreducible(m, p) -> bool:
    """Rabin-style test: gcd(x^{p^i} - x, m) = 1 for i <= deg/2."""
    k = len(m) - 1
    xp = [0, 1]
    for _ in range(k // 2):
        xp = _fp_powmod(xp, p, m, p)
        diff = list(xp) + [0] * (2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(m, diff, p)) > 1:
            return False
    return True


def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        m = list(tail) + [1]
        if m[0] == 0:
            continue
        if _is_irreducible(m, p):
            return tuple(m)
    raise RuntimeError("no irreducible polynomial found")


class ResidueField:
    """GF(p^k) as GF(p)[x]/(m(x)), elements encoded as ints ``0..q-1``.

    The encoding uses base-``p`` digits, lowest degree first.  ``m`` is the
    lexicographically first monic irreducible of degree ``k``.
    """

    def __init__(self, p: int, k: int):
        self.p, self.k, self.q = p, k, p**k
        self.modulus = _first_irreducible(p, k)
        q = self.q
        self._digits = [self._to_digits(x) for x in range(q)]
        self.add = [[self._from_digits([(a + b) % p for a, b in zip(self._digits[x], self._digits[y])])
                     for y in range(q)] for x in range(q)]
        self.neg = [self._from_digits([(-a) % p for a in self._digits[x]]) for x in range(q)]
        self.mul = [[self._mul_slow(x, y) for y in range(q)] for x in range(q)]
        self.inv = [0] * q
        for x in range(1, q):
            self.inv[x] = next(y for y in range(1, q) if self.mul[x][y] == 1)
        self.trace = [self._trace_slow(x) for x in range(q)]
        self.legendre = [0] + [1 if self._pow(x, (q - 1) // 2) == 1 else -1 for x in range(1, q)]
        self.nonsquare = next(x for x in range(1, q) if self.legendre[x] == -1)

    def _to_digits(self, x):
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _from_digits(self, ds):
        x = 0
        for d in reversed(list(ds) + [0] * (self.k - len(ds))):
            x = x * self.p + d
        return x

    def _mul_slow(self, x, y):
        r = _fp_mulmod(self._digits[x], self._digits[y], list(self.modulus), self.p)
        return self._from_digits(r)

    def _pow(self, x, e):
        out = 1
        for _ in range(e):
            out = self.mul[out][x]
        return out

    def _trace_slow(self, x):
        acc, y = 0, x
        for _ in range(self.k):
            acc = self.add[acc][y]
            y = self._pow(y, self.p)
        assert acc < self.p
        return acc

    def sub(self, x, y):
        return self.add[x][self.neg[y]]

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)


@dataclass(frozen=True)
class SquareClass:
    """An element of F^x / F^x^2: valuation parity and unit square class."""

    val: int
    nonsquare: int

    def __post_init__(self):
        if self.val not in (0, 1) or self.nonsquare not in (0, 1):
            raise ValueError("square class components must be 0 or 1")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(self.val ^ other.val, self.nonsquare ^ other.nonsquare)

    def is_trivial(self) -> bool:
        return self.val == 0 and self.nonsquare == 0

    @property
    def name(self) -> str:
        return {(0, 0): "1", (0, 1): "u", (1, 0): "pi", (1, 1): "upi"}[(self.val, self.nonsquare)]

    @classmethod
    def parse(cls, name: str) -> "SquareClass":
        table = {"1": (0, 0), "u": (0, 1), "pi": (1, 0), "upi": (1, 1)}
        try:
            return cls(*table[name])
        except KeyError:
            raise ValueError(f"unknown square class {name!r}") from None

    def __repr__(self):
        return self.name


ONE = SquareClass(0, 0)
U = SquareClass(0, 1)
PI = SquareClass(1, 0)
UPI = SquareClass(1, 1)
SQUARE_CLASSES = (ONE, U, PI, UPI)


@dataclass(frozen=True)
class LocalFieldCtx:
    q: int
    p: int
    k: int

    @property
    def residue(self) -> ResidueField:
        return _residue_field(self.p, self.k)

    @property
    def minus_one(self) -> SquareClass:
        return SquareClass(0, 0 if self.q % 4 == 1 else 1)

    @property
    def two(self) -> SquareClass:
        return SquareClass(0, 0 if self.residue.legendre[self.residue.from_int(2)] == 1 else 1)

    def unit_class(self, sign: int) -> SquareClass:
        """Square class of the integer ``sign`` (a unit of O)."""
        r = self.residue
        return SquareClass(0, 0 if r.legendre[r.from_int(sign)] == 1 else 1)

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "k": self.k, "irreducible": list(self.residue.modulus)})

    def X(self) -> RationalQS:
        return RationalQS.X(self.q)

    def coeff(self, a=0, b=0, c=0, d=0) -> Coeff:
        return Coeff(self.q, a, b, c, d)


@lru_cache(maxsize=None)
def _residue_field(p: int, k: int) -> ResidueField:
    return ResidueField(p, k)


@lru_cache(maxsize=None)
def local_field(q: int) -> LocalFieldCtx:
    p, k = _factor_prime_power(q)
    return LocalFieldCtx(q, p, k)


def hilbert_symbol(ctx: LocalFieldCtx, a: SquareClass, b: SquareClass) -> int:
    """Hilbert symbol (a, b)_F for odd residue characteristic."""
    sign = -1 if (a.val * b.val * (ctx.q - 1) // 2) % 2 else 1
    if b.val and a.nonsquare:
        sign = -sign
    if a.val and b.nonsquare:
        sign = -sign
    return sign


# -- brute-force solvability oracle --------------------------------------


def _trunc_mul(R: ResidueField, x, y, N):
    out = [0] * N
    for i, a in enumerate(x):
        if a == 0:
            continue
        for j in range(N - i):
            b = y[j]
            if b:
                out[i + j] = R.add[out[i + j]][R.mul[a][b]]
    return tuple(out)


def _trunc_add(R, x, y):
    return tuple(R.add[a][b] for a, b in zip(x, y))


def _representative(ctx: LocalFieldCtx, c: SquareClass, N: int):
    R = ctx.residue
    unit = R.nonsquare if c.nonsquare else 1
    out = [0] * N
    out[c.val] = unit
    return tuple(out)


def hilbert_symbol_bruteforce(ctx: LocalFieldCtx, a: SquareClass, b: SquareClass, N: int = 3) -> int:
    """Decide (a, b) by searching primitive solutions of z^2 = a x^2 + b y^2 mod t^N.

    ``a`` and ``b`` are taken as the representatives ``1, u, t, u t``.  For
    these valuations a primitive solution modulo ``t^3`` lifts by Hensel's
    lemma, so ``N >= 3`` decides solvability.
    """
    R = ctx.residue
    ra, rb = _representative(ctx, a, N), _representative(ctx, b, N)
    squares = {}  # square value -> True if it is the square of a unit
    for digits in itertools.product(range(R.q), repeat=N):
        sq = _trunc_mul(R, digits, digits, N)
        squares[sq] = squares.get(sq, False) or digits[0] != 0
    unit_squares = {s for s, is_unit in squares.items() if is_unit}
    all_squares = set(squares)
    for sx, x_unit in squares.items():
        ax = _trunc_mul(R, ra, sx, N)
        for sy, y_unit in squares.items():
            w = _trunc_add(R, ax, _trunc_mul(R, rb, sy, N))
            if x_unit or y_unit:
                if w in all_squares:
                    return 1
            elif w in unit_squares:
                return 1
    return -1


# -- characters ------------------------------------------------------------


@dataclass(frozen=True)
class QuadExtInfo:
    d: SquareClass
    ramified: bool
    f: int
    q_ext: int


def classify_quad_ext(ctx: LocalFieldCtx, d: SquareClass) -> QuadExtInfo:
    if d.is_trivial():
        raise ValueError("d = 1 does not define a quadratic field extension")
    if d.val:
        return QuadExtInfo(d, True, 1, ctx.q)
    return QuadExtInfo(d, False, 2, ctx.q**2)


def zeta_local(ctx: LocalFieldCtx, ext: Optional[QuadExtInfo] = None) -> RationalQS:
    """1/(1 - q'^{-s}) written in X = q^{-s}."""
    f = 1 if ext is None else ext.f
    q = ctx.q
    one = Coeff.one(q)
    den = [one] + [Coeff.zero(q)] * (f - 1) + [-one]
    return RationalQS.from_polys(q, [one], den)


@dataclass(frozen=True)
class MultChar:
    """Quadratic character times an unramified twist.

    ``quad`` is the square class ``d`` of ``chi_d = (d, .)_F``; ``z`` is the
    unramified twist (the value of ``|.|^{s0}`` at the uniformizer is
    ``q^{-s0}``).  When ``ext`` is set the character lives on ``E^x`` for
    ``E = F(sqrt(ext))``; only unramified twists are supported there and
    ``z`` is the value at a uniformizer of ``E``.
    """

    q: int
    quad: SquareClass = ONE
    z: Coeff = None  # type: ignore[assignment]
    ext: Optional[SquareClass] = None

    def __post_init__(self):
        if self.z is None:
            object.__setattr__(self, "z", Coeff.one(self.q))
        if self.ext is not None and not self.quad.is_trivial():
            raise ValueError("characters of E^x are restricted to unramified twists")
        if self.ext is not None and self.ext.is_trivial():
            raise ValueError("E = F(sqrt(1)) is not a field")

    @classmethod
    def trivial(cls, q: int) -> "MultChar":
        return cls(q)

    @classmethod
    def quadratic(cls, q: int, d: SquareClass) -> "MultChar":
        return cls(q, d)

    @classmethod
    def unramified(cls, q: int, z, ext: Optional[SquareClass] = None) -> "MultChar":
        z = z if isinstance(z, Coeff) else Coeff(q, z)
        return cls(q, ONE, z, ext)

    @property
    def ctx(self) -> LocalFieldCtx:
        return local_field(self.q)

    @property
    def is_ramified(self) -> bool:
        return self.quad.val == 1

    @property
    def conductor(self) -> int:
        return 1 if self.is_ramified else 0

    @property
    def field_degree(self) -> int:
        return 1 if self.ext is None else 2

    def residue_degree(self) -> int:
        if self.ext is None:
            return 1
        return classify_quad_ext(self.ctx, self.ext).f

    def value_at_uniformizer(self) -> Coeff:
        base = hilbert_symbol(self.ctx, self.quad, PI) if self.ext is None else 1
        return self.z * base

    def value_at_minus_one(self) -> int:
        return hilbert_symbol(self.ctx, self.quad, self.ctx.minus_one) if self.ext is None else 1

    def inverse(self) -> "MultChar":
        return replace(self, z=self.z.inverse())

    def __mul__(self, other: "MultChar") -> "MultChar":
        if self.q != other.q or self.ext != other.ext:
            raise ValueError("characters live on different groups")
        return MultChar(self.q, self.quad * other.quad, self.z * other.z, self.ext)

    def twist(self, z) -> "MultChar":
        z = z if isinstance(z, Coeff) else Coeff(self.q, z)
        return replace(self, z=self.z * z)

    def is_trivial(self) -> bool:
        return self.quad.is_trivial() and self.z.is_one()

    def label(self) -> str:
        parts = []
        if not self.quad.is_trivial():
            parts.append(f"chi({self.quad.name})")
        if not self.z.is_one():
            parts.append(f"z^{{{self.z.to_text()}}}")
        s = " * ".join(parts) or "1"
        return s + (f" on E(sqrt {self.ext.name})" if self.ext is not None else "")


def chi_eval(chi: MultChar, val: int, unit: SquareClass = ONE) -> Coeff:
    """chi(x) for x of valuation ``val`` whose unit part has class ``unit``."""
    if unit.val:
        raise ValueError("unit part must have even valuation class")
    x = SquareClass(val % 2, unit.nonsquare)
    if chi.ext is not None:
        return chi.z**val
    base = hilbert_symbol(chi.ctx, chi.quad, x)
    return chi.z**val * base


@dataclass(frozen=True)
class AddChar:
    """Additive character psi of F.

    ``level`` is the largest ``n`` with psi trivial on ``t^{-n} O``.  On
    ``t^{-n-1} O`` the character is ``x -> exp(2 pi i Tr(c x_{-n-1}) / p)``
    where ``x_{-n-1}`` is the coefficient of ``t^{-n-1}`` and ``c`` is the
    seed: ``1`` or the fixed non-square ``u`` of the residue field.
    """

    level: int = 0
    seed_nonsquare: int = 0

    def rescale(self, a_val: int, a_unit: SquareClass = ONE) -> "AddChar":
        """psi_a : x -> psi(a x)."""
        return AddChar(self.level + a_val, self.seed_nonsquare ^ a_unit.nonsquare)

    @property
    def seed(self) -> SquareClass:
        return SquareClass(0, self.seed_nonsquare)


def dual_psi(ctx: LocalFieldCtx, psi: AddChar) -> AddChar:
    """psi^{-1} = psi_{-1}."""
    return psi.rescale(0, ctx.minus_one)
