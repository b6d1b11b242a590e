"""Exact arithmetic in Q(i, sqrt(q)) and rational functions of X = q^{-s}.

Every local factor produced by the package is a :class:`RationalQS`: a
quotient of polynomials in the formal variable ``X = q^{-s}`` with
coefficients in ``Q(i, sqrt(q))``, kept in a canonical form so that equality
is decided structurally.

The canonical form of a nonzero value is ``X^e * N(X) / D(X)`` where

* ``N(0) != 0`` and ``D(0) != 0``,
* ``D`` is monic,
* ``gcd(N, D) = 1``.

The zero function is ``N = ()``, ``D = (1,)``, ``e = 0``.
"""

from __future__ import annotations

import cmath
import functools
import json
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Coeff",
    "RationalQS",
    "ContextMismatch",
    "PoleError",
    "q_power",
]


class ContextMismatch(ValueError):
    """Raised when values built for different residue cardinalities meet."""


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at one of its poles."""


@functools.lru_cache(maxsize=None)
def _isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


Number = Union[int, Fraction]


_INVERSES: dict = {}


class Coeff:
    """Element ``a + b*i + c*sqrt(q) + d*i*sqrt(q)`` of ``Q(i, sqrt(q))``.

    When ``q`` is a perfect square the ``sqrt(q)`` components are folded into
    the rational ones, so the representation is unique for every ``q``.
    """

    __slots__ = ("q", "a", "b", "c", "d", "_hash")

    def __init__(self, q: int, a: Number = 0, b: Number = 0, c: Number = 0, d: Number = 0):
        F = Fraction
        if type(a) is not F:
            a = F(a)
        if type(b) is not F:
            b = F(b)
        if type(c) is not F:
            c = F(c)
        if type(d) is not F:
            d = F(d)
        root = _isqrt_exact(q)
        if root is not None and (c or d):
            a += c * root
            b += d * root
            c = d = Fraction(0)
        self.q = q
        self.a, self.b, self.c, self.d = a, b, c, d
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def one(cls, q: int) -> "Coeff":
        return cls(q, 1)

    @classmethod
    def zero(cls, q: int) -> "Coeff":
        return cls(q, 0)

    @classmethod
    def i(cls, q: int) -> "Coeff":
        return cls(q, 0, 1)

    @classmethod
    def sqrt_q(cls, q: int) -> "Coeff":
        return cls(q, 0, 0, 1)

    def _coerce(self, other) -> "Coeff":
        if isinstance(other, Coeff):
            if other.q != self.q:
                raise ContextMismatch(f"mixing q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Fraction)):
            return Coeff(self.q, other)
        return NotImplemented

    # -- ring structure -----------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Coeff(self.q, self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Coeff(self.q, -self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        q = self.q
        if not (o.b or o.c or o.d):
            x = o.a
            return Coeff(q, self.a * x, self.b * x, self.c * x, self.d * x)
        if not (self.b or self.c or self.d):
            x = self.a
            return Coeff(q, o.a * x, o.b * x, o.c * x, o.d * x)
        # (A + B i)(A' + B' i) with A, B in Q(sqrt q)
        A = (self.a, self.c)
        B = (self.b, self.d)
        A2 = (o.a, o.c)
        B2 = (o.b, o.d)

        def m(x, y):
            return (x[0] * y[0] + q * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

        AA, BB, AB, BA = m(A, A2), m(B, B2), m(A, B2), m(B, A2)
        re = (AA[0] - BB[0], AA[1] - BB[1])
        im = (AB[0] + BA[0], AB[1] + BA[1])
        return Coeff(q, re[0], im[0], re[1], im[1])

    __rmul__ = __mul__

    def inverse(self) -> "Coeff":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero coefficient")
        q = self.q
        if not (self.b or self.c or self.d):
            return Coeff(q, 1 / self.a)
        key = (q,) + self.key()
        hit = _INVERSES.get(key)
        if hit is not None:
            return hit
        # 1/(A + B i) = (A - B i) / (A^2 + B^2), then invert in Q(sqrt q).
        A = (self.a, self.c)
        B = (self.b, self.d)
        n0 = A[0] ** 2 + q * A[1] ** 2 + B[0] ** 2 + q * B[1] ** 2
        n1 = 2 * A[0] * A[1] + 2 * B[0] * B[1]
        den = n0 * n0 - q * n1 * n1
        inv = (n0 / den, -n1 / den)
        conj = Coeff(q, A[0], -B[0], A[1], -B[1])
        out = conj * Coeff(q, inv[0], 0, inv[1], 0)
        if len(_INVERSES) < 100_000:
            _INVERSES[key] = out
        return out

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Coeff(self.q, other) * self.inverse() if not isinstance(other, Coeff) else other / self

    def __pow__(self, k: int) -> "Coeff":
        if k < 0:
            return self.inverse() ** (-k)
        out = Coeff.one(self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates, comparison ---------------------------------------
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_one(self) -> bool:
        return self.a == 1 and not (self.b or self.c or self.d)

    def key(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Coeff(self.q, other)
        if not isinstance(other, Coeff):
            return NotImplemented
        return self.q == other.q and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q,) + self.key())
        return self._hash

    def conjugate_i(self) -> "Coeff":
        """Complex conjugation (``i -> -i``, ``sqrt(q)`` fixed)."""
        return Coeff(self.q, self.a, -self.b, self.c, -self.d)

    def __complex__(self):
        r = math.sqrt(self.q)
        return complex(float(self.a) + float(self.c) * r, float(self.b) + float(self.d) * r)

    # -- rendering -----------------------------------------------------
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def to_text(self, latex: bool = False) -> str:
        sq = r"\sqrt{%d}" % self.q if latex else f"sqrt({self.q})"
        unit = {"a": "", "b": "i", "c": sq, "d": ("i" + sq) if latex else f"i*{sq}"}
        parts = []
        for name, val in zip("abcd", self.key()):
            if not val:
                continue
            u = unit[name]
            if latex and val.denominator != 1:
                mag = r"\frac{%d}{%d}" % (abs(val.numerator), val.denominator)
            else:
                mag = str(abs(val))
            if u:
                body = u if abs(val) == 1 else (f"{mag}{u}" if latex else f"{mag}*{u}")
            else:
                body = mag
            parts.append(("-" if val < 0 else "+", body))
        if not parts:
            return "0"
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Coeff(q={self.q}, {self.to_text()})"


def q_power(q: int, half_exponent: int) -> Coeff:
    """Return ``q^(k/2)`` for an integer ``k = half_exponent``."""
    k = half_exponent
    if k % 2 == 0:
        return Coeff(q, Fraction(q) ** (k // 2))
    return Coeff(q, 0, 0, Fraction(q) ** ((k - 1) // 2))


def _to_half_units(s0) -> int:
    two = Fraction(s0) * 2
    if two.denominator != 1:
        raise ValueError(f"shift {s0} is not a half-integer")
    return int(two)


# -- dense polynomial helpers (coefficient lists, lowest degree first) --

Poly = tuple  # tuple[Coeff, ...]


def _trim(p: list) -> list:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _padd(p, r):
    n = max(len(p), len(r))
    out = []
    for k in range(n):
        if k < len(p) and k < len(r):
            out.append(p[k] + r[k])
        elif k < len(p):
            out.append(p[k])
        else:
            out.append(r[k])
    return _trim(out)


def _pmul(p, r):
    if not p or not r:
        return []
    q = p[0].q
    out = [Coeff.zero(q) for _ in range(len(p) + len(r) - 1)]
    for i, x in enumerate(p):
        if x.is_zero():
            continue
        for j, y in enumerate(r):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(p, c):
    return _trim([x * c for x in p])


def _pdivmod(p, r):
    p = list(p)
    q = r[0].q
    if len(p) < len(r):
        return [], p
    inv_lead = r[-1].inverse()
    quo = [Coeff.zero(q) for _ in range(len(p) - len(r) + 1)]
    while len(p) >= len(r) and p:
        shift = len(p) - len(r)
        f = p[-1] * inv_lead
        quo[shift] = f
        for k, y in enumerate(r):
            p[shift + k] = p[shift + k] - f * y
        p.pop()
        _trim(p)
    return _trim(quo), p


def _pgcd(p, r):
    if len(p) == 1 or len(r) == 1:
        return [Coeff.one(r[0].q if r else p[0].q)] if (p and r) else _pgcd_slow(p, r)
    return _pgcd_slow(p, r)


def _pgcd_slow(p, r):
    # monic remainders keep the rational coefficients small
    while r:
        r = _pscale(r, r[-1].inverse())
        _, rem = _pdivmod(p, r)
        p, r = r, rem
    return _pscale(p, p[-1].inverse()) if p else p


def _strip_x(p) -> tuple[list, int]:
    k = 0
    while k < len(p) and p[k].is_zero():
        k += 1
    return list(p[k:]), k


class RationalQS:
    """Canonical rational function of ``X = q^{-s}`` over ``Q(i, sqrt q)``.

    Build values with :meth:`constant`, :meth:`monomial`, :meth:`from_polys`
    or arithmetic; never mutate the stored tuples.
    """

    __slots__ = ("q", "num", "den", "e", "_hash")

    def __init__(self, q: int, num: Poly, den: Poly, e: int, _canonical: bool = False):
        self.q = q
        if _canonical:
            self.num, self.den, self.e = num, den, e
        else:
            self.num, self.den, self.e = self._canonicalize(q, num, den, e)
        self._hash = None

    @staticmethod
    def _canonicalize(q, num, den, e):
        num = _trim([c if isinstance(c, Coeff) else Coeff(q, c) for c in num])
        den = _trim([c if isinstance(c, Coeff) else Coeff(q, c) for c in den])
        for c in list(num) + list(den):
            if c.q != q:
                raise ContextMismatch(f"mixing q={q} and q={c.q}")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return (), (Coeff.one(q),), 0
        num, kn = _strip_x(num)
        den, kd = _strip_x(den)
        e = e + kn - kd
        g = _pgcd(num, den)
        if len(g) > 1:
            num, _ = _pdivmod(num, g)
            den, _ = _pdivmod(den, g)
        lead = den[-1].inverse()
        num = _pscale(num, lead)
        den = _pscale(den, lead)
        return tuple(num), tuple(den), e

    # -- constructors -------------------------------------------------
    @classmethod
    def from_polys(cls, q: int, num: Sequence, den: Sequence = (1,), e: int = 0) -> "RationalQS":
        return cls(q, tuple(num), tuple(den), e)

    @classmethod
    def constant(cls, q: int, c) -> "RationalQS":
        c = c if isinstance(c, Coeff) else Coeff(q, c)
        return cls(q, (c,), (Coeff.one(q),), 0)

    @classmethod
    def one(cls, q: int) -> "RationalQS":
        return cls.constant(q, 1)

    @classmethod
    def zero(cls, q: int) -> "RationalQS":
        return cls.constant(q, 0)

    @classmethod
    def monomial(cls, q: int, c, power: int) -> "RationalQS":
        """``c * X^power``."""
        c = c if isinstance(c, Coeff) else Coeff(q, c)
        return cls(q, (c,), (Coeff.one(q),), power)

    @classmethod
    def X(cls, q: int) -> "RationalQS":
        return cls.monomial(q, 1, 1)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other) -> "RationalQS":
        if isinstance(other, RationalQS):
            if other.q != self.q:
                raise ContextMismatch(f"mixing q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Fraction, Coeff)):
            return RationalQS.constant(self.q, other)
        return NotImplemented

    def _laurent(self):
        """Return (num, den) as polynomials after absorbing X^e."""
        q = self.q
        zero = Coeff.zero(q)
        if self.e >= 0:
            return [zero] * self.e + list(self.num), list(self.den)
        return list(self.num), [zero] * (-self.e) + list(self.den)

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        n1, d1 = self._laurent()
        n2, d2 = o._laurent()
        return RationalQS(self.q, tuple(_padd(_pmul(n1, d2), _pmul(n2, d1))), tuple(_pmul(d1, d2)), 0)

    __radd__ = __add__

    def __neg__(self):
        return RationalQS(self.q, tuple(-c for c in self.num), self.den, self.e, _canonical=True)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RationalQS.zero(self.q)
        return RationalQS(
            self.q,
            tuple(_pmul(self.num, o.num)),
            tuple(_pmul(self.den, o.den)),
            self.e + o.e,
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalQS":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalQS(self.q, self.den, self.num, -self.e)

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalQS":
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalQS.one(self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- substitutions ------------------------------------------------
    def scale(self, c) -> "RationalQS":
        """Substitute ``X -> c*X``."""
        c = c if isinstance(c, Coeff) else Coeff(self.q, c)
        if c.is_zero():
            raise ValueError("scale factor must be nonzero")
        num = tuple(x * c**k for k, x in enumerate(self.num))
        den = tuple(x * c**k for k, x in enumerate(self.den))
        return RationalQS(self.q, num, den, 0) * RationalQS.monomial(self.q, c**self.e, self.e)

    def invert_variable(self, c=1) -> "RationalQS":
        """Substitute ``X -> c / X``."""
        c = c if isinstance(c, Coeff) else Coeff(self.q, c)

        def rev(p):
            return tuple(x * c**k for k, x in reversed(list(enumerate(p))))

        # p(c/X) = X^{-deg p} * rev(p)(X)
        dn, dd = len(self.num) - 1, len(self.den) - 1
        body = RationalQS(self.q, rev(self.num), rev(self.den), 0)
        return body * RationalQS.monomial(self.q, c**self.e, -self.e - dn + dd)

    def shift(self, s0) -> "RationalQS":
        """Return ``g(s) = f(s + s0)`` for a half-integer ``s0``."""
        k = _to_half_units(s0)
        return self.scale(q_power(self.q, -k))

    def negate_s(self) -> "RationalQS":
        """Return ``g(s) = f(-s)``."""
        return self.invert_variable(1)

    def reflect(self) -> "RationalQS":
        """Return ``g(s) = f(1 - s)``, i.e. ``X -> q^{-1} X^{-1}``."""
        return self.invert_variable(Coeff(self.q, Fraction(1, self.q)))

    # -- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.e == 0 and len(self.num) == 1 and len(self.den) == 1 and self.num[0].is_one()

    def is_constant(self) -> bool:
        return self.e == 0 and len(self.num) <= 1 and len(self.den) == 1

    def is_monomial(self) -> bool:
        """True for ``c * X^m`` with ``c != 0``."""
        return len(self.num) == 1 and len(self.den) == 1

    def monomial_parts(self) -> tuple[Coeff, int]:
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return self.num[0], self.e

    def constant_value(self) -> Coeff:
        if self.is_zero():
            return Coeff.zero(self.q)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    def key(self):
        return (self.q, tuple(c.key() for c in self.num), tuple(c.key() for c in self.den), self.e)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Coeff)):
            other = RationalQS.constant(self.q, other)
        if not isinstance(other, RationalQS):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    # -- numerics -----------------------------------------------------
    def eval_X(self, x: complex) -> complex:
        def ev(p):
            acc = 0j
            for c in reversed(p):
                acc = acc * x + complex(c)
            return acc

        d = ev(self.den)
        n = ev(self.num)
        scale = max(1.0, sum(abs(complex(c)) * abs(x) ** k for k, c in enumerate(self.den)))
        if abs(d) <= 1e-12 * scale:
            raise PoleError(f"pole of {self} at X={x}")
        if x == 0 and self.e < 0:
            raise PoleError("pole at X=0")
        return n / d * (x**self.e if self.e else 1)

    def eval_numeric(self, s: complex) -> complex:
        """Evaluate at complex ``s`` (``X = q^{-s}``); float error ~1e-12 relative."""
        x = cmath.exp(-complex(s) * math.log(self.q))
        return self.eval_X(x)

    # -- rendering ----------------------------------------------------
    def _poly_text(self, p, latex: bool, sym: str) -> str:
        terms = []
        for k, c in enumerate(p):
            if c.is_zero():
                continue
            ct = c.to_text(latex)
            compound = any(op in ct.lstrip("-") for op in (" + ", " - "))
            if k == 0:
                t = ct
            else:
                mono = sym if k == 1 else (f"{sym}^{{{k}}}" if latex else f"{sym}^{k}")
                if c.is_one():
                    t = mono
                elif c == -1:
                    t = "-" + mono
                else:
                    cc = f"({ct})" if compound else ct
                    t = f"{cc}{mono}" if latex else f"{cc}*{mono}"
            terms.append(t)
        if not terms:
            return "0"
        s = terms[0]
        for t in terms[1:]:
            s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return s

    def to_text(self, latex: bool = False, sym: str = "T") -> str:
        if self.is_zero():
            return "0"
        num = self._poly_text(self.num, latex, sym)
        den = self._poly_text(self.den, latex, sym)
        if self.e:
            if latex:
                mono = f"{sym}^{{{self.e}}}" if self.e != 1 else sym
            else:
                mono = f"{sym}^{self.e}" if self.e != 1 else sym
        else:
            mono = ""
        if latex:
            body = r"\frac{%s}{%s}" % (num, den) if den != "1" else num
            return f"{mono} \\cdot {body}" if mono else body
        if den == "1":
            core = num if len(self.num) == 1 and " " not in num else f"({num})"
        else:
            simple = len(self.num) == 1 and not any(ch in num for ch in " */")
            core = f"{num}/({den})" if simple else f"({num})/({den})"
        return f"{mono}*{core}" if mono else core

    def to_json_obj(self) -> dict:
        def coeffs(p):
            return [[str(x) for x in c.components()] for c in p]

        return {
            "q": self.q,
            "basis": ["1", "i", "sqrt(q)", "i*sqrt(q)"],
            "x_power": self.e,
            "numerator": coeffs(self.num),
            "denominator": coeffs(self.den),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RationalQS":
        q = int(obj["q"])

        def poly(rows):
            return tuple(Coeff(q, *(Fraction(x) for x in row)) for row in rows)

        return cls(q, poly(obj["numerator"]), poly(obj["denominator"]), int(obj["x_power"]))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def __repr__(self):
        return f"RationalQS(q={self.q}, {self.to_text()})"


def product(values: Iterable[RationalQS], q: int) -> RationalQS:
    out = RationalQS.one(q)
    for v in values:
        out = out * v
    return out
