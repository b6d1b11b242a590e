"""epsilon-hermitian spaces described by their invariants.

A :class:`HermSpace` never stores a Gram matrix.  It keeps the case tag,
the rank ``n`` over the base division algebra, the algebra data (quadratic
extension or quaternion algebra, ``None`` meaning split) and the quadratic
invariants that every formula downstream consumes:

* ``disc``  - discriminant class, with the normalizations
  ``N(R) (-1)^{n(n-1)/2} 2^{-n}`` (SO, Sp), ``N(R) (-1)^{n(n-1)/2}`` (U) and
  ``N(R) (-1)^n`` (Q1, Q-1);
* ``hasse`` - Hasse invariant ``prod_{i<j} (a_i, a_j)`` (SO, and the split
  Q-1 case through its underlying quadratic space);
* ``eps``   - ``chi_E(disc)`` in the unitary case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional, Sequence

from .localfield import (
    ONE,
    SQUARE_CLASSES,
    LocalFieldCtx,
    SquareClass,
    classify_quad_ext,
    hilbert_symbol,
    local_field,
)

__all__ = [
    "CASES",
    "SpaceError",
    "HermSpace",
    "DoublingNilpotent",
    "from_diagonal",
    "std_dimension",
    "classify_minimal",
    "disc_of_nilpotent",
    "NOT_MINIMAL",
]

CASES = ("GL", "SO", "Sp", "qGL", "U", "QGL", "Q1", "Q-1")
GL_TYPE = ("GL", "qGL", "QGL")
QUAT = ("QGL", "Q1", "Q-1")
NOT_MINIMAL = "not minimal"


class SpaceError(ValueError):
    pass


def _prod(ctx: LocalFieldCtx, classes) -> SquareClass:
    out = ONE
    for c in classes:
        out = out * c
    return out


def _sign_class(ctx: LocalFieldCtx, sign: int) -> SquareClass:
    return ONE if sign == 1 else ctx.minus_one


def _so_det(ctx: LocalFieldCtx, n: int, disc: SquareClass) -> SquareClass:
    """Determinant class of a quadratic space of dimension n with the given disc."""
    d = disc * _sign_class(ctx, (-1) ** (n * (n - 1) // 2))
    return d * ctx.two if n % 2 else d


def _hasse(ctx: LocalFieldCtx, entries: Sequence[SquareClass]) -> int:
    c = 1
    for a, b in itertools.combinations(entries, 2):
        c *= hilbert_symbol(ctx, a, b)
    return c


@lru_cache(maxsize=None)
def _so_forms(q: int, n: int) -> frozenset:
    """All (det, hasse) pairs realized by n-dimensional quadratic forms."""
    ctx = local_field(q)
    return frozenset(
        (_prod(ctx, e), _hasse(ctx, e)) for e in itertools.combinations_with_replacement(SQUARE_CLASSES, n)
    )


def _so_isotropic(ctx: LocalFieldCtx, n: int, det: SquareClass, c: int) -> bool:
    # isotropic iff V = H + V' for some V'; c(H + V') = c(V') (-1, det V')
    if n < 2:
        return False
    if n >= 5:
        return True
    d2 = det * ctx.minus_one
    return (d2, c * hilbert_symbol(ctx, ctx.minus_one, d2)) in _so_forms(ctx.q, n - 2)


@dataclass(frozen=True)
class HermSpace:
    case: str
    n: int
    q: int
    ext: Optional[SquareClass] = None
    quat: Optional[tuple] = None
    disc: SquareClass = ONE
    hasse: int = 1
    eps: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.case not in CASES:
            raise SpaceError(f"unknown case tag {self.case!r}")
        if self.n < 0:
            raise SpaceError("rank must be nonnegative")
        ctx = self.ctx
        if self.case == "Sp" and self.n % 2:
            raise SpaceError("symplectic spaces have even dimension")
        if self.ext is not None and self.case not in ("U", "qGL"):
            raise SpaceError(f"case {self.case} takes no quadratic extension")
        if self.quat is not None and self.case not in QUAT:
            raise SpaceError(f"case {self.case} takes no quaternion algebra")
        if self.ext is not None:
            classify_quad_ext(ctx, self.ext)  # rejects the trivial class
        if self.quat is not None and hilbert_symbol(ctx, *self.quat) == 1:
            object.__setattr__(self, "quat", None)
        if self.n == 0 and (not self.disc.is_trivial() or self.hasse != 1):
            raise SpaceError("the zero space has trivial invariants")
        if self.case in ("SO",) or (self.case == "Q-1" and self.quat is None):
            dim = self.n if self.case == "SO" else 2 * self.n
            det = _so_det(ctx, dim, self.disc)
            if (det, self.hasse) not in _so_forms(self.q, dim) and dim > 0:
                raise SpaceError(f"no quadratic space of dim {dim} with disc {self.disc.name}, hasse {self.hasse}")
        elif self.hasse != 1:
            raise SpaceError(f"hasse invariant is not an invariant in case {self.case}")
        if self.case == "U" and self.ext is not None:
            # disc lives in F^x / N(E^x); keep a canonical representative
            e = hilbert_symbol(ctx, self.ext, self.disc)
            if self.n == 0 and e == -1:
                raise SpaceError("the zero space has trivial invariants")
            rep = ONE if e == 1 else next(c for c in SQUARE_CLASSES if hilbert_symbol(ctx, self.ext, c) == -1)
            object.__setattr__(self, "disc", rep)
            object.__setattr__(self, "eps", e)
        elif self.case in ("GL", "qGL", "QGL", "Sp", "U") and not self.disc.is_trivial():
            raise SpaceError(f"disc is not an invariant in case {self.case}")
        if self.case == "Q1":
            want = _sign_class(ctx, (-1) ** self.n)
            if self.disc != want:
                raise SpaceError("Q1 spaces have disc (-1)^n")
        if self.case == "Q-1" and self.quat is not None and self.n == 1 and self.disc.is_trivial():
            raise SpaceError("a rank-one skew-hermitian space has nontrivial disc")

    @property
    def ctx(self) -> LocalFieldCtx:
        return local_field(self.q)

    @property
    def is_split(self) -> bool:
        if self.case in ("U", "qGL"):
            return self.ext is None
        if self.case in QUAT:
            return self.quat is None
        return False

    @property
    def ext_info(self):
        return None if self.ext is None else classify_quad_ext(self.ctx, self.ext)

    def kernel_dim(self) -> int:
        """Dimension (over the base algebra) of the anisotropic kernel."""
        n, ctx = self.n, self.ctx
        if self.case in GL_TYPE or self.case == "Sp":
            return 0
        if self.case == "SO":
            det = _so_det(ctx, n, self.disc)
            k = n
            c = self.hasse
            while _so_isotropic(ctx, k, det, c):
                det = det * ctx.minus_one
                c = c * hilbert_symbol(ctx, ctx.minus_one, det)
                k -= 2
            return k
        if self.case == "U":
            if self.ext is None:
                return 0
            return 1 if n % 2 else (2 if self.eps == -1 else 0)
        if self.case == "Q1":
            return 0 if self.quat is None else n % 2
        # Q-1
        if self.quat is None:
            k2 = self.natural().kernel_dim()
            return k2 // 2
        if n % 2 == 0:
            return 0 if self.disc.is_trivial() else 2
        return 3 if self.disc.is_trivial() else 1

    @property
    def anisotropic(self) -> bool:
        return self.kernel_dim() == self.n

    def witt_index(self) -> int:
        if self.case in GL_TYPE:
            return self.n
        return (self.n - self.kernel_dim()) // 2

    def peel(self, m: int) -> "HermSpace":
        """Remove m hyperbolic planes (or m from the rank in the GL-type cases)."""
        if m < 0 or m > self.witt_index():
            raise SpaceError(f"cannot split off {m} hyperbolic planes (Witt index {self.witt_index()})")
        if self.case in GL_TYPE:
            return replace(self, n=self.n - m)
        c = self.hasse
        if self.case == "SO" or (self.case == "Q-1" and self.quat is None):
            ctx = self.ctx
            dim = self.n if self.case == "SO" else 2 * self.n
            det = _so_det(ctx, dim, self.disc)
            for _ in range(m * (1 if self.case == "SO" else 2)):
                det = det * ctx.minus_one
                c = c * hilbert_symbol(ctx, ctx.minus_one, det)
        n2 = self.n - 2 * m
        if n2 == 0:
            return replace(self, n=0, disc=ONE, hasse=1)
        return replace(self, n=n2, hasse=c)

    def natural(self) -> "HermSpace":
        """The space over F attached to a split case (U -> GL, Q1 -> Sp, Q-1 -> SO, ...)."""
        if not self.is_split:
            raise SpaceError("natural() needs split algebra data")
        if self.case in ("U",):
            return HermSpace("GL", self.n, self.q)
        if self.case == "qGL":
            return HermSpace("GL", self.n, self.q)
        if self.case == "QGL":
            return HermSpace("GL", 2 * self.n, self.q)
        if self.case == "Q1":
            return HermSpace("Sp", 2 * self.n, self.q)
        return HermSpace("SO", 2 * self.n, self.q, disc=self.disc, hasse=self.hasse)

    # -- serialization ---------------------------------------------------
    def to_json_obj(self) -> dict:
        obj = {"case": self.case, "n": self.n, "q": self.q}
        if self.ext is not None:
            obj["E"] = self.ext.name
        elif self.case in ("U", "qGL"):
            obj["E"] = "split"
        if self.quat is not None:
            obj["quat"] = [self.quat[0].name, self.quat[1].name]
        elif self.case in QUAT:
            obj["quat"] = "split"
        if not self.disc.is_trivial() or self.case in ("SO", "Q-1"):
            obj["disc"] = self.disc.name
        if self.case in ("SO", "Q-1"):
            obj["hasse"] = self.hasse
        if self.case == "U" and self.ext is not None:
            obj["eps"] = self.eps
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "HermSpace":
        ext = obj.get("E")
        quat = obj.get("quat")
        return cls(
            obj["case"],
            int(obj["n"]),
            int(obj["q"]),
            ext=None if ext in (None, "split") else SquareClass.parse(ext),
            quat=None if quat in (None, "split") else tuple(SquareClass.parse(x) for x in quat),
            disc=SquareClass.parse(obj.get("disc", "1")),
            hasse=int(obj.get("hasse", 1)),
        )

    def label(self) -> str:
        parts = [f"n={self.n}"]
        if self.case in ("U", "qGL"):
            parts.append(f"E={self.ext.name if self.ext is not None else 'split'}")
        if self.case in QUAT:
            parts.append("quat=split" if self.quat is None else f"quat=({self.quat[0].name},{self.quat[1].name})")
        if self.case in ("SO", "Q-1") and self.n:
            parts.append(f"disc={self.disc.name}")
        if self.case == "SO" and self.n or self.case == "Q-1" and self.quat is None and self.n:
            parts.append(f"hasse={self.hasse}")
        if self.case == "U" and self.ext is not None and self.n:
            parts.append(f"eps={self.eps}")
        return f"{self.case}({', '.join(parts)})"


def quasi_split_so(q: int, n: int, disc: SquareClass = ONE) -> HermSpace:
    """The SO space of dimension n and given disc with the largest Witt index."""
    if n == 0:
        return HermSpace("SO", 0, q)
    best = None
    for c in (1, -1):
        try:
            sp = HermSpace("SO", n, q, disc=disc, hasse=c)
        except SpaceError:
            continue
        if best is None or sp.witt_index() > best.witt_index():
            best = sp
    if best is None:
        raise SpaceError(f"no SO space of dimension {n} with disc {disc.name}")
    return best


def from_diagonal(case: str, entries: Sequence[SquareClass], q: int, ext=None, quat=None) -> HermSpace:
    """Space with Gram matrix diag(entries).

    SO: entries are the diagonal classes.  U: the (F-valued) diagonal
    entries.  Q1: entries in F.  Q-1: pure quaternion entries, given by their
    reduced norms.
    """
    ctx = local_field(q)
    n = len(entries)
    if n == 0:
        return HermSpace(case, 0, q, ext=ext, quat=quat)
    det = _prod(ctx, entries)
    if case == "SO":
        disc = _so_det(ctx, n, det)  # the normalization is an involution on classes
        return HermSpace("SO", n, q, disc=disc, hasse=_hasse(ctx, entries))
    if case == "U":
        if ext is None:
            raise SpaceError("from_diagonal(U) needs a quadratic extension")
        disc = det * _sign_class(ctx, (-1) ** (n * (n - 1) // 2))
        return HermSpace("U", n, q, ext=ext, disc=disc)
    if case == "Q1":
        return HermSpace("Q1", n, q, quat=quat, disc=_sign_class(ctx, (-1) ** n))
    if case == "Q-1":
        disc = det * _sign_class(ctx, (-1) ** n)
        hasse = 1
        sp = None
        if quat is None or hilbert_symbol(ctx, *quat) == 1:
            # the underlying quadratic space has no canonical Hasse choice here
            sp = quasi_split_so(q, 2 * n, disc)
            hasse = sp.hasse
        return HermSpace("Q-1", n, q, quat=quat, disc=disc, hasse=hasse)
    raise SpaceError(f"from_diagonal does not apply to case {case}")


def std_dimension(space: HermSpace) -> int:
    n = space.n
    return {
        "GL": 2 * n,
        "U": 2 * n,
        "Q-1": 2 * n,
        "SO": 2 * (n // 2),
        "Sp": n + 1,
        "qGL": 4 * n,
        "QGL": 4 * n,
        "Q1": 2 * n + 1,
    }[space.case]


def classify_minimal(space: HermSpace) -> str:
    c, n = space.case, space.n
    if (c == "SO" and n in (0, 1)) or (c in ("Sp", "U", "Q1", "Q-1") and n == 0):
        return "trivial"
    if c == "SO" and n in (2, 3, 4) and space.anisotropic:
        return f"SOa{n}"
    if c in ("Q1", "Q-1") and n == 1 and space.quat is not None:
        return f"{c}_1"
    if c == "U" and n == 1 and space.ext is not None:
        return "U1"
    if c == "U" and n == 2 and space.ext is not None and space.ext_info.ramified and space.anisotropic:
        return "Ura2"
    return NOT_MINIMAL


@dataclass(frozen=True)
class DoublingNilpotent:
    """N_V(A) as (valuation, square class).

    In the unitary and qGL cases the stored value is the F-norm of
    ``N_V(A)``.  In the GL-type cases ``nv2`` holds ``N_V(-A/2)`` next to
    ``N_V(A/2)``.  The odd orthogonal case stores ``N_V(A~_L)``.
    """

    val: int = 0
    cls: SquareClass = ONE
    val2: int = 0
    cls2: SquareClass = ONE
    corank_one: bool = False


def disc_of_nilpotent(ctx: LocalFieldCtx, n: int, nv: SquareClass) -> SquareClass:
    """disc(A) = (-1)^n N_V(A), with disc = 1 when n = 0."""
    if n == 0:
        return ONE
    return nv * _sign_class(ctx, (-1) ** n)
