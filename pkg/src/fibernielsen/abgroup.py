"""Finitely generated abelian groups in invariant-factor coordinates.

A group ``Z/d_1 + ... + Z/d_k + Z^r`` is stored as its torsion factors
``(d_1, ..., d_k)`` (each >= 2, ``d_i | d_{i+1}``) and its free rank ``r``.
Elements are integer tuples of length ``k + r``; torsion coordinates are kept
as least nonnegative residues so that elements hash and compare structurally.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import (
    DimensionMismatchError,
    GroupMismatchError,
    IllDefinedEndomorphismError,
    InfiniteGroupError,
)
from .intlin import IntMatrix, as_matrix, integer_kernel, snf, solve_in_lattice, unimodular_inverse


class _Infinity:
    """The single infinite value of the extended naturals."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("extended-natural-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()
ExtendedNat = Union[int, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def mod_inf(x: ExtendedNat) -> int:
    """Replace infinity by 0, keep finite values."""
    return 0 if x is INF else x


def ext_add(x: ExtendedNat, y: ExtendedNat) -> ExtendedNat:
    return INF if (x is INF or y is INF) else x + y


def ext_sub(x: ExtendedNat, y: int) -> ExtendedNat:
    if y is INF:
        raise ValueError("cannot subtract infinity")
    return INF if x is INF else x - y


def ext_div(x: ExtendedNat, k: int) -> ExtendedNat:
    """Exact division by a positive integer; infinity stays infinity."""
    if x is INF:
        return INF
    if x % k:
        raise ValueError(f"{x} is not divisible by {k}")
    return x // k


def ext_to_json(x: ExtendedNat):
    return "inf" if x is INF else x


def ext_from_json(x) -> ExtendedNat:
    if x == "inf":
        return INF
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"expected an integer or 'inf', got {x!r}")
    return x


@dataclass(frozen=True)
class FgAbelianGroup:
    torsion: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion factor {d} < 2")
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError(f"torsion factors {d}, {e} break the divisibility chain")

    @classmethod
    def from_invariants(cls, diagonal: Sequence[int], ambient_dim: int) -> "FgAbelianGroup":
        nonzero = [abs(x) for x in diagonal if x != 0]
        return cls(tuple(x for x in nonzero if x != 1), ambient_dim - len(nonzero))

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple:
        """Relation order of each canonical generator; 0 for free generators."""
        return self.torsion + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def rank(self) -> int:
        return self.free_rank

    def cardinality(self) -> ExtendedNat:
        return math.prod(self.torsion) if self.is_finite else INF

    def relation_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.orders)

    def reduce(self, raw: Sequence[int]) -> "GroupElement":
        if len(raw) != self.ngens:
            raise DimensionMismatchError(f"{len(raw)} coordinates for a group with {self.ngens} generators")
        return GroupElement(self, reduce_coords(self.orders, raw))

    def __call__(self, *coords) -> "GroupElement":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return self.reduce(coords)

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.ngens)

    def elements(self) -> Iterator["GroupElement"]:
        """All elements in lexicographic coordinate order."""
        if not self.is_finite:
            raise InfiniteGroupError(f"cannot enumerate the infinite group {self}")
        for c in itertools.product(*(range(d) for d in self.torsion)):
            yield GroupElement(self, c)

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def reduce_coords(orders: Sequence[int], raw: Sequence[int]) -> tuple:
    return tuple(x % d if d else x for x, d in zip(raw, orders))


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    coords: tuple

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise GroupMismatchError("elements belong to different groups")

    def __add__(self, other):
        self._check(other)
        return self.group.reduce([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return self.group.reduce([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return self.group.reduce([-a for a in self.coords])

    def __rmul__(self, k: int):
        return self.group.reduce([k * a for a in self.coords])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "(" + ", ".join(map(str, self.coords)) + ")"


def add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def neg(x: GroupElement) -> GroupElement:
    return -x


def element_order(x: GroupElement) -> ExtendedNat:
    if any(c for c, d in zip(x.coords, x.group.orders) if d == 0):
        return INF
    out = 1
    for c, d in zip(x.coords, x.group.torsion):
        out = math.lcm(out, d // math.gcd(c, d))
    return out


def cardinality(g: FgAbelianGroup) -> ExtendedNat:
    return g.cardinality()


def enumerate_elements(g: FgAbelianGroup) -> list:
    return list(g.elements())


@dataclass(frozen=True)
class QuotientMap:
    """Coordinates for ``Z^n / presentation(Z^m)``.

    ``projection`` (k x n) sends ambient vectors to raw canonical coordinates,
    ``section`` (n x k) lifts canonical coordinates back to ``Z^n``.
    """

    ambient_dim: int
    projection: IntMatrix
    section: IntMatrix
    presentation: IntMatrix

    def project(self, group: FgAbelianGroup, u: Sequence[int]) -> GroupElement:
        return group.reduce(self.projection.apply(tuple(u)))

    def lift(self, x: GroupElement) -> tuple:
        return self.section.apply(x.coords)


def cokernel(l: IntMatrix) -> tuple:
    """``Z^n / l(Z^m)`` in canonical form together with its quotient map."""
    l = as_matrix(l)
    n = l.rows
    dec = snf(l)
    diag = dec.diagonal
    keep = [i for i in range(n) if i >= len(diag) or diag[i] == 0 or abs(diag[i]) != 1]
    # torsion coordinates precede free ones because snf puts zeros last
    group = FgAbelianGroup.from_invariants(diag, n)
    u_inv = unimodular_inverse(dec.u)
    if keep:
        projection = dec.u.submatrix(keep, range(n))
        section = u_inv.submatrix(range(n), keep)
    else:
        projection, section = IntMatrix.zeros(0, n), IntMatrix.zeros(n, 0)
    return group, QuotientMap(n, projection, section, l)


def check_endomorphism(g: FgAbelianGroup, e: IntMatrix) -> None:
    """Raise unless ``e`` maps the relation lattice of ``g`` into itself."""
    e = as_matrix(e)
    k = g.ngens
    if e.shape != (k, k):
        raise DimensionMismatchError(f"endomorphism of shape {e.shape} on a group with {k} generators")
    orders = g.orders
    for i, di in enumerate(orders):
        if di == 0:
            continue
        for j, dj in enumerate(orders):
            x = di * e[j, i]
            if (dj == 0 and x != 0) or (dj != 0 and x % dj):
                raise IllDefinedEndomorphismError(
                    f"generator {i} of order {di} is sent to an element of incompatible order"
                )


def apply_endomorphism(g: FgAbelianGroup, e: IntMatrix, x: GroupElement) -> GroupElement:
    if x.group != g:
        raise GroupMismatchError("element not in the endomorphism's group")
    return g.reduce(e.apply(x.coords))


def endomorphisms_equal(g: FgAbelianGroup, e: IntMatrix, f: IntMatrix) -> bool:
    """Equality as maps on the group, i.e. columns agree modulo relations."""
    diff = e - f
    return all(g.reduce(diff.col(j)).is_zero() for j in range(g.ngens))


def in_endomorphism_image(g: FgAbelianGroup, e: IntMatrix, target: GroupElement) -> bool:
    e = as_matrix(e)
    check_endomorphism(g, e)
    if target.group != g:
        raise GroupMismatchError("target not in the endomorphism's group")
    return solve_in_lattice(e.hstack(g.relation_matrix()), target.coords) is not None


def subgroup_order(g: FgAbelianGroup, generators: Sequence[Sequence[int]]) -> ExtendedNat:
    """Cardinality of the subgroup generated by raw coordinate vectors."""
    gens = [tuple(x) for x in generators]
    nt = len(g.torsion)
    if any(x[nt:] != (0,) * g.free_rank for x in gens):
        return INF
    if nt == 0:
        return 1
    tors = FgAbelianGroup(g.torsion)
    rel = tors.relation_matrix()
    m = rel if not gens else IntMatrix.from_columns([x[:nt] for x in gens], nt).hstack(rel)
    quotient, _ = cokernel(m)
    return tors.cardinality() // quotient.cardinality()


def endomorphism_image_order(g: FgAbelianGroup, e: IntMatrix) -> ExtendedNat:
    return subgroup_order(g, e.columns())


def kernel_order(g: FgAbelianGroup, e: IntMatrix) -> ExtendedNat:
    """Cardinality of the kernel of an endomorphism ``e`` of ``g``."""
    e = as_matrix(e)
    check_endomorphism(g, e)
    k = g.ngens
    # x lies in the kernel iff e x + D y = 0 for some y
    basis = integer_kernel(e.hstack(g.relation_matrix()))
    return subgroup_order(g, [b[:k] for b in basis])
