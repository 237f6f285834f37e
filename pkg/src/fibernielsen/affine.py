"""Affine automorphisms ``u -> alpha(u) + w`` of finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .abgroup import (
    FgAbelianGroup,
    GroupElement,
    QuotientMap,
    check_endomorphism,
    cokernel,
    endomorphisms_equal,
)
from .errors import (
    DimensionMismatchError,
    GroupMismatchError,
    LatticeNotPreservedError,
    NotInvertibleError,
    NotUnimodularError,
)
from .intlin import IntMatrix, as_matrix, solve_in_lattice


def is_automorphism(g: FgAbelianGroup, e: IntMatrix) -> bool:
    # A surjective endomorphism of a finitely generated abelian group is
    # injective, so checking that the image is everything suffices.
    quotient, _ = cokernel(e.hstack(g.relation_matrix()))
    return quotient.cardinality() == 1


def inverse_endomorphism(g: FgAbelianGroup, e: IntMatrix) -> IntMatrix:
    rel = g.relation_matrix()
    aug = e.hstack(rel)
    k = g.ngens
    cols = []
    for i in range(k):
        target = tuple(int(i == j) for j in range(k))
        x = solve_in_lattice(aug, target)
        if x is None:
            raise NotInvertibleError(f"endomorphism {e} is not surjective on {g}")
        cols.append(g.reduce(x[:k]).coords)
    return IntMatrix.from_columns(cols, k) if k else IntMatrix.zeros(0, 0)


@dataclass(frozen=True)
class AffineMap:
    """``beta(u) = linear @ u + translation`` on ``group``.

    Construction checks that ``linear`` is a well-defined automorphism.
    Equality is structural: maps differing by a coboundary translation are
    different values with the same orbit census.
    """

    group: FgAbelianGroup
    linear: IntMatrix
    translation: GroupElement

    def __post_init__(self):
        lin = as_matrix(self.linear)
        g = self.group
        check_endomorphism(g, lin)
        # store a canonical representative: torsion rows reduced
        cols = [g.reduce(lin.col(j)).coords for j in range(g.ngens)]
        lin = IntMatrix.from_columns(cols, g.ngens) if g.ngens else IntMatrix.zeros(0, 0)
        object.__setattr__(self, "linear", lin)
        if not isinstance(self.translation, GroupElement):
            object.__setattr__(self, "translation", g.reduce(tuple(self.translation)))
        if self.translation.group != g:
            raise GroupMismatchError("translation lies in a different group")
        if not is_automorphism(g, lin):
            raise NotInvertibleError(f"linear part {lin} is not an automorphism of {g}")

    @classmethod
    def identity(cls, g: FgAbelianGroup) -> "AffineMap":
        return cls(g, IntMatrix.identity(g.ngens), g.zero())

    @classmethod
    def translation_by(cls, w: GroupElement) -> "AffineMap":
        return cls(w.group, IntMatrix.identity(w.group.ngens), w)

    def linear_part(self, x: GroupElement) -> GroupElement:
        return self.group.reduce(self.linear.apply(x.coords))

    def apply(self, x: GroupElement) -> GroupElement:
        if x.group != self.group:
            raise GroupMismatchError("element not in the map's group")
        return self.group.reduce(
            [a + b for a, b in zip(self.linear.apply(x.coords), self.translation.coords)]
        )

    __call__ = apply

    def raw_step(self):
        """Fast ``tuple -> tuple`` version of :meth:`apply` for enumeration loops."""
        k = self.group.ngens
        rows = [self.linear.row(i) for i in range(k)]
        w = self.translation.coords
        orders = self.group.orders

        def step(c):
            out = []
            for i in range(k):
                r = rows[i]
                s = w[i]
                for j in range(k):
                    s += r[j] * c[j]
                d = orders[i]
                out.append(s % d if d else s)
            return tuple(out)

        return step

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        if other.group != self.group:
            raise GroupMismatchError("cannot compose maps on different groups")
        lin = self.linear @ other.linear
        return AffineMap(self.group, lin, self.apply(other.translation))

    def inverse(self) -> "AffineMap":
        inv = inverse_endomorphism(self.group, self.linear)
        w = self.group.reduce([-x for x in inv.apply(self.translation.coords)])
        return AffineMap(self.group, inv, w)

    def power(self, k: int) -> "AffineMap":
        base = self if k >= 0 else self.inverse()
        out = AffineMap.identity(self.group)
        for _ in range(abs(k)):
            out = base.compose(out)
        return out

    def is_involution(self) -> bool:
        return is_involution(self)


def apply(f: AffineMap, x: GroupElement) -> GroupElement:
    return f.apply(x)


def is_involution(f: AffineMap) -> bool:
    """Whether the linear part squares to the identity on the group."""
    return endomorphisms_equal(f.group, f.linear @ f.linear, IntMatrix.identity(f.group.ngens))


def conjugate(f: AffineMap, h: AffineMap) -> AffineMap:
    """``h o f o h^-1``."""
    return h.compose(f).compose(h.inverse())


def direct_sum(f: AffineMap, g: AffineMap) -> AffineMap:
    """``f + g`` acting on the direct sum, with coordinates re-sorted canonically.

    Only supports the case where at most one summand has torsion or the
    torsion of the second summand is empty, which is all the product
    construction needs.
    """
    a, b = f.group, g.group
    if b.torsion and (a.torsion or a.free_rank):
        raise NotImplementedError("direct sums that interleave torsion are not supported")
    group = FgAbelianGroup(a.torsion, a.free_rank + b.free_rank)
    lin = f.linear.block_diag(g.linear)
    return AffineMap(group, lin, group.reduce(f.translation.coords + g.translation.coords))


def induced_affine(
    q: QuotientMap, g: FgAbelianGroup, a_n: IntMatrix, v: Sequence[int]
) -> AffineMap:
    """The automorphism of ``Z^n / L(Z^m)`` induced by ``u -> a_n (u - v)``."""
    a_n = as_matrix(a_n)
    n = q.ambient_dim
    if a_n.shape != (n, n):
        raise DimensionMismatchError(f"gluing matrix of shape {a_n.shape} for ambient dimension {n}")
    if len(v) != n:
        raise DimensionMismatchError(f"slope vector of length {len(v)} for ambient dimension {n}")
    if abs(a_n.det()) != 1:
        raise NotUnimodularError(f"gluing matrix {a_n} has determinant {a_n.det()}")
    pres = q.presentation
    for j, col in enumerate(pres.columns()):
        if solve_in_lattice(pres, a_n.apply(col)) is None:
            raise LatticeNotPreservedError(
                f"gluing matrix sends relation column {j} = {col} outside the relation lattice"
            )
    lin = q.projection @ a_n @ q.section if g.ngens else IntMatrix.zeros(0, 0)
    w = q.project(g, [-x for x in a_n.apply(tuple(v))])
    return AffineMap(g, lin, w)
