"""Nielsen and minimum coincidence numbers for fiberwise maps of torus bundles.

A problem is a pair of straightened fiberwise maps ``f_(L_i, v_i)`` from a
linear m-torus bundle to a linear n-torus bundle over the sphere ``S^b``.
The Reidemeister invariant is the group ``G = Z^n / (L_1 - L_2)(Z^m)``
together with, for ``b = 1``, the affine automorphism of ``G`` induced by
``u -> A_N (u - (v_1 - v_2))``. Orbit counts of that automorphism give the
Nielsen number, which in turn fixes both minimum numbers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .abgroup import (
    INF,
    ExtendedNat,
    FgAbelianGroup,
    cokernel,
    ext_from_json,
    ext_to_json,
    mod_inf,
)
from .affine import AffineMap, induced_affine
from .errors import (
    DimensionMismatchError,
    NonIntertwiningError,
    NotUnimodularError,
    RankExceedsAnalyzerError,
    UndeterminedCensusError,
)
from .intlin import IntMatrix, as_matrix
from .orbits import OrbitCensus, census, census_rank1

SWITCH = IntMatrix.from_rows([[0, 1], [1, 0]])


class Factor(enum.Enum):
    KLEIN = "klein"
    TORUS = "torus"

    @property
    def sign(self) -> int:
        return -1 if self is Factor.KLEIN else 1


@dataclass(frozen=True)
class StraightMap:
    l: IntMatrix
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "l", as_matrix(self.l))
        object.__setattr__(self, "v", tuple(self.v))

    def __sub__(self, other: "StraightMap") -> "StraightMap":
        return StraightMap(self.l - other.l, tuple(a - b for a, b in zip(self.v, other.v)))


@dataclass(frozen=True)
class TorusBundleProblem:
    m: int
    n: int
    b: int
    a_m: IntMatrix
    a_n: IntMatrix
    map1: StraightMap
    map2: StraightMap

    def __post_init__(self):
        object.__setattr__(self, "a_m", as_matrix(self.a_m))
        object.__setattr__(self, "a_n", as_matrix(self.a_n))
        if self.m < 1 or self.n < 1:
            raise DimensionMismatchError("fiber dimensions must be at least 1")
        if self.b < 1:
            raise DimensionMismatchError("base sphere dimension must be at least 1")
        if self.a_m.shape != (self.m, self.m):
            raise DimensionMismatchError(f"gluing_M has shape {self.a_m.shape}, expected {(self.m, self.m)}")
        if self.a_n.shape != (self.n, self.n):
            raise DimensionMismatchError(f"gluing_N has shape {self.a_n.shape}, expected {(self.n, self.n)}")
        for name, f in (("map1", self.map1), ("map2", self.map2)):
            if f.l.shape != (self.n, self.m):
                raise DimensionMismatchError(f"{name}.L has shape {f.l.shape}, expected {(self.n, self.m)}")
            if len(f.v) != self.n:
                raise DimensionMismatchError(f"{name}.v has length {len(f.v)}, expected {self.n}")
        if self.b != 1:
            return  # monodromy is trivial over a simply connected base
        for name, a in (("gluing_M", self.a_m), ("gluing_N", self.a_n)):
            if abs(a.det()) != 1:
                raise NotUnimodularError(f"{name} has determinant {a.det()}")
        for name, f in (("map1", self.map1), ("map2", self.map2)):
            if f.l @ self.a_m != self.a_n @ f.l:
                raise NonIntertwiningError(f"{name}.L does not intertwine the gluing matrices")


@dataclass(frozen=True)
class ReidemeisterInvariant:
    group: FgAbelianGroup
    beta: Optional[AffineMap]  # None encodes the trivial action over S^b, b >= 2


@dataclass(frozen=True)
class ResultReport:
    group_structure: FgAbelianGroup
    census: Optional[OrbitCensus]  # None when the rank gate decides without counting
    nielsen: int
    mcc: int
    mc: ExtendedNat

    def to_dict(self) -> dict:
        g = self.group_structure
        return {
            "group": {"torsion": list(g.torsion), "free_rank": g.free_rank, "text": str(g)},
            "census": None if self.census is None else self.census.to_dict(),
            "N_B": self.nielsen,
            "MCC_B": self.mcc,
            "MC_B": ext_to_json(self.mc),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResultReport":
        g = FgAbelianGroup(tuple(data["group"]["torsion"]), data["group"]["free_rank"])
        c = data["census"]
        return cls(
            g,
            None if c is None else OrbitCensus.from_dict(c, g),
            data["N_B"],
            data["MCC_B"],
            ext_from_json(data["MC_B"]),
        )


def difference(p: TorusBundleProblem) -> StraightMap:
    return p.map1 - p.map2


def reidemeister_invariant(p: TorusBundleProblem) -> ReidemeisterInvariant:
    diff = difference(p)
    g, q = cokernel(diff.l)
    if p.b >= 2:
        return ReidemeisterInvariant(g, None)
    return ReidemeisterInvariant(g, induced_affine(q, g, p.a_n, diff.v))


def nu_b(g: FgAbelianGroup, c: Optional[OrbitCensus], base_rank: int) -> int:
    """Sum of the orbit counts reduced mod infinity, behind the rank gate."""
    if g.free_rank > base_rank:
        return 0
    if c is None:
        raise UndeterminedCensusError("a census is required below the rank gate")
    if c.nu_inf is None:
        raise UndeterminedCensusError("number of infinite orbits is undetermined")
    return mod_inf(c.nu_odd) + mod_inf(c.nu_even) + mod_inf(c.nu_inf)


def compute(p: TorusBundleProblem) -> ResultReport:
    inv = reidemeister_invariant(p)
    g = inv.group
    base_rank = 1 if p.b == 1 else 0
    if g.free_rank > base_rank:
        c = None
    else:
        beta = inv.beta if inv.beta is not None else AffineMap.identity(g)
        c = census(beta)
    nielsen = nu_b(g, c, base_rank)
    mc = nielsen if (nielsen == 0 or p.m + p.b == p.n) else INF
    return ResultReport(g, c, nielsen, nielsen, mc)


def _gcd_parity_odd(a: int, b: int, c: int) -> tuple:
    """``(d, a+b is an odd multiple of d)`` with ``0`` counted as an even multiple."""
    s = a + b
    d = math.gcd(s, c)
    return d, (s != 0 and (s // d) % 2 == 1)


def switch_closed_form(a: int, b: int, c: int) -> int:
    d, odd = _gcd_parity_odd(a, b, c)
    twice = d * (abs(a - b) + (1 if odd else 0))
    assert twice % 2 == 0
    return twice // 2


def switch_problem(a: int, b: int, c: int, v: Optional[Sequence[int]] = None) -> TorusBundleProblem:
    """Self-maps of the 2-torus bundle glued by the coordinate switch.

    ``v`` defaults to ``(c, 0)``; any slope vector with coordinate sum ``c``
    describes the same homotopy class.
    """
    v = (c, 0) if v is None else tuple(v)
    if sum(v) != c:
        raise ValueError(f"slope vector {v} does not have coordinate sum {c}")
    l = IntMatrix.from_rows([[a, b], [b, a]])
    return TorusBundleProblem(
        2, 2, 1, SWITCH, SWITCH,
        StraightMap(l, v),
        StraightMap(IntMatrix.zeros(2, 2), (0, 0)),
    )


def product_problem(p: TorusBundleProblem, factor: Factor) -> TorusBundleProblem:
    """Compose both maps with the inclusion into the fiberwise product with K or T."""
    if p.b != 1:
        raise ValueError("fiberwise products with K or T live over the circle")
    a_n = p.a_n.block_diag(IntMatrix.from_rows([[factor.sign]]))

    def extend(f: StraightMap) -> StraightMap:
        return StraightMap(f.l.vstack(IntMatrix.zeros(1, p.m)), f.v + (0,))

    return TorusBundleProblem(p.m, p.n + 1, 1, p.a_m, a_n, extend(p.map1), extend(p.map2))


def product_closed_form(a: int, b: int, c: int, factor: Factor) -> tuple:
    """``(MCC_B, MC_B)`` after including into the product with ``factor``."""
    if factor is Factor.KLEIN and abs(a) != abs(b):
        d, odd = _gcd_parity_odd(a, b, c)
        value = d if odd else 0
        return value, value
    return 0, 0


def product_census(a: int, b: int, c: int, factor: Factor) -> OrbitCensus:
    inv = reidemeister_invariant(product_problem(switch_problem(a, b, c), factor))
    if inv.group.free_rank != 1:
        raise RankExceedsAnalyzerError(
            f"product group {inv.group} has rank {inv.group.free_rank}; the rank gate already gives 0"
        )
    return census_rank1(inv.beta)
