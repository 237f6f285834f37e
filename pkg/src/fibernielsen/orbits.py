"""Orbit censuses of affine automorphisms (the action of Z by iteration).

Three independent engines:

* :func:`census_bruteforce` walks every orbit of a finite group.
* :func:`census_involution_closed_form` counts orbits from ``q0``, the order
  of ``(alpha + id)(w)``, when ``alpha`` is an involution.
* :func:`census_rank1` handles groups ``T + Z`` with ``T`` finite by reducing
  to finitely many levels of the free coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .abgroup import (
    INF,
    ExtendedNat,
    FgAbelianGroup,
    GroupElement,
    element_order,
    endomorphisms_equal,
    ext_div,
    ext_sub,
    ext_to_json,
    ext_from_json,
    in_endomorphism_image,
    kernel_order,
)
from .affine import AffineMap, is_involution
from .errors import (
    CensusMismatchError,
    InfiniteGroupError,
    NotInvolutionError,
    RankExceedsAnalyzerError,
)
from .intlin import IntMatrix

UNDETERMINED = None  # value of nu_inf when the number of infinite orbits is not known


@dataclass(frozen=True)
class OrbitCensus:
    nu_odd: ExtendedNat
    nu_even: ExtendedNat
    nu_inf: Optional[ExtendedNat]
    orbits: Optional[tuple] = None  # ((representative, size), ...)

    def counts(self) -> tuple:
        return (self.nu_odd, self.nu_even, self.nu_inf)

    def to_dict(self) -> dict:
        out = {
            "nu_odd": ext_to_json(self.nu_odd),
            "nu_even": ext_to_json(self.nu_even),
            "nu_inf": None if self.nu_inf is None else ext_to_json(self.nu_inf),
        }
        if self.orbits is not None:
            out["orbits"] = [
                {"representative": list(rep.coords), "size": ext_to_json(size)}
                for rep, size in self.orbits
            ]
        return out

    @classmethod
    def from_dict(cls, data: dict, group: FgAbelianGroup) -> "OrbitCensus":
        orbits = None
        if "orbits" in data:
            orbits = tuple(
                (GroupElement(group, tuple(o["representative"])), ext_from_json(o["size"]))
                for o in data["orbits"]
            )
        nu_inf = data["nu_inf"]
        return cls(
            ext_from_json(data["nu_odd"]),
            ext_from_json(data["nu_even"]),
            None if nu_inf is None else ext_from_json(nu_inf),
            orbits,
        )


def orbit_partition(beta: AffineMap) -> list:
    """Orbits of ``beta`` on a finite group as lists of coordinate tuples.

    Each orbit starts at its lexicographically least element.
    """
    g = beta.group
    if not g.is_finite:
        raise InfiniteGroupError(f"cannot enumerate orbits on the infinite group {g}")
    step = beta.raw_step()
    seen = set()
    orbits = []
    for x in g.elements():
        start = x.coords
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        y = step(start)
        while y != start:
            orbit.append(y)
            seen.add(y)
            y = step(y)
        orbits.append(orbit)
    return orbits


def census_bruteforce(beta: AffineMap) -> OrbitCensus:
    g = beta.group
    orbits = orbit_partition(beta)
    sizes = [len(o) for o in orbits]
    odd = sum(1 for s in sizes if s % 2)
    return OrbitCensus(
        odd,
        len(sizes) - odd,
        0,
        tuple((GroupElement(g, o[0]), len(o)) for o in orbits),
    )


def involution_q0(beta: AffineMap) -> ExtendedNat:
    """Order of ``(alpha + id)(w)``."""
    w = beta.translation
    return element_order(beta.linear_part(w) + w)


def condition_star(beta: AffineMap) -> bool:
    """``q0`` odd and ``q0 * w`` lies in the image of ``alpha - id``."""
    q0 = involution_q0(beta)
    if q0 is INF or q0 % 2 == 0:
        return False
    g = beta.group
    return in_endomorphism_image(g, beta.linear - IntMatrix.identity(g.ngens), q0 * beta.translation)


def census_involution_closed_form(beta: AffineMap) -> OrbitCensus:
    if not is_involution(beta):
        raise NotInvolutionError("linear part is not an involution")
    g = beta.group
    q0 = involution_q0(beta)
    if q0 is INF:
        # every orbit is infinite, but their number is not determined here
        return OrbitCensus(0, 0, UNDETERMINED)
    alpha_minus_id = beta.linear - IntMatrix.identity(g.ngens)
    fixed = kernel_order(g, alpha_minus_id)
    size = g.cardinality()
    if condition_star(beta):
        if endomorphisms_equal(g, alpha_minus_id, IntMatrix.zeros(g.ngens, g.ngens)):
            rest = 0
        elif size is INF:
            rest = INF
        else:
            rest = ext_sub(size, fixed)
        return OrbitCensus(ext_div(fixed, q0), ext_div(rest, 2 * q0), 0)
    return OrbitCensus(0, ext_div(size, 2 * q0), 0)


@dataclass(frozen=True)
class Rank1Decomposition:
    """``beta(t, z) = (A_T t + z s + w_t, epsilon z + w_z)`` on ``T + Z``."""

    torsion_part: FgAbelianGroup
    torsion_linear: IntMatrix
    epsilon: int
    shear: GroupElement
    w_t: GroupElement
    w_z: int

    def level_map(self, z: int) -> AffineMap:
        """``beta`` restricted to (or transported between) levels: ``t -> A_T t + z s + w_t``."""
        t = self.torsion_part
        shift = t.reduce([z * a + b for a, b in zip(self.shear.coords, self.w_t.coords)])
        return AffineMap(t, self.torsion_linear, shift)

    def block_matrix(self) -> IntMatrix:
        k = len(self.torsion_part.torsion)
        top = [list(self.torsion_linear.row(i)) + [self.shear.coords[i]] for i in range(k)]
        return IntMatrix.from_rows(top + [[0] * k + [self.epsilon]], k + 1)


def rank1_decompose(beta: AffineMap) -> Rank1Decomposition:
    g = beta.group
    if g.free_rank != 1:
        raise RankExceedsAnalyzerError(f"rank-1 analyzer needs free rank 1, got {g.free_rank}")
    k = len(g.torsion)
    lin = beta.linear
    eps = lin[k, k]
    if eps not in (1, -1) or any(lin[k, j] for j in range(k)):
        raise AssertionError(f"linear part {lin} is not block triangular with +-1 on the free part")
    t = FgAbelianGroup(g.torsion)
    a_t = lin.submatrix(range(k), range(k)) if k else IntMatrix.zeros(0, 0)
    return Rank1Decomposition(
        t,
        a_t,
        eps,
        t.reduce([lin[i, k] for i in range(k)]),
        t.reduce(beta.translation.coords[:k]),
        beta.translation.coords[k],
    )


def census_rank1(beta: AffineMap) -> OrbitCensus:
    dec = rank1_decompose(beta)
    t = dec.torsion_part
    if dec.epsilon == 1:
        if dec.w_z != 0:
            # each orbit climbs through the levels and meets T x [0, |w_z|) exactly once
            return OrbitCensus(0, 0, t.cardinality() * abs(dec.w_z))
        period = element_order(dec.shear)
        odd = even = False
        for z in range(period):
            c = census_bruteforce(dec.level_map(z))
            odd = odd or c.nu_odd > 0
            even = even or c.nu_even > 0
        return OrbitCensus(INF if odd else 0, INF if even else 0, 0)
    if dec.w_z % 2:
        return OrbitCensus(0, INF, 0)
    fixed_level = census_bruteforce(dec.level_map(dec.w_z // 2))
    return OrbitCensus(fixed_level.nu_odd, INF, 0)


def census(beta: AffineMap) -> OrbitCensus:
    g = beta.group
    if g.is_finite:
        out = census_bruteforce(beta)
        if is_involution(beta):
            closed = census_involution_closed_form(beta)
            if closed.counts() != out.counts():
                raise CensusMismatchError(
                    f"closed form {closed.counts()} disagrees with enumeration {out.counts()}"
                )
        return out
    if g.free_rank == 1:
        return census_rank1(beta)
    raise RankExceedsAnalyzerError(f"rank {g.free_rank} exceeds analyzer (at most 1 supported)")
