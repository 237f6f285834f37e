import random

import pytest

from fibernielsen.abgroup import INF, FgAbelianGroup
from fibernielsen.affine import AffineMap
from fibernielsen.errors import InfiniteGroupError, NotInvolutionError, RankExceedsAnalyzerError
from fibernielsen.intlin import IntMatrix
from fibernielsen.nielsen import reidemeister_invariant, switch_problem
from fibernielsen.orbits import (
    UNDETERMINED,
    census,
    census_bruteforce,
    census_involution_closed_form,
    census_rank1,
    involution_q0,
    rank1_decompose,
)

from strategies import random_affine, random_finite_group, random_involutive_affine

Z3 = FgAbelianGroup((3,))
Z4 = FgAbelianGroup((4,))


def affine(g, lin, w):
    return AffineMap(g, IntMatrix.from_rows(lin), w)


def switch_beta(a, b, c):
    return reidemeister_invariant(switch_problem(a, b, c)).beta


def test_bruteforce_examples():
    c = census_bruteforce(affine(Z4, [[-1]], (1,)))
    assert (c.nu_odd, c.nu_even, c.nu_inf) == (0, 2, 0)
    assert [(r.coords, s) for r, s in c.orbits] == [((0,), 2), ((2,), 2)]
    c = census_bruteforce(affine(Z3, [[1]], (1,)))
    assert c.counts() == (1, 0, 0)
    trivial = FgAbelianGroup()
    assert census_bruteforce(AffineMap.identity(trivial)).counts() == (1, 0, 0)
    with pytest.raises(InfiniteGroupError):
        census_bruteforce(AffineMap.identity(FgAbelianGroup((), 1)))


def test_closed_form_examples():
    assert census_involution_closed_form(affine(Z4, [[-1]], (1,))).counts() == (0, 2, 0)
    assert census_involution_closed_form(affine(Z3, [[1]], (1,))).counts() == (1, 0, 0)
    beta = affine(Z4, [[1]], (1,))
    assert involution_q0(beta) == 2
    assert census_involution_closed_form(beta).counts() == (0, 1, 0)
    assert census_bruteforce(beta).counts() == (0, 1, 0)


def test_closed_form_requires_involution():
    with pytest.raises(NotInvolutionError):
        census_involution_closed_form(affine(FgAbelianGroup((5,)), [[2]], (0,)))


def test_closed_form_infinite_q0_is_undetermined():
    g = FgAbelianGroup((), 1)
    c = census_involution_closed_form(affine(g, [[1]], (2,)))
    assert c.counts() == (0, 0, UNDETERMINED)


def test_closed_form_on_rank_one_groups():
    # alpha = id on Z with w = 0: every point fixed, infinitely many odd orbits
    g = FgAbelianGroup((), 1)
    assert census_involution_closed_form(AffineMap.identity(g)).counts() == (INF, 0, 0)
    # alpha = -id on Z, w = 0: one fixed point and infinitely many pairs
    assert census_involution_closed_form(affine(g, [[-1]], (0,))).counts() == (1, INF, 0)
    assert census_involution_closed_form(affine(g, [[-1]], (1,))).counts() == (0, INF, 0)


def test_closed_form_matches_bruteforce_and_orbit_sizes():
    rng = random.Random(2024)
    for _ in range(200):
        g = random_finite_group(rng)
        beta = random_involutive_affine(rng, g)
        brute = census_bruteforce(beta)
        assert census_involution_closed_form(beta).counts() == brute.counts()
        q0 = involution_q0(beta)
        allowed = {2 * q0} | ({q0} if q0 % 2 else set())
        assert {size for _, size in brute.orbits} <= allowed


def test_bruteforce_invariants():
    rng = random.Random(99)
    for _ in range(100):
        g = random_finite_group(rng)
        beta = random_affine(rng, g)
        c = census_bruteforce(beta)
        assert sum(size for _, size in c.orbits) == g.cardinality()
        assert c.nu_odd == sum(1 for _, s in c.orbits if s % 2)
        assert c.nu_even == sum(1 for _, s in c.orbits if s % 2 == 0)
        # representatives are the lexicographically least point of their orbit
        for rep, size in c.orbits:
            orbit, x = [rep], beta(rep)
            while x != rep:
                orbit.append(x)
                x = beta(x)
            assert min(o.coords for o in orbit) == rep.coords


def test_census_conjugation_invariance():
    rng = random.Random(31)
    for _ in range(100):
        g = random_finite_group(rng)
        beta, h = random_affine(rng, g), random_affine(rng, g)
        assert census(h.compose(beta).compose(h.inverse())).counts() == census(beta).counts()


def test_rank1_decompose_examples():
    dec = rank1_decompose(switch_beta(1, 1, 0))
    assert dec.epsilon == -1 and dec.torsion_part == FgAbelianGroup() and dec.w_z == 0
    dec = rank1_decompose(switch_beta(2, -2, 0))
    assert dec.torsion_part == FgAbelianGroup((2,)) and dec.epsilon == 1
    g = FgAbelianGroup((3,), 1)
    dec = rank1_decompose(AffineMap.identity(g))
    assert dec.epsilon == 1 and dec.shear.is_zero() and dec.w_z == 0
    with pytest.raises(RankExceedsAnalyzerError):
        rank1_decompose(AffineMap.identity(Z3))


def test_rank1_reconstructs_linear_part():
    rng = random.Random(8)
    for _ in range(50):
        t = random_finite_group(rng, max_factors=2, max_factor=6)
        g = FgAbelianGroup(t.torsion, 1)
        beta = random_affine(rng, g)
        dec = rank1_decompose(beta)
        assert dec.block_matrix() == beta.linear


def test_rank1_examples():
    c = census_rank1(switch_beta(1, -1, 2))
    assert c.counts() == (0, 0, 2)
    c = census_rank1(switch_beta(1, 1, 0))
    assert c.counts() == (1, INF, 0)
    c = census_rank1(switch_beta(1, 1, 1))
    assert c.counts() == (0, INF, 0)


def test_census_dispatch():
    assert census(affine(Z4, [[-1]], (1,))).counts() == (0, 2, 0)
    assert census(switch_beta(1, 1, 0)).counts() == (1, INF, 0)
    with pytest.raises(RankExceedsAnalyzerError):
        census(AffineMap.identity(FgAbelianGroup((), 2)))


def _simulate_window(beta, radius):
    """Orbit data for points of T x [-radius, radius], computed by iteration alone."""
    g = beta.group
    t = FgAbelianGroup(g.torsion)
    points = [g.reduce(x.coords + (z,)) for x in t.elements() for z in range(-radius, radius + 1)]
    inside = set(points)
    parent = {p: p for p in points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for p in points:
        q = beta(p)
        if q in inside:
            parent[find(p)] = find(q)
    comps = {}
    for p in points:
        comps.setdefault(find(p), []).append(p)
    return list(comps.values())


def test_rank1_against_window_simulation():
    rng = random.Random(41)
    checked = 0
    while checked < 60:
        t = random_finite_group(rng, max_factors=2, max_factor=6)
        g = FgAbelianGroup(t.torsion, 1)
        beta = random_affine(rng, g)
        dec = rank1_decompose(beta)
        c = census_rank1(beta)
        radius = 50
        comps = _simulate_window(beta, radius)
        if dec.epsilon == 1 and dec.w_z != 0:
            # chains that touch both window edges are infinite orbits crossing it
            full = [k for k in comps if {p.coords[-1] for p in k} & set(range(-radius, -radius + abs(dec.w_z)))
                    and {p.coords[-1] for p in k} & set(range(radius - abs(dec.w_z) + 1, radius + 1))]
            assert len(full) == c.nu_inf
            assert len(full) == len(comps)
        else:
            assert c.nu_inf == 0
            closed = [k for k in comps if all(abs(p.coords[-1]) <= radius - abs(dec.w_z) - 1 for p in k)]
            # every orbit away from the edge is a closed cycle of beta
            for k in closed:
                assert beta.power(len(k))(k[0]) == k[0]
            odd_levels = {p.coords[-1] for k in closed if len(k) % 2 for p in k}
            even = [k for k in closed if len(k) % 2 == 0]
            if dec.epsilon == -1:
                assert c.nu_even is INF and even
                if dec.w_z % 2:
                    assert not odd_levels and c.nu_odd == 0
                else:
                    assert odd_levels <= {dec.w_z // 2}
                    assert c.nu_odd == sum(1 for k in closed if len(k) % 2)
            else:
                assert c.nu_odd == (INF if odd_levels else 0)
                assert c.nu_even == (INF if even else 0)
        checked += 1


def test_rank1_level_invariant_case_against_simulation():
    rng = random.Random(43)
    seen_odd = seen_none = 0
    for _ in range(40):
        t = random_finite_group(rng, max_factors=2, max_factor=6)
        g = FgAbelianGroup(t.torsion, 1)
        beta = random_affine(rng, g)
        if rank1_decompose(beta).epsilon != 1:
            continue
        beta = AffineMap(g, beta.linear, beta.translation.coords[:-1] + (0,))
        c = census_rank1(beta)
        comps = _simulate_window(beta, 30)
        odd = any(len(k) % 2 for k in comps)
        even = any(len(k) % 2 == 0 for k in comps)
        assert c.counts() == (INF if odd else 0, INF if even else 0, 0)
        seen_odd += odd
        seen_none += not odd
    assert seen_odd and seen_none
