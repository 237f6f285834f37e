"""Reidemeister invariants, orbit censuses and Nielsen numbers for fiberwise
maps between linear torus bundles over spheres."""

from .abgroup import INF, FgAbelianGroup, GroupElement, QuotientMap, cokernel
from .affine import AffineMap, conjugate, induced_affine, is_involution
from .intlin import IntMatrix, SmithDecomposition, integer_kernel, snf, solve_in_lattice
from .nielsen import (
    Factor,
    ResultReport,
    StraightMap,
    TorusBundleProblem,
    compute,
    product_census,
    product_closed_form,
    product_problem,
    reidemeister_invariant,
    switch_closed_form,
    switch_problem,
)
from .orbits import (
    OrbitCensus,
    census,
    census_bruteforce,
    census_involution_closed_form,
    census_rank1,
    rank1_decompose,
)

__version__ = "0.1.0"
