import itertools
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from fibernielsen.errors import DimensionMismatchError
from fibernielsen.intlin import IntMatrix, integer_kernel, snf, solve_in_lattice, unimodular_inverse


def matrices(max_dim=6, lo=-20, hi=20, min_dim=0):
    return st.integers(min_dim, max_dim).flatmap(
        lambda r: st.integers(min_dim, max_dim).flatmap(
            lambda c: st.lists(st.integers(lo, hi), min_size=r * c, max_size=r * c).map(
                lambda e: IntMatrix(r, c, tuple(e))
            )
        )
    )


def check_smith(a, dec):
    assert dec.u @ a @ dec.v == dec.d
    assert abs(dec.u.det()) == 1
    assert abs(dec.v.det()) == 1
    d = dec.d
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0
    diag = dec.diagonal
    assert all(x >= 0 for x in diag)
    nonzero = [x for x in diag if x]
    assert diag[: len(nonzero)] == tuple(nonzero), "zeros must come last"
    for x, y in zip(nonzero, nonzero[1:]):
        assert y % x == 0


@pytest.mark.parametrize(
    "rows, diag",
    [
        ([[2, 1], [1, 2]], (1, 3)),
        ([[0]], (0,)),
        ([[4, 2], [2, 4]], (2, 6)),
        ([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]], (1, 10, 30, 0)),
        ([[2, 4]], (2,)),
    ],
)
def test_snf_examples(rows, diag):
    a = IntMatrix.from_rows(rows)
    dec = snf(a)
    check_smith(a, dec)
    assert dec.diagonal == diag


def test_snf_zero_one_by_one_has_identity_transforms():
    dec = snf(IntMatrix.from_rows([[0]]))
    assert dec.u == IntMatrix.identity(1)
    assert dec.v == IntMatrix.identity(1)


@pytest.mark.parametrize("shape", [(0, 0), (0, 3), (3, 0)])
def test_snf_empty(shape):
    a = IntMatrix.zeros(*shape)
    dec = snf(a)
    check_smith(a, dec)
    assert dec.u == IntMatrix.identity(shape[0])
    assert dec.v == IntMatrix.identity(shape[1])


def test_snf_deterministic():
    a = IntMatrix.from_rows([[6, -4, 10], [3, 9, -7], [8, 2, 0]])
    assert snf(a) == snf(a)


def test_snf_huge_entries_are_exact():
    big = 10**40
    a = IntMatrix.from_rows([[big, big + 1], [big - 1, big]])
    dec = snf(a)
    check_smith(a, dec)
    assert dec.diagonal == (1, 1)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_snf_properties(a):
    dec = snf(a)
    check_smith(a, dec)
    if a.rows and a.cols:
        # independent oracle: sympy's invariant factors
        expected = [abs(int(x)) for x in invariant_factors(Matrix(a.tolist()), domain=ZZ)]
        assert [x for x in dec.diagonal if x] == [x for x in expected if x]


def test_unimodular_inverse():
    m = IntMatrix.from_rows([[2, 3], [1, 2]])
    assert m @ unimodular_inverse(m) == IntMatrix.identity(2)


def test_solve_examples():
    two = IntMatrix.from_rows([[2, 0], [0, 2]])
    assert solve_in_lattice(two, (4, 6)) == (2, 3)
    assert solve_in_lattice(two, (1, 0)) is None
    a = IntMatrix.from_rows([[1, -1], [-1, 1]])
    x = solve_in_lattice(a, (1, -1))
    assert x is not None and a @ x == (1, -1)
    # brute force found the witness (1, 0) among small vectors too
    assert any(a @ v == (1, -1) for v in itertools.product(range(-2, 3), repeat=2))


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_in_lattice(IntMatrix.identity(2), (1, 2, 3))


def _cramer_box(a, b):
    """Largest |x_i| of the unique rational solution, via Cramer's rule."""
    det = a.det()
    bound = 0
    for i in range(a.cols):
        cols = a.columns()
        cols[i] = tuple(b)
        num = IntMatrix.from_columns(cols, a.rows).det()
        bound = max(bound, -(-abs(num) // abs(det)))
    return bound


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n).map(lambda e: IntMatrix(n, n, tuple(e))),
            st.lists(st.integers(-6, 6), min_size=n, max_size=n),
        )
    )
)
def test_solve_against_box_search(ab):
    a, b = ab
    assume(a.det() != 0)
    bound = _cramer_box(a, b)
    assume((2 * bound + 1) ** a.cols <= 20000)
    x = solve_in_lattice(a, b)
    found = [v for v in itertools.product(range(-bound, bound + 1), repeat=a.cols) if a @ v == tuple(b)]
    if x is None:
        assert found == []
    else:
        assert a @ x == tuple(b)
        assert found == [x]


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4, lo=-6, hi=6, min_dim=1), st.data())
def test_solve_witness_is_exact(a, data):
    y = data.draw(st.lists(st.integers(-5, 5), min_size=a.cols, max_size=a.cols))
    b = a @ y
    x = solve_in_lattice(a, b)
    assert x is not None
    assert a @ x == b


def test_kernel_examples():
    assert integer_kernel(IntMatrix.from_rows([[1, 1]])) in ([(1, -1)], [(-1, 1)])
    assert integer_kernel(IntMatrix.identity(2)) == []
    k = integer_kernel(IntMatrix.from_rows([[2, 4]]))
    assert k in ([(2, -1)], [(-2, 1)])


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=5, lo=-6, hi=6, min_dim=1))
def test_kernel_properties(a):
    basis = integer_kernel(a)
    for x in basis:
        assert a @ x == (0,) * a.rows
    rank = Matrix(a.tolist()).rank()
    assert len(basis) == a.cols - rank
    if basis:
        # saturation: every integer kernel vector is an integer combination
        b = IntMatrix.from_columns(basis, a.cols)
        for vec in Matrix(a.tolist()).nullspace():
            den = 1
            for q in vec:
                den = den * q.q // math.gcd(den, q.q)
            ivec = tuple(int(q * den) for q in vec)
            g = math.gcd(*ivec)
            ivec = tuple(x // g for x in ivec)
            assert solve_in_lattice(b, ivec) is not None


def test_matrix_validation():
    with pytest.raises(DimensionMismatchError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(TypeError):
        IntMatrix(1, 1, (1.0,))
    with pytest.raises(DimensionMismatchError):
        IntMatrix.from_rows([[1, 2], [3]])
