import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tatekit import linalg as la
from tatekit.errors import InputError
from oracles import rank_mod

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_side=7):
    p = draw(PRIMES)
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(1, max_side))
    a = draw(arrays(np.int64, (r, c), elements=st.integers(0, p - 1)))
    return a, p


def test_prime_field_rejects_composite():
    with pytest.raises(InputError):
        la.PrimeField(4)
    assert la.PrimeField(7).inv(3) * 3 % 7 == 1


def test_row_reduce_small_example():
    m = np.array([[1, 1, 0], [1, 1, 1]])
    r, piv, rk = la.row_reduce(m, 2)
    assert rk == 2 and piv == [0, 2]
    assert np.array_equal(r[:2], [[1, 1, 0], [0, 0, 1]])


def test_inverse_and_singular():
    m = np.array([[2, 1], [1, 1]])
    inv = la.inverse(m, 5)
    assert np.array_equal(m @ inv % 5, np.eye(2))
    with pytest.raises(ZeroDivisionError):
        la.inverse(np.array([[1, 2], [2, 4]]), 5)


def test_solve_inconsistent_returns_none():
    assert la.solve(np.array([[1, 0], [0, 0]]), np.array([0, 1]), 3) is None


def test_quotient_space_with_zero_ambient():
    coset, project = la.quotient_space(0, np.zeros((0, 0), dtype=np.int64), 3)
    assert coset.shape[0] == 0 and project.shape[0] == 0


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_reference(mp):
    a, p = mp
    assert la.rank(a, p) == rank_mod(a, p)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(mp):
    a, p = mp
    ker = la.kernel_basis(a, p)
    assert ker.shape[0] + la.rank(a, p) == a.shape[1]
    if ker.size and a.size:
        assert not (a @ ker.T % p).any()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_recovers_consistent_systems(mp, data):
    a, p = mp
    if a.shape[0] == 0:
        return
    x = data.draw(arrays(np.int64, a.shape[1], elements=st.integers(0, p - 1)))
    b = a @ x % p
    sol = la.solve(a, b, p)
    assert sol is not None and np.array_equal(a @ sol % p, b)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.data())
def test_subquotient_coordinates_roundtrip(mp, data):
    a, p = mp
    n = a.shape[1]
    big = la.span_basis(np.vstack([a, np.eye(n, dtype=np.int64)[:1]]), p) if a.size else np.eye(n, dtype=np.int64)[:1]
    small = la.span_basis(big[: max(0, big.shape[0] - 1)], p)
    sq = la.Subquotient(n, big, small, p)
    assert sq.dim == sq.numerator_dim - sq.denominator_dim
    c = data.draw(arrays(np.int64, sq.dim, elements=st.integers(0, p - 1)))
    v = sq.lift(c)
    assert np.array_equal(sq.coords(v)[0], c % p)
    if small.shape[0]:
        assert not sq.coords(small).any()


def test_subquotient_rejects_vectors_outside():
    sq = la.Subquotient(2, np.array([[1, 0]]), np.zeros((0, 2), dtype=np.int64), 3)
    with pytest.raises(InputError):
        sq.coords(np.array([[0, 1]]))


def test_kronecker_index_convention():
    a, b = np.array([[1, 2], [0, 1]]), np.array([[0, 1], [1, 0]])
    k = la.kronecker(a, b, 3)
    assert k[0 * 2 + 1, 1 * 2 + 0] == a[0, 1] * b[1, 0] % 3
