import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgdesk.linalg import (
    LinearMap, Space, ShapeError, format_scalar, kernel_basis, parse_scalar, rank, solve,
    subquotient,
)


def cofactor_det(A):
    n = len(A)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(A[0][0])
    total = Fraction(0)
    for j in range(n):
        if A[0][j]:
            minor = [row[:j] + row[j + 1:] for row in A[1:]]
            total += (-1) ** j * A[0][j] * cofactor_det(minor)
    return total


small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_rank_trivial():
    assert rank(LinearMap.identity(Space.of_dim(2))) == 2
    assert rank(LinearMap.from_dense([[1, 2], [2, 4]])) == 1


def test_rank_full_vs_cofactor_determinant():
    rng = random.Random(7)
    for _ in range(20):
        A = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        det = cofactor_det(A)
        assert (rank(LinearMap.from_dense(A)) == 4) == (det != 0)
    A = [[2, 1, 0, 3], [1, 1, 1, 1], [0, 2, -1, 5], [4, 0, 1, 2]]
    assert cofactor_det(A) != 0
    assert rank(LinearMap.from_dense(A)) == 4


def test_kernel_examples():
    z = LinearMap.zero(Space.of_dim(3), Space.of_dim(2))
    assert len(kernel_basis(z)) == 3
    k = kernel_basis(LinearMap.from_dense([[1, 1]]))
    assert len(k) == 1
    v = k[0]
    assert v.get(0, 0) == -v.get(1, 0) != 0


def test_kernel_sparse_5x7():
    rng = random.Random(3)
    A = [[rng.choice([0, 0, 0, 1, -1, 2]) for _ in range(7)] for _ in range(5)]
    m = LinearMap.from_dense(A)
    ker = kernel_basis(m)
    assert len(ker) == 7 - rank(m)
    for v in ker:
        assert m.apply(v) == {}
    assert rank_of(ker) == len(ker)


def rank_of(vectors):
    from dgdesk.linalg import rank_of_vectors
    return rank_of_vectors(vectors)


def test_solve_examples():
    I = LinearMap.identity(Space.of_dim(3))
    v = {0: Fraction(1, 2), 2: Fraction(-3)}
    assert solve(I, v) == v
    Z = LinearMap.zero(Space.of_dim(2), Space.of_dim(2))
    assert solve(Z, {1: 1}) is None
    assert solve(Z, {}) == {}


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    m = LinearMap.from_dense(A)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.domain.dim
    assert rank_of(ker) == len(ker)
    for v in ker:
        assert m.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent(A, xs):
    m = LinearMap.from_dense(A)
    x0 = {j: Fraction(x) for j, x in enumerate(xs[:m.domain.dim]) if x}
    target = m.apply(x0)
    x = solve(m, target)
    assert x is not None
    assert m.apply(x) == target


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_subquotient_equations(A, B):
    f = LinearMap.from_dense(A)
    g = LinearMap.from_dense([row[:f.domain.dim] + [0] * (f.domain.dim - len(row))
                              for row in B[:1]] * f.codomain.dim)
    E, inc = subquotient(f.domain, f, g, "equalizer")
    assert E.dim == f.domain.dim - rank(f - g)
    assert f @ inc == g @ inc
    Q, proj = subquotient(f.codomain, f, g, "coequalizer")
    assert Q.dim == f.codomain.dim - rank(f - g)
    assert proj @ f == proj @ g


def test_subquotient_trivial_cases():
    f = LinearMap.from_dense([[1, 2], [3, 4]])
    E, inc = subquotient(f.domain, f, f, "equalizer")
    assert E.dim == 2 and inc == LinearMap.identity(f.domain)
    Q, _ = subquotient(f.codomain, f, LinearMap.zero(f.domain, f.codomain), "coequalizer")
    assert Q.dim == 0
    with pytest.raises(ShapeError):
        subquotient(f.domain, f, LinearMap.identity(Space.of_dim(3)), "equalizer")


@given(st.fractions())
def test_scalar_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@pytest.mark.parametrize("bad", ["0.5e1", "1.5", "1/0", "x", ""])
def test_scalar_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_matrix_json_roundtrip():
    m = LinearMap.from_dense([[Fraction(1, 3), 0], [0, -2]])
    assert LinearMap.from_json(m.to_json()).same_as(m)


def test_tensor_and_compose():
    a = LinearMap.from_dense([[1, 2], [0, 1]])
    b = LinearMap.from_dense([[0, 1], [1, 0]])
    assert (a.tensor(b)) @ (b.tensor(a)) == (a @ b).tensor(b @ a)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_solve_many_matches_solve(A, bs):
    from dgdesk.linalg import solve_many
    m = LinearMap.from_dense(A)
    targets = [{i: Fraction(x) for i, x in enumerate(b[:m.codomain.dim]) if x} for b in bs]
    got = solve_many(m, targets)
    for t, x in zip(targets, got):
        ref = solve(m, t)
        assert (x is None) == (ref is None)
        if x is not None:
            assert m.apply(x) == t


def test_quotient_section():
    from dgdesk.linalg import quotient_by
    amb = Space.of_dim(4)
    Q, pi, sec = quotient_by(amb, [{0: 1, 1: 1}, {2: 2}], with_section=True)
    assert Q.dim == 2
    assert pi @ sec == LinearMap.identity(Q)
