import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgdesk.cochain import (
    CochainComplex, ComplexError, ComplexMap, beta_map, cohomology_dims, cone, is_acyclic,
    is_quasi_iso, lambda_complex, lambda_homotopy, lambda_maps, psi_map, sigma_map,
    tensor_complexes, tensor_maps, unit_complex,
)
from dgdesk.linalg import LinearMap, Space, inverse, rank


def random_invertible(n, rng):
    while True:
        A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        m = LinearMap.from_dense(A) if n else LinearMap.identity(Space([]))
        if rank(m) == n:
            return m


def random_complex(rng, lo=-2, hi=1):
    """Sum of singletons and contractible pairs, conjugated by random bases.

    Returns the complex and its cohomology dims (known by construction).
    """
    singles = {n: rng.randint(0, 2) for n in range(lo, hi + 1)}
    pairs = {n: rng.randint(0, 2) for n in range(lo, hi)}
    dims = {n: singles[n] + pairs.get(n, 0) + pairs.get(n - 1, 0) for n in range(lo, hi + 1)}
    comps = {n: Space.of_dim(dims[n], "c%d_" % (n - lo)) for n in dims}
    # layout in degree n: [singles | sources of pairs n→n+1 | targets of pairs n−1→n]
    diffs = {}
    for n in range(lo, hi):
        cols = {}
        for k in range(pairs[n]):
            src = singles[n] + k
            tgt = singles[n + 1] + pairs.get(n + 1, 0) + k
            cols[src] = {tgt: 1}
        diffs[n] = LinearMap(comps[n], comps[n + 1], cols)
    P = {n: random_invertible(dims[n], rng) for n in dims}
    conj = {}
    for n, d in diffs.items():
        conj[n] = P[n + 1] @ d @ inverse(P[n]) if dims[n] and dims[n + 1] else d
    return CochainComplex(comps, conj), singles


def test_cohomology_trivial():
    k = Space(["x"])
    c = CochainComplex({0: k, 1: Space(["y"])}, {0: LinearMap(k, Space(["y"]), {0: {0: 1}})})
    assert cohomology_dims(c) == {0: 0, 1: 0}
    z = CochainComplex({0: Space.of_dim(2), 1: Space.of_dim(3)})
    assert cohomology_dims(z) == {0: 2, 1: 3}


def test_three_term_rank_oracle():
    a = LinearMap.from_dense([[1, 0], [0, 1], [1, 1]])
    b = LinearMap.from_dense([[1, 1, -1]])
    assert (b @ a).is_zero()
    c = CochainComplex({0: a.domain, 1: a.codomain, 2: b.codomain}, {0: a, 1: b})
    expected = {0: 2 - 2, 1: (3 - 1) - 2, 2: 1 - 1}
    assert cohomology_dims(c) == expected


def test_bad_differential_rejected():
    s = Space(["x"])
    with pytest.raises(ComplexError):
        CochainComplex({0: s, 1: s, 2: s}, {0: LinearMap.identity(s), 1: LinearMap.identity(s)})


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_complex_oracle(seed):
    c, singles = random_complex(random.Random(seed))
    assert cohomology_dims(c, singles.keys()) == singles


def test_quasi_iso_examples():
    c, _ = random_complex(random.Random(11))
    assert is_quasi_iso(ComplexMap.identity(c))[0]
    acyclic = lambda_complex(3)
    assert is_quasi_iso(ComplexMap.zero(acyclic, CochainComplex({})))[0]
    assert is_quasi_iso(psi_map(4))[0]


def test_cone_examples():
    k = unit_complex()
    assert is_acyclic(cone(ComplexMap.identity(k)))
    zc = cone(ComplexMap.zero(k, k))
    assert cohomology_dims(zc) == {-1: 1, 0: 1}
    assert is_acyclic(cone(psi_map(3)))


@pytest.mark.parametrize("seed", range(10))
def test_quasi_iso_iff_cone_acyclic(seed):
    rng = random.Random(seed)
    c, _ = random_complex(rng)
    s = rng.choice([0, 1, 2])
    f = ComplexMap(c, c, {n: LinearMap.identity(sp).scale(s) for n, sp in c.components.items()})
    assert is_quasi_iso(f)[0] == is_acyclic(cone(f))
    corpus = [psi_map(2), beta_map(1, 2), sigma_map(), ComplexMap.zero(c, unit_complex())]
    for g in corpus:
        assert is_quasi_iso(g)[0] == is_acyclic(cone(g))


def test_tensor_unit():
    c, _ = random_complex(random.Random(5))
    t = tensor_complexes(c, unit_complex())
    assert t.dims() == c.dims()
    assert all(t.d(n) == c.d(n) for n in c.support)


def test_tensor_of_lambda_ones():
    t = tensor_complexes(lambda_complex(1), lambda_complex(1, ["e'"]))
    assert t.dims() == {0: 1, -1: 2, -2: 1}
    assert is_acyclic(t)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kunneth(seed):
    rng = random.Random(seed)
    a, ha = random_complex(rng, -2, 0)
    b, hb = random_complex(rng, -1, 1)
    t = tensor_complexes(a, b)
    expected = {}
    for p, x in ha.items():
        for q, y in hb.items():
            expected[p + q] = expected.get(p + q, 0) + x * y
    got = cohomology_dims(t, expected.keys())
    assert got == expected


def test_lambda_complex_dims_and_rejects_zero():
    assert lambda_complex(1).dims() == {0: 1, -1: 1}
    assert lambda_complex(3).dims() == {0: 1, -1: 3, -2: 3, -3: 1}
    with pytest.raises(ValueError):
        lambda_complex(0)


@pytest.mark.parametrize("n", range(1, 9))
def test_lambda_acyclic(n):
    assert is_acyclic(lambda_complex(n))


def test_lambda_homotopy_n4():
    # d h + h d is n times the identity; h/n is a contracting homotopy
    n = 4
    L, h = lambda_complex(n), lambda_homotopy(n)
    for l in range(n + 1):
        deg = -l
        t = LinearMap.zero(L.space(deg), L.space(deg))
        if deg in h:
            t = t + L.d(deg - 1) @ h[deg]
        if deg + 1 in h:
            t = t + h[deg + 1] @ L.d(deg)
        assert t == LinearMap.identity(L.space(deg)).scale(n)


def test_lambda_homotopy_single_vector_is_contraction():
    n = 3
    L, h = lambda_complex(n), lambda_homotopy(n, [1, 0, 0])
    for l in range(n + 1):
        deg = -l
        t = LinearMap.zero(L.space(deg), L.space(deg))
        if deg in h:
            t = t + L.d(deg - 1) @ h[deg]
        if deg + 1 in h:
            t = t + h[deg + 1] @ L.d(deg)
        assert t == LinearMap.identity(L.space(deg))


def test_beta_sign_fixed_by_chain_map():
    b = beta_map(1, 1)
    assert b.layers[-2].cols == {0: {0: Fraction(1)}}
    flipped = dict(b.layers)
    flipped[-2] = b.layers[-2].scale(-1)
    with pytest.raises(ComplexError):
        ComplexMap(b.source, b.target, flipped)


def test_sigma_values():
    s = sigma_map()
    assert s.source.space(-1).labels == ("e⊗1", "1⊗e'")
    assert s.layer(-1).cols == {0: {0: 1}, 1: {0: 1}}
    assert s.source.space(-2).labels == ("e⊗e'",)
    assert s.layer(-2).is_zero()


@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (3, 1), (2, 2)])
def test_lambda_maps_diagram(n, m):
    lm = lambda_maps(n, m)
    assert lm.commutes
    assert all(lm.report.values())


def test_complex_json_roundtrip():
    c = lambda_complex(3)
    c2 = CochainComplex.from_json(c.to_json())
    assert c2.dims() == c.dims()
    assert all(c2.d(n).same_as(c.d(n)) for n in c.support)


def test_tensor_of_identities_is_identity():
    a, _ = random_complex(random.Random(3), -1, 0)
    b, _ = random_complex(random.Random(4), -1, 1)
    f = tensor_maps(ComplexMap.identity(a), ComplexMap.identity(b))
    assert f.equals(ComplexMap.identity(tensor_complexes(a, b)))
