from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dgdesk.hopf import (
    BUILTINS, HopfError, antipode_order, builtin, from_json, group_algebra, opposite, sweedler,
    tensor_hopf, to_json, trivial, validate_bialgebra, validate_hopf, with_antipode,
)
from dgdesk.linalg import LinearMap


def elementwise_sweedler_products():
    # independent oracle: multiply words g^a x^b by commuting x past g with a sign
    out = {}
    basis = {"1": (0, 0), "g": (1, 0), "x": (0, 1), "gx": (1, 1)}
    name = {v: k for k, v in basis.items()}
    for p, q in product(basis, repeat=2):
        a1, b1 = basis[p]
        a2, b2 = basis[q]
        if b1 + b2 > 1:
            out[(p, q)] = {}
            continue
        sign = -1 if (b1 and a2 % 2) else 1
        out[(p, q)] = {name[((a1 + a2) % 2, b1 + b2)]: sign}
    return out


def test_sweedler_multiplication_table():
    s = sweedler()
    for (p, q), want in elementwise_sweedler_products().items():
        got = s.mul(s.space.basis_vector(p), s.space.basis_vector(q))
        assert got == {s.space.index(k): v for k, v in want.items()}, (p, q)


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_valid(name):
    h = builtin(name)
    assert validate_bialgebra(h).ok
    r = validate_hopf(h)
    assert r.ok, r.failures


def test_trivial_and_group_algebra_dims():
    assert trivial().dim == 1
    g2 = group_algebra(2)
    assert g2.dim == 2
    assert g2.antipode == LinearMap.identity(g2.space)


def test_sweedler_antipode_order_four():
    s = sweedler()
    x = s.space.basis_vector("x")
    S2x = (s.antipode @ s.antipode).apply(x)
    assert S2x == {s.space.index("x"): Fraction(-1)}
    assert antipode_order(s) == 4


def test_wrong_antipode_reported():
    s = sweedler()
    bad = with_antipode(s, LinearMap.identity(s.space))
    r = validate_hopf(bad)
    assert not r.ok
    assert not r.passed("antipode left")
    assert r.passed("associativity")


def test_seeded_bialgebra_fault():
    g = group_algebra(2)
    broken = with_antipode(g, g.antipode)
    broken.counit = g.counit.scale(2)
    r = validate_bialgebra(broken)
    assert not r.passed("left counit")


def test_opposite_involution_and_validity():
    s = sweedler()
    op = opposite(s)
    assert op.antipode.same_as(s.antipode)
    assert validate_hopf(op).ok
    assert opposite(op).same_data(s)
    z3 = group_algebra(3)
    assert opposite(z3).m == z3.m and opposite(z3).delta == z3.delta


def test_tensor_hopf():
    s = sweedler()
    assert tensor_hopf(trivial(), s).same_data(s)
    t = tensor_hopf(s, opposite(s))
    assert t.dim == 16
    assert validate_hopf(t).ok
    for a, b in [("trivial", "Z/2"), ("Z/2", "Z/3"), ("Z/3", "sweedler")]:
        assert tensor_hopf(builtin(a), builtin(b)).dim == builtin(a).dim * builtin(b).dim


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(BUILTINS), st.sampled_from(BUILTINS), st.booleans())
def test_constructions_preserve_validity(a, b, op):
    x, y = builtin(a), builtin(b)
    if op:
        y = opposite(y)
    if x.dim * y.dim <= 16:
        assert validate_hopf(tensor_hopf(x, y)).ok


def test_unknown_builtin():
    with pytest.raises(HopfError):
        builtin("quaternions")
    with pytest.raises(HopfError):
        builtin("group_algebra(0)")


@pytest.mark.parametrize("name", BUILTINS)
def test_json_roundtrip(name):
    h = builtin(name)
    assert from_json(to_json(h)).same_data(h)


def test_malformed_json():
    with pytest.raises(HopfError):
        from_json({"labels": ["1"], "m": [["1", "1", "1", "0.5"]], "delta": [],
                   "unit": {"1": "1"}, "counit": {"1": "1"}})
