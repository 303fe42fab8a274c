import pytest

from dgdesk.hopf import BUILTINS, builtin, group_algebra, ident, sweedler, trivial
from dgdesk.linalg import LinearMap, Space
from dgdesk.monoidal2 import (
    braiding, compare_products, direct_sum, eckmann_hilton, exactness_check, external_product,
    internal_product, is_morphism, kernel_sequence, lambda_prime, morphism_defects,
    split_sequence, splits, tensor_morphisms, unit_checks, ShortExact,
)
from dgdesk.tetra import (
    TetraError, free_tetramodule, regular_tetramodule, validate_tetramodule, zero_tetramodule,
)


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("variant", [1, 2])
def test_external_products_are_tetramodules(name, variant):
    B = builtin(name)
    R, F = regular_tetramodule(B), free_tetramodule(B, 1)
    for x, y in [(R, R), (R, F), (F, R)]:
        e = external_product(x, y, variant)
        assert e.dim == x.dim * y.dim
        assert validate_tetramodule(e).ok


def test_external_examples():
    Z2 = group_algebra(2)
    assert external_product(regular_tetramodule(Z2), regular_tetramodule(Z2), 1).dim == 4
    S = sweedler()
    e = external_product(regular_tetramodule(S), regular_tetramodule(S), 2)
    assert e.dim == 16 and validate_tetramodule(e).ok
    assert external_product(regular_tetramodule(S), zero_tetramodule(S), 1).dim == 0


def test_base_mismatch():
    with pytest.raises(TetraError):
        external_product(regular_tetramodule(group_algebra(2)), regular_tetramodule(sweedler()), 1)


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("variant", [1, 2])
def test_internal_products_descend(name, variant):
    B = builtin(name)
    R, F = regular_tetramodule(B), free_tetramodule(B, 1)
    p = internal_product(R, F, variant)
    assert p.report.ok
    assert validate_tetramodule(p.tetramodule).ok
    assert p.dim == F.dim


def test_internal_examples():
    Z2 = group_algebra(2)
    R = regular_tetramodule(Z2)
    assert internal_product(R, R, 1).dim == 2
    S = sweedler()
    RS = regular_tetramodule(S)
    assert internal_product(RS, RS, 2).dim == 4
    assert internal_product(RS, zero_tetramodule(S), 1).dim == 0
    assert internal_product(zero_tetramodule(S), RS, 2).dim == 0


def test_coequalizer_oracle_free_is_tensor_over_b():
    # M ⊗₁ N = M ⊗_B N; for free M = B⊗W⊗B this has dim |B|·dim W·dim N
    for name in ("Z/2", "Z/3"):
        B = builtin(name)
        F = free_tetramodule(B, 1)
        assert internal_product(F, F, 1).dim == B.dim * F.dim


@pytest.mark.parametrize("name", BUILTINS)
def test_unit_object(name):
    B = builtin(name)
    for M in (regular_tetramodule(B), free_tetramodule(B, 1)):
        assert unit_checks(M).ok


def test_compare_over_trivial_base():
    T = trivial()
    c = compare_products(free_tetramodule(T, 2), free_tetramodule(T, 1))
    assert c.report.ok
    assert c.iso is not None


def test_compare_regular_records_mismatch():
    R = regular_tetramodule(group_algebra(2))
    c = compare_products(R, R)
    d = c.report["dims"].numbers
    assert d["dim_otimes1"] == d["dim_otimes2"] == 2
    assert d["predicted"] == 4
    assert not c.report.passed("dim ⊗1 = B²·M0·N0")
    assert c.iso is None


def test_compare_free_sweedler_measured():
    F = free_tetramodule(sweedler(), 1)
    c = compare_products(F, F)
    d = c.report["dims"].numbers
    # dims agree with the predicted count here, but the comparison is not certified
    assert d["dim_otimes1"] == d["dim_otimes2"] == d["predicted"] == 64
    assert not c.report.passed("decompositions bijective")
    assert c.iso is None


def test_lambda_prime_involution():
    b, n0, p0 = Space.of_dim(4, "b"), Space.of_dim(2, "n"), Space.of_dim(3, "p")
    assert lambda_prime(p0, n0, b) @ lambda_prime(n0, p0, b) == LinearMap.identity(b @ n0 @ p0 @ b)


def test_braiding_trivial_base():
    T = trivial()
    br = braiding(free_tetramodule(T, 2), free_tetramodule(T, 3))
    assert br.report.ok
    assert br.lam is not None and br.lam.domain.dim == 6


def test_braiding_unavailable_reported():
    F = free_tetramodule(group_algebra(2), 1)
    br = braiding(F, F)
    assert br.report.passed("λ′∘λ′ = id")
    assert not br.report.passed("λ available")
    assert br.lam is None


def test_eckmann_hilton_trivial_cases():
    T = trivial()
    e = regular_tetramodule(T)
    eh = eckmann_hilton(e, e, e, e)
    assert eh.report.ok and eh.eta == LinearMap.identity(eh.eta.domain)
    z = zero_tetramodule(T)
    eh0 = eckmann_hilton(e, z, e, e)
    assert eh0.report.ok and eh0.eta.domain.dim == 0
    f = [free_tetramodule(T, k) for k in (1, 2, 1, 2)]
    assert eckmann_hilton(*f).report.ok


def test_eckmann_hilton_unavailable_over_z2():
    F = free_tetramodule(group_algebra(2), 1)
    eh = eckmann_hilton(F, F, F, F)
    assert eh.eta is None
    assert not eh.report.passed("η isomorphism")


def test_morphisms():
    B = group_algebra(3)
    F, R = free_tetramodule(B, 1), regular_tetramodule(B)
    mult = B.m.relabel(F.space, R.space)
    assert is_morphism(mult, F, R)
    assert morphism_defects(mult.scale(2) + LinearMap.zero(F.space, R.space), F, R) == []
    twisted = B.antipode @ mult
    assert morphism_defects(twisted, F, R)


@pytest.mark.parametrize("variant", [1, 2])
def test_functoriality(variant):
    B = group_algebra(2)
    F, R = free_tetramodule(B, 1), regular_tetramodule(B)
    mult = B.m.relabel(F.space, R.space)
    src = internal_product(F, R, variant)
    tgt = internal_product(R, R, variant)
    f = tensor_morphisms(mult, ident(R.space), src, tgt)
    assert is_morphism(f, src.tetramodule, tgt.tetramodule)
    same = tensor_morphisms(ident(F.space), ident(R.space), src, src)
    assert same == LinearMap.identity(src.carrier)


def nonsplit(B):
    F, R = free_tetramodule(B, 1), regular_tetramodule(B)
    return kernel_sequence(F, R, B.m.relabel(F.space, R.space))


def test_splitting_decided_exactly():
    S = sweedler()
    assert not splits(nonsplit(S))
    assert splits(split_sequence(regular_tetramodule(S), free_tetramodule(S, 1)))
    # over the semisimple ℚ[ℤ/2] the same sequence does split
    assert splits(nonsplit(group_algebra(2)))


@pytest.mark.parametrize("variant", [1, 2])
def test_exactness_split(variant):
    B = group_algebra(2)
    ses = split_sequence(regular_tetramodule(B), free_tetramodule(B, 1))
    assert exactness_check(free_tetramodule(B, 1), ses, variant).ok


@pytest.mark.slow
@pytest.mark.parametrize("variant", [1, 2])
def test_exactness_nonsplit_sweedler(variant):
    S = sweedler()
    assert exactness_check(free_tetramodule(S, 1), nonsplit(S), variant).ok


def test_exactness_rejects_bad_input():
    B = group_algebra(2)
    R = regular_tetramodule(B)
    ses = split_sequence(R, R)
    broken = ShortExact(ses.a, ses.m, ses.c, ses.i, ses.p.scale(0))
    with pytest.raises(TetraError):
        exactness_check(R, broken, 1)


def test_direct_sum_valid():
    S = sweedler()
    d = direct_sum(regular_tetramodule(S), free_tetramodule(S, 1))
    assert d.dim == 20 and validate_tetramodule(d).ok
