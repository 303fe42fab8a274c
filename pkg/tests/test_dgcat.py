import json

import pytest
from hypothesis import given, settings, strategies as st

from dgdesk.cochain import cohomology_dims, cone, is_acyclic
from dgdesk.dgcat import (
    VERDIER_H0, DgError, DgFunctor, FiniteDgCategory, PCat, Tensor, beta_functor,
    coassociativity_report, colax_beta, drinfeld_quotient, example_pcat, from_generators,
    functor_report, generalized_quotient, h0_isomorphic, identity_functor, inclusion_functor,
    induced_functor, one_object, psi_comparison, quasi_equivalence_check, same_category,
    same_pcat, tensor_dgcat, tensor_pcat, two_object_example, validate_dg_category,
)


def test_terminal_category_valid():
    assert validate_dg_category(one_object()).ok


def test_two_object_example_valid():
    assert validate_dg_category(two_object_example()).ok


def test_unit_not_closed_is_reported():
    c = from_generators(["X"], [("z", "X", "X", 1)], differential={"id_X": {"z": 1}})
    r = validate_dg_category(c)
    assert not r.passed("units closed of degree 0")
    assert not r.passed("degree bound")


def test_broken_leibniz_is_reported():
    # d u = v in Hom(X, Y) but g∘u = 0 while g∘v ≠ 0
    c = from_generators(["X", "Y", "Z"],
                        [("u", "X", "Y", -1), ("v", "X", "Y", 0), ("g", "Y", "Z", 0),
                         ("w", "X", "Z", 0)],
                        compose_rules={("g", "v"): {"w": 1}},
                        differential={"u": {"v": 1}})
    r = validate_dg_category(c)
    assert not r.passed("Leibniz")
    assert r.passed("associativity")


def test_json_round_trip(tmp_path):
    c = two_object_example()
    p = tmp_path / "c.json"
    p.write_text(json.dumps(c.to_json()))
    from dgdesk.dgcat import load
    assert same_category(load(p), c)
    with pytest.raises(DgError):
        FiniteDgCategory.from_json({"kind": "hopf"})
    with pytest.raises(DgError):
        FiniteDgCategory.from_json({"objects": ["X"]})


# --- Drinfeld quotient -------------------------------------------------------

WINDOW = range(-6, 1)


def test_quotient_example_homs():
    q = drinfeld_quotient(two_object_example(), {"Y"}, (-6, 0))
    xy = q.hom("X", "Y")
    # one word f·ε·id·…·ε·id per degree
    assert all(xy.dims[n] == 1 for n in WINDOW)
    assert is_acyclic(xy.complex, WINDOW)
    assert is_acyclic(q.hom("Y", "Y").complex, WINDOW)
    assert q.hom("X", "X").dims == {0: 1}
    assert cohomology_dims(q.hom("X", "X").complex, [0]) == {0: 1}
    assert q.hom("Y", "X").dims == {}


def test_quotient_matches_verdier_h0():
    assert drinfeld_quotient(two_object_example(), {"Y"}, (-3, 0)).h0_dims() == VERDIER_H0


def test_quotient_is_a_dg_category():
    q = drinfeld_quotient(two_object_example(), {"Y"}, (-3, 0))
    assert validate_dg_category(q).ok
    assert functor_report(inclusion_functor(q)).ok


def test_eps_differential():
    q = drinfeld_quotient(two_object_example(), {"Y"}, (-3, 0))
    assert q.d_basis("Y", "Y", q.eps((1,), "Y")) == {("id_Y",): 1}


def test_window_must_contain_zero():
    with pytest.raises(DgError):
        drinfeld_quotient(two_object_example(), {"Y"}, (-3, -1))
    with pytest.raises(DgError):
        drinfeld_quotient(two_object_example(), set(), (-3, 0))
    with pytest.raises(DgError):
        drinfeld_quotient(two_object_example(), {"Q"}, (-3, 0))


def test_filtration_bound():
    # words with n ε's only occur in degrees ≤ −n
    q = drinfeld_quotient(two_object_example(), {"Y"}, (-5, 0))
    for w, n in q.hom("Y", "Y").basis():
        assert len(w[1::2]) <= -n


# --- generalized quotient ---------------------------------------------------

def test_single_mark_same_as_drinfeld():
    g = generalized_quotient(example_pcat(1), (-5, 0))
    d = drinfeld_quotient(two_object_example(), {"Y"}, (-5, 0))
    for x in "XY":
        for y in "XY":
            assert g.hom(x, y).dims == d.hom(x, y).dims


def test_cech_generators_two_marks():
    q = generalized_quotient(example_pcat(2), (-3, 0))
    assert q.indices["Y"] == [(1,), (2,), (1, 2)]
    assert q.d_basis("Y", "Y", q.eps((1, 2), "Y")) == {q.eps((1,), "Y"): 1, q.eps((2,), "Y"): -1}
    assert q.generator_report().ok


def test_cech_three_marks():
    q = generalized_quotient(example_pcat(3), (-4, 0))
    d = q.d_basis("Y", "Y", q.eps((1, 2, 3), "Y"))
    assert d == {q.eps((1, 2), "Y"): 1, q.eps((1, 3), "Y"): -1, q.eps((2, 3), "Y"): 1}
    assert q.d("Y", "Y", d) == {}
    assert q.generator_report().ok


def test_generalized_quotient_valid():
    assert validate_dg_category(generalized_quotient(example_pcat(2), (-2, 0))).ok


def test_marked_subsets_checked():
    with pytest.raises(DgError):
        PCat(two_object_example(), [{"Q"}])
    with pytest.raises(DgError):
        PCat(two_object_example(), [])


# --- Ψ --------------------------------------------------------------------------

def test_psi_single_mark_is_identity():
    psi, r = psi_comparison(example_pcat(1), (-4, 0))
    assert r.ok
    for x in "XY":
        for y in "XY":
            for w, _ in psi.source.hom(x, y).basis():
                assert psi.fmap(x, y, w) == {w: 1}


def test_psi_two_copies_quasi_equivalence():
    psi, r = psi_comparison(example_pcat(2), (-5, 0))
    assert r.ok, r.failures
    q = psi.source
    assert psi.fmap("Y", "Y", q.eps((1, 2), "Y")) == {}
    assert psi.fmap("Y", "Y", q.eps((2,), "Y")) == {q.eps((1,), "Y"): 1}
    # Ψ(dε¹²) = ε − ε = 0
    assert psi.apply("Y", "Y", q.d_basis("Y", "Y", q.eps((1, 2), "Y"))) == {}


def test_psi_verdict_equals_cone_acyclicity():
    psi, _ = psi_comparison(example_pcat(2), (-4, 0))
    for x in "XY":
        for y in "XY":
            m = psi.hom_map(x, y)
            assert is_acyclic(cone(m), range(-4, 0))


# --- tensor products and β ----------------------------------------------------

def test_tensor_with_point_is_same():
    c = two_object_example()
    t = tensor_dgcat(c, one_object())
    assert validate_dg_category(t).ok
    for x in c.objects:
        for y in c.objects:
            assert t.hom(Tensor((x, "*")), Tensor((y, "*"))).dims == c.hom(x, y).dims


def test_tensor_pcat_marks_layout():
    x, y = example_pcat(2), example_pcat(1)
    p = tensor_pcat(x, y)
    assert len(p.marked) == 3
    assert p.marked[0] == {Tensor(("Y", "X")), Tensor(("Y", "Y"))}
    assert p.marked[2] == {Tensor(("X", "Y")), Tensor(("Y", "Y"))}


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=3, max_size=3))
def test_tensor_pcat_strictly_associative(copies):
    a, b, c = (example_pcat(k) for k in copies)
    assert same_pcat(tensor_pcat(tensor_pcat(a, b), c), tensor_pcat(a, tensor_pcat(b, c)))


def test_tensor_category_koszul_valid():
    # odd morphisms on both sides exercise the Koszul sign
    c = from_generators(["X", "Y"], [("u", "X", "Y", -1), ("v", "X", "Y", 0)],
                        differential={"u": {"v": 1}})
    assert validate_dg_category(c).ok
    assert validate_dg_category(tensor_dgcat(c, c)).ok


def test_beta_example_quasi_equivalence():
    b = colax_beta(example_pcat(1), example_pcat(1), (-4, 0))
    assert b.report.ok, b.report.failures


def test_beta_sign_is_forced():
    f = beta_functor(example_pcat(1), example_pcat(1), (-3, 0), sign_rule=lambda a, b: 1)
    r = functor_report(f)
    assert not r.passed("commutes with d")


def test_beta_trivial_marks_is_isomorphism():
    x = PCat(two_object_example(), [set()])
    b = colax_beta(x, x, (-3, 0))
    assert b.report.ok
    for a in b.functor.source.objects:
        for c in b.functor.source.objects:
            m = b.functor.hom_map(a, c)
            for n, layer in m.layers.items():
                assert layer.domain.dim == layer.codomain.dim


def test_beta_coassociative():
    p = example_pcat(1)
    r = coassociativity_report(p, p, p, (-2, 0))
    assert r.ok, r.failures


# --- quasi-equivalences -----------------------------------------------------------

def test_identity_is_quasi_equivalence():
    c = two_object_example()
    assert quasi_equivalence_check(identity_functor(c)).ok


def test_inclusion_into_quotient_is_not():
    q = drinfeld_quotient(two_object_example(), {"Y"}, (-3, 0))
    r = quasi_equivalence_check(inclusion_functor(q))
    assert not r.passed("Hom quasi-isomorphisms")
    assert "Y→Y" in r["Hom quasi-isomorphisms"].detail


def thickened_example():
    """Two-object example with an acyclic pair u ↦ v added to Hom(X, Y)."""
    return from_generators(["X", "Y"], [("f", "X", "Y", 0), ("u", "X", "Y", -1),
                                        ("v", "X", "Y", 0)], differential={"u": {"v": 1}},
                           name="D")


def test_induced_functor_on_quotients():
    c, d = two_object_example(), thickened_example()
    f = DgFunctor(c, d, lambda x: x, lambda x, y, k: {k: 1}, name="F")
    assert quasi_equivalence_check(f).ok
    qc = drinfeld_quotient(c, {"Y"}, (-3, 0))
    qd = drinfeld_quotient(d, {"Y"}, (-3, 0))
    fbar = induced_functor(f, qc, qd)
    assert functor_report(fbar).ok
    assert quasi_equivalence_check(fbar).ok


def test_h0_isomorphism_search():
    # X ≅ X′ via closed degree-0 maps; the one-object inclusion is essentially surjective
    c = from_generators(["X", "X'"], [("a", "X", "X'", 0), ("b", "X'", "X", 0)],
                        compose_rules={("b", "a"): {"id_X": 1}, ("a", "b"): {"id_X'": 1}})
    assert validate_dg_category(c).ok
    assert h0_isomorphic(c, "X", "X'")
    assert not h0_isomorphic(two_object_example(), "X", "Y")
    sub = from_generators(["X"], [])
    f = DgFunctor(sub, c, lambda x: x, lambda x, y, k: {k: 1})
    r = quasi_equivalence_check(f)
    assert r.passed("H⁰ essentially surjective")
