"""
The two monoidal products on tetramodules, the braiding and the
Eckmann–Hilton map, plus exactness checks.

⊠₁ and ⊠₂ are tetramodule structures on M⊗N.  ⊗₁ is the quotient of M⊠₁N
by ma⊗n − m⊗an; ⊗₂ is the subspace of M⊠₂N where (d_r⊗id) and (id⊗d_l)
agree.  Induced structures are computed through a section (⊗₁) or by
corestriction (⊗₂), after checking that they descend or restrict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .hopf import HopfAlgebra, HopfError, ident
from .linalg import (
    LinearMap, Space, corestrict, direct_sum_space, inverse, is_injective, is_iso, is_surjective,
    kernel_basis, permutation_map, quotient_by, rank, solve, subquotient,
)
from .report import Report
from .tetra import (
    TetraError, Tetramodule, regular_tetramodule, tetra_decomposition_report,
    two_sided_coinvariants,
)


def _perm(spaces, order):
    src = spaces[0]
    for s in spaces[1:]:
        src = src @ s
    tgt = spaces[order[0]]
    for k in order[1:]:
        tgt = tgt @ spaces[k]
    return permutation_map(src, [s.dim for s in spaces], order, tgt)


def _same_base(m: Tetramodule, n: Tetramodule):
    if m.base is not n.base and not m.base.same_data(n.base):
        raise TetraError("tetramodules live over different bialgebras")


# ---------------------------------------------------------------------------
# external products


def external_product(m: Tetramodule, n: Tetramodule, variant: int) -> Tetramodule:
    _same_base(m, n)
    B = m.base
    Bs, M, N = B.space, m.space, n.space
    IM, IN = ident(M), ident(N)
    if variant == 1:
        ml = m.ml.tensor(IN)
        mr = IM.tensor(n.mr)
        dl = B.m.tensor(IM).tensor(IN) @ _perm([Bs, M, Bs, N], [0, 2, 1, 3]) @ m.dl.tensor(n.dl)
        dr = IM.tensor(IN).tensor(B.m) @ _perm([M, Bs, N, Bs], [0, 2, 1, 3]) @ m.dr.tensor(n.dr)
    elif variant == 2:
        ml = m.ml.tensor(n.ml) @ _perm([Bs, Bs, M, N], [0, 2, 1, 3]) @ B.delta.tensor(IM).tensor(IN)
        mr = m.mr.tensor(n.mr) @ _perm([M, N, Bs, Bs], [0, 2, 1, 3]) @ IM.tensor(IN).tensor(B.delta)
        dl = m.dl.tensor(IN)
        dr = IM.tensor(n.dr)
    else:
        raise ValueError("variant must be 1 or 2")
    return Tetramodule(B, M @ N, ml, mr, dl, dr,
                       "(%s ⊠%d %s)" % (m.name or "?", variant, n.name or "?"))


# ---------------------------------------------------------------------------
# internal products


@dataclass
class InternalProduct:
    variant: int
    left: Tetramodule
    right: Tetramodule
    ambient: Tetramodule
    carrier: Space
    tetramodule: Tetramodule
    witness: LinearMap  # π: M⊗N → carrier (⊗₁) or ι: carrier → M⊗N (⊗₂)
    section: LinearMap  # carrier → M⊗N (a section of π, or ι itself)
    report: Report = field(default_factory=Report)

    @property
    def dim(self):
        return self.carrier.dim


def _relation_map(m: Tetramodule, n: Tetramodule) -> LinearMap:
    # M⊗B⊗N → M⊗N, m⊗a⊗n ↦ ma⊗n − m⊗an
    return m.mr.tensor(ident(n.space)) - ident(m.space).tensor(n.ml)


def internal_product(m: Tetramodule, n: Tetramodule, variant: int) -> InternalProduct:
    _same_base(m, n)
    amb = external_product(m, n, variant)
    B = m.base
    Bs, X = B.space, amb.space
    IB = ident(Bs)
    r = Report("%s ⊗%d %s" % (m.name or "?", variant, n.name or "?"))
    if variant == 1:
        rel = _relation_map(m, n)
        Q, pi, sec = quotient_by(X, list(rel.cols.values()), with_section=True)
        Q = Space("[%s]" % l[1:-1] if l.startswith("[") else l for l in Q.labels)
        pi, sec = pi.relabel(codomain=Q), sec.relabel(domain=Q)
        zero_rel = lambda f: f.is_zero()
        IBr = IB.tensor(rel)
        r.add("ml descends", zero_rel(pi @ amb.ml @ IBr))
        r.add("mr descends", zero_rel(pi @ amb.mr @ rel.tensor(IB)))
        r.add("dl descends", zero_rel(IB.tensor(pi) @ amb.dl @ rel))
        r.add("dr descends", zero_rel(pi.tensor(IB) @ amb.dr @ rel))
        t = Tetramodule(B, Q, pi @ amb.ml @ IB.tensor(sec), pi @ amb.mr @ sec.tensor(IB),
                        IB.tensor(pi) @ amb.dl @ sec, pi.tensor(IB) @ amb.dr @ sec,
                        "(%s ⊗1 %s)" % (m.name or "?", n.name or "?"))
        return InternalProduct(1, m, n, amb, Q, t, pi, sec, r)
    if variant == 2:
        IM, IN = ident(m.space), ident(n.space)
        f = m.dr.tensor(IN)
        g = IM.tensor(n.dl).relabel(codomain=f.codomain)
        E, inc = subquotient(X, f, g, "equalizer")
        maps = {}
        for key, raw, into in (("ml", amb.ml @ IB.tensor(inc), inc),
                               ("mr", amb.mr @ inc.tensor(IB), inc),
                               ("dl", amb.dl @ inc, IB.tensor(inc)),
                               ("dr", amb.dr @ inc, inc.tensor(IB))):
            c = corestrict(raw, into)
            r.add(key + " restricts", c is not None)
            maps[key] = c
        if any(v is None for v in maps.values()):
            raise TetraError("⊠₂ structure does not restrict to the equalizer")
        t = Tetramodule(B, E, maps["ml"], maps["mr"], maps["dl"], maps["dr"],
                        "(%s ⊗2 %s)" % (m.name or "?", n.name or "?"))
        return InternalProduct(2, m, n, amb, E, t, inc, inc, r)
    raise ValueError("variant must be 1 or 2")


# ---------------------------------------------------------------------------
# morphisms


def morphism_defects(f: LinearMap, x: Tetramodule, y: Tetramodule) -> list:
    """Names of the structure maps that ``f: x → y`` fails to commute with."""
    IB = ident(x.base.space)
    bad = []
    if f @ x.ml != y.ml @ IB.tensor(f):
        bad.append("ml")
    if f @ x.mr != y.mr @ f.tensor(IB):
        bad.append("mr")
    if IB.tensor(f) @ x.dl != y.dl @ f:
        bad.append("dl")
    if f.tensor(IB) @ x.dr != y.dr @ f:
        bad.append("dr")
    return bad


def is_morphism(f: LinearMap, x: Tetramodule, y: Tetramodule) -> bool:
    return not morphism_defects(f, x, y)


def tensor_morphisms(f: LinearMap, g: LinearMap, src: InternalProduct,
                     tgt: InternalProduct) -> LinearMap:
    """f ⊗ᵥ g : src → tgt, for morphisms f: src.left → tgt.left, g: src.right → tgt.right."""
    if src.variant != tgt.variant:
        raise ValueError("variants differ")
    raw = f.tensor(g).relabel(src.ambient.space, tgt.ambient.space)
    if src.variant == 1:
        return tgt.witness @ raw @ src.section
    c = corestrict(raw @ src.witness, tgt.witness)
    if c is None:
        raise TetraError("f ⊗₂ g does not land in the target equalizer")
    return c


# ---------------------------------------------------------------------------
# comparison of ⊗₁ and ⊗₂


@dataclass
class Comparison:
    report: Report
    product1: InternalProduct
    product2: InternalProduct
    iso: Optional[LinearMap]  # M⊗₁N → M⊗₂N when certified


def compare_products(m: Tetramodule, n: Tetramodule) -> Comparison:
    """Dimensions of both products against dim B²·dim M₀·dim N₀, and a candidate iso.

    Candidate: both products receive B⊗B⊗M₀⊗N₀ via b⊗b'⊗m₀⊗n₀ ↦ b·m₀ ⊗ n₀·b'.
    When both of these maps are bijective, the composite M⊗₁N → M⊗₂N is checked
    to be a tetramodule isomorphism.
    """
    _same_base(m, n)
    B = m.base
    if not isinstance(B, HopfAlgebra):
        raise HopfError("compare_products needs a Hopf algebra")
    Bs = B.space
    p1 = internal_product(m, n, 1)
    p2 = internal_product(m, n, 2)
    M0, im = two_sided_coinvariants(m)
    N0, inn = two_sided_coinvariants(n)
    predicted = Bs.dim ** 2 * M0.dim * N0.dim
    r = Report("compare %s, %s" % (m.name or "?", n.name or "?"))
    r.add("products well defined", p1.report.ok and p2.report.ok)
    r.info("dims", dim_otimes1=p1.dim, dim_otimes2=p2.dim, dim_B=Bs.dim, dim_M0=M0.dim,
           dim_N0=N0.dim, predicted=predicted)
    r.add("dim ⊗1 = dim ⊗2", p1.dim == p2.dim, dim_otimes1=p1.dim, dim_otimes2=p2.dim)
    r.add("dim ⊗1 = B²·M0·N0", p1.dim == predicted, dim_otimes1=p1.dim, predicted=predicted)
    r.add("dim ⊗2 = B²·M0·N0", p2.dim == predicted, dim_otimes2=p2.dim, predicted=predicted)
    # b⊗b'⊗m0⊗n0 → (b·m0)⊗(n0·b') in M⊗N
    IB = ident(Bs)
    left = m.ml @ IB.tensor(im)          # B⊗M0 → M
    right = n.mr @ inn.tensor(IB)        # N0⊗B → N
    raw = left.tensor(right) @ _perm([Bs, Bs, M0, N0], [0, 2, 3, 1])
    phi1 = p1.witness @ raw
    phi2 = corestrict(raw, p2.witness)
    dm, dn = tetra_decomposition_report(m), tetra_decomposition_report(n)
    dec_ok = dm.report.ok and dn.report.ok
    r.add("decompositions bijective", dec_ok,
          "" if dec_ok else "the candidate below is reported for information only")
    r1 = rank(phi1)
    r.add("candidate onto ⊗1 bijective", is_iso(phi1), rank=r1, source=raw.domain.dim,
          target=p1.dim)
    iso = None
    if phi2 is None:
        r.add("candidate lands in ⊗2", False)
    else:
        r.add("candidate onto ⊗2 bijective", is_iso(phi2), rank=rank(phi2),
              source=raw.domain.dim, target=p2.dim)
        if dec_ok and is_iso(phi1) and is_iso(phi2):
            iso = phi2 @ inverse(phi1)
            bad = morphism_defects(iso, p1.tetramodule, p2.tetramodule)
            r.add("comparison is a tetramodule map", not bad, ", ".join(bad))
    r.add("isomorphism certified", iso is not None and "comparison is a tetramodule map" in r
          and r.passed("comparison is a tetramodule map"))
    return Comparison(r, p1, p2, iso)


# ---------------------------------------------------------------------------
# braiding and Eckmann–Hilton


def lambda_prime(n0: Space, p0: Space, b: Space) -> LinearMap:
    """(b⊗n₀)⊗(p₀⊗b') ↦ (b'⊗p₀)⊗(n₀⊗b) on B⊗N₀⊗P₀⊗B."""
    return _perm([b, n0, p0, b], [3, 2, 1, 0])


@dataclass
class Braiding:
    lam_prime: LinearMap
    lam: Optional[LinearMap]  # N⊗₁P → P⊗₁N
    report: Report
    np: Optional[InternalProduct] = None
    pn: Optional[InternalProduct] = None


def braiding(n: Tetramodule, p: Tetramodule, with_square: bool = True) -> Braiding:
    """λ′ on decomposed carriers, and λ = (actions)∘λ′∘(β_N⊗β_P) when both β exist."""
    _same_base(n, p)
    B = n.base
    if not isinstance(B, HopfAlgebra):
        raise HopfError("the braiding needs a Hopf algebra")
    Bs = B.space
    dn = tetra_decomposition_report(n)
    dp = tetra_decomposition_report(p)
    lp = lambda_prime(dn.M0, dp.M0, Bs)
    back = lambda_prime(dp.M0, dn.M0, Bs)
    r = Report("braiding %s, %s" % (n.name or "?", p.name or "?"))
    r.add("λ′∘λ′ = id", back @ lp == ident(lp.domain))
    usable = lambda d: d.beta is not None and d.report.passed("injective") and \
        d.report.passed("surjective") and d.report.passed("alpha beta = id")
    if not (usable(dn) and usable(dp)):
        r.add("λ available", False, "decomposition of %s not bijective"
              % ("N" if not usable(dn) else "P"))
        return Braiding(lp, None, r)
    r.add("λ available", True)
    np_ = internal_product(n, p, 1)
    pn_ = internal_product(p, n, 1)
    N0, P0 = dn.M0, dp.M0
    # β_N ⊗ β_P : N⊗P → (B⊗B⊗N0)⊗(B⊗B⊗P0); reorder each to b, x0, b'
    to_bxb = lambda x0: _perm([Bs, Bs, x0], [0, 2, 1])
    split = to_bxb(N0).tensor(to_bxb(P0)) @ dn.beta.tensor(dp.beta)
    # reverse the word b n0 b₁' c p0 c' to c' p0 c b₁' n0 b
    rev = _perm([Bs, N0, Bs, Bs, P0, Bs], [5, 4, 3, 2, 1, 0])
    # act: (c' p0 c) ↦ c'·p0·c ∈ P, (b₁' n0 b) ↦ b₁'·n0·b ∈ N
    act = lambda t, d: t.ml @ ident(Bs).tensor(t.mr) @ ident(Bs).tensor(d.inclusion).tensor(ident(Bs))
    raw = act(p, dp).tensor(act(n, dn)) @ rev @ split
    raw = raw.relabel(n.space @ p.space, pn_.ambient.space)
    lam = pn_.witness @ raw @ np_.section
    r.add("λ well defined on ⊗1", (pn_.witness @ raw @ _relation_map(n, p)).is_zero())
    r.add("λ tetramodule map", is_morphism(lam, np_.tetramodule, pn_.tetramodule))
    r.add("λ invertible", is_iso(lam), rank=rank(lam), dim=np_.dim)
    if with_square and n is p:
        sq = lam @ lam
        r.info("λ² = id", "yes" if sq == ident(lam.domain) else "no")
    return Braiding(lp, lam, r, np_, pn_)


def braiding_square(n: Tetramodule, p: Tetramodule) -> Report:
    """λ_PN ∘ λ_NP, reported (not expected to be id in general)."""
    a = braiding(n, p, False)
    b = braiding(p, n, False)
    r = Report("λ_PN∘λ_NP")
    if a.lam is None or b.lam is None:
        r.add("available", False)
        return r
    sq = b.lam @ a.lam
    r.info("symmetric", "yes" if sq == ident(sq.domain) else "no",
           rank_of_difference=rank(sq - ident(sq.domain)))
    return r


@dataclass
class EckmannHilton:
    eta: Optional[LinearMap]
    report: Report


def eckmann_hilton(m: Tetramodule, n: Tetramodule, p: Tetramodule, q: Tetramodule) -> EckmannHilton:
    """η = id_M ⊗₁ (λ_NP ⊗₁ id_Q) : M⊗₁((N⊗₁P)⊗₁Q) → M⊗₁((P⊗₁N)⊗₁Q)."""
    r = Report("eckmann-hilton")
    br = braiding(n, p, False)
    r.extend(br.report, "braiding: ")
    if br.lam is None:
        r.add("η isomorphism", False, "braiding unavailable")
        return EckmannHilton(None, r)
    npq = internal_product(br.np.tetramodule, q, 1)
    pnq = internal_product(br.pn.tetramodule, q, 1)
    inner = tensor_morphisms(br.lam, ident(q.space), npq, pnq)
    src = internal_product(m, npq.tetramodule, 1)
    tgt = internal_product(m, pnq.tetramodule, 1)
    eta = tensor_morphisms(ident(m.space), inner, src, tgt)
    r.add("η tetramodule map", is_morphism(eta, src.tetramodule, tgt.tetramodule))
    r.add("η isomorphism", is_iso(eta), rank=rank(eta), source=src.dim, target=tgt.dim)
    return EckmannHilton(eta, r)


# ---------------------------------------------------------------------------
# unit object


def unit_checks(m: Tetramodule) -> Report:
    """B⊗₁M → M (b⊗m ↦ bm) and M → B⊗₂M (m ↦ d_l(m)) are tetramodule isomorphisms."""
    B = m.base
    e = regular_tetramodule(B)
    r = Report("unit %s" % (m.name or "?"))
    p1 = internal_product(e, m, 1)
    f = m.ml.relabel(p1.ambient.space, m.space) @ p1.section
    r.add("B ⊗1 M ≅ M", is_iso(f) and is_morphism(f, p1.tetramodule, m))
    p2 = internal_product(e, m, 2)
    g = corestrict(m.dl.relabel(m.space, p2.ambient.space), p2.witness)
    r.add("M ≅ B ⊗2 M", g is not None and is_iso(g) and is_morphism(g, m, p2.tetramodule))
    return r


# ---------------------------------------------------------------------------
# exact sequences


def direct_sum(a: Tetramodule, b: Tetramodule) -> Tetramodule:
    """A⊕B with the evident block structures."""
    _same_base(a, b)
    Bs = a.base.space
    S = direct_sum_space(a.space, b.space)
    inj = [LinearMap(a.space, S, {j: {j: 1} for j in range(a.dim)}),
           LinearMap(b.space, S, {j: {a.dim + j: 1} for j in range(b.dim)})]
    prj = [LinearMap(S, a.space, {j: {j: 1} for j in range(a.dim)}),
           LinearMap(S, b.space, {a.dim + j: {j: 1} for j in range(b.dim)})]
    IB = ident(Bs)
    pairs = ((a, inj[0], prj[0]), (b, inj[1], prj[1]))
    ml = sum_maps(i @ t.ml @ IB.tensor(p) for t, i, p in pairs)
    mr = sum_maps(i @ t.mr @ p.tensor(IB) for t, i, p in pairs)
    dl = sum_maps(IB.tensor(i) @ t.dl @ p for t, i, p in pairs)
    dr = sum_maps(i.tensor(IB) @ t.dr @ p for t, i, p in pairs)
    return Tetramodule(a.base, S, ml, mr, dl, dr, "(%s ⊕ %s)" % (a.name or "?", b.name or "?"))


def sum_maps(maps):
    out = None
    for f in maps:
        out = f if out is None else out + f
    return out


def sub_tetramodule(t: Tetramodule, inclusion: LinearMap, name: str = "") -> Tetramodule:
    """Restrict the structure to an invariant subspace spanned by ``inclusion``."""
    IB = ident(t.base.space)
    ml = corestrict(t.ml @ IB.tensor(inclusion), inclusion)
    mr = corestrict(t.mr @ inclusion.tensor(IB), inclusion)
    dl = corestrict(t.dl @ inclusion, IB.tensor(inclusion))
    dr = corestrict(t.dr @ inclusion, inclusion.tensor(IB))
    if None in (ml, mr, dl, dr):
        raise TetraError("subspace is not a sub-tetramodule")
    return Tetramodule(t.base, inclusion.domain, ml, mr, dl, dr, name)


@dataclass
class ShortExact:
    a: Tetramodule
    m: Tetramodule
    c: Tetramodule
    i: LinearMap  # A → M
    p: LinearMap  # M → C


def check_exact(i: LinearMap, p: LinearMap) -> Report:
    r = Report("exactness")
    r.add("injective", is_injective(i), rank=rank(i), dim=i.domain.dim)
    r.add("surjective", is_surjective(p), rank=rank(p), dim=p.codomain.dim)
    r.add("composite zero", (p @ i).is_zero())
    r.add("middle exact", rank(i) == p.domain.dim - rank(p), rank_i=rank(i),
          dim_ker_p=p.domain.dim - rank(p))
    return r


def split_sequence(a: Tetramodule, c: Tetramodule) -> ShortExact:
    s = direct_sum(a, c)
    i = LinearMap(a.space, s.space, {j: {j: 1} for j in range(a.dim)})
    p = LinearMap(s.space, c.space, {a.dim + j: {j: 1} for j in range(c.dim)})
    return ShortExact(a, s, c, i, p)


def kernel_sequence(m: Tetramodule, c: Tetramodule, p: LinearMap) -> ShortExact:
    """0 → ker p → M → C → 0 for a surjective tetramodule map p."""
    basis = kernel_basis(p)
    K = Space("k%d" % j for j in range(len(basis)))
    inc = LinearMap(K, m.space, dict(enumerate(basis)))
    a = sub_tetramodule(m, inc, "ker")
    return ShortExact(a, m, c, inc, p)


def splits(ses: ShortExact) -> bool:
    """Whether a tetramodule map s: C → M with p∘s = id exists (exact linear solve)."""
    C, M = ses.c, ses.m
    IB = ident(C.base.space)
    nC, nM = C.dim, M.dim

    def residual(s: LinearMap) -> dict:
        parts = [ses.p @ s, s @ C.ml - M.ml @ IB.tensor(s), s @ C.mr - M.mr @ s.tensor(IB),
                 IB.tensor(s) @ C.dl - M.dl @ s, s.tensor(IB) @ C.dr - M.dr @ s]
        out, off = {}, 0
        for f in parts:
            for j, col in f.cols.items():
                for i, x in col.items():
                    out[off + j * f.codomain.dim + i] = x
            off += f.domain.dim * f.codomain.dim
        return out, off

    zero = LinearMap.zero(C.space, M.space)
    base, total = residual(zero)
    cols = {}
    for j in range(nC):
        for i in range(nM):
            e = LinearMap(C.space, M.space, {j: {i: 1}})
            v, _ = residual(e)
            cols[j * nM + i] = {k: x - base.get(k, 0) for k, x in v.items()
                                if x - base.get(k, 0)}
    A = LinearMap(Space.of_dim(nC * nM, "s"), Space.of_dim(total, "r"), cols)
    # p∘s = id sits in the first nC*nC rows
    target = {j * nC + j: 1 for j in range(nC)}
    return solve(A, target) is not None


def exactness_check(n: Tetramodule, ses: ShortExact, variant: int) -> Report:
    """Apply (−)⊗ᵥN and N⊗ᵥ(−) to the sequence and check exactness by ranks."""
    r = Report("exactness ⊗%d with %s" % (variant, n.name or "?"))
    inp = check_exact(ses.i, ses.p)
    morph = is_morphism(ses.i, ses.a, ses.m) and is_morphism(ses.p, ses.m, ses.c)
    if not inp.ok or not morph:
        raise TetraError("input is not a short exact sequence of tetramodules")
    In = ident(n.space)
    for side in ("right", "left"):
        if side == "right":
            P = [internal_product(x, n, variant) for x in (ses.a, ses.m, ses.c)]
            i2 = tensor_morphisms(ses.i, In, P[0], P[1])
            p2 = tensor_morphisms(ses.p, In, P[1], P[2])
            tag = "(−)⊗%d N" % variant
        else:
            P = [internal_product(n, x, variant) for x in (ses.a, ses.m, ses.c)]
            i2 = tensor_morphisms(In, ses.i, P[0], P[1])
            p2 = tensor_morphisms(In, ses.p, P[1], P[2])
            tag = "N⊗%d (−)" % variant
        r.extend(check_exact(i2, p2), tag + " ")
        r.info(tag + " dims", a=P[0].dim, m=P[1].dim, c=P[2].dim)
    return r
