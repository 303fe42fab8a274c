"""
Tetramodules over a bialgebra, one-sided Hopf modules and their coinvariants.

A tetramodule carries m_l: B⊗M→M, m_r: M⊗B→M, d_l: M→B⊗M, d_r: M→M⊗B.
Every compatibility is checked as one matrix identity; the four bialgebra
compatibilities are

    d_l(a·m) = a₁m₋₁ ⊗ a₂m₀        d_l(m·a) = m₋₁a₁ ⊗ m₀a₂
    d_r(a·m) = a₁m₀ ⊗ a₂m₁         d_r(m·a) = m₀a₁ ⊗ m₁a₂

(Sweedler notation, d_l(m) = m₋₁⊗m₀, d_r(m) = m₀⊗m₁).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .hopf import (
    Bialgebra, HopfAlgebra, HopfError, ident, middle_swap, opposite, swap, tensor_hopf,
)
from .linalg import (
    LinearMap, Space, corestrict, kernel_basis, permutation_map, rank,
)
from .report import Report


class TetraError(ValueError):
    pass


@dataclass
class Tetramodule:
    base: Bialgebra
    space: Space
    ml: LinearMap  # B⊗M → M
    mr: LinearMap  # M⊗B → M
    dl: LinearMap  # M → B⊗M
    dr: LinearMap  # M → M⊗B
    name: str = ""

    def __post_init__(self):
        B, M = self.base.space, self.space
        self.ml = _fit(self.ml, B @ M, M, "ml")
        self.mr = _fit(self.mr, M @ B, M, "mr")
        self.dl = _fit(self.dl, M, B @ M, "dl")
        self.dr = _fit(self.dr, M, M @ B, "dr")

    @property
    def dim(self):
        return self.space.dim

    def left_hopf_module(self) -> "HopfModule":
        return HopfModule(self.base, self.space, self.ml, self.dl, "left", self.name)

    def right_hopf_module(self) -> "HopfModule":
        return HopfModule(self.base, self.space, self.mr, self.dr, "right", self.name)

    def __repr__(self):
        return "Tetramodule(%s over %s, dim=%d)" % (self.name or "?", self.base.name, self.dim)


@dataclass
class HopfModule:
    """One-sided Hopf module.  For side="right" the maps are M⊗B→M and M→M⊗B."""

    base: Bialgebra
    space: Space
    action: LinearMap
    coaction: LinearMap
    side: str = "left"
    name: str = ""

    def __post_init__(self):
        B, M = self.base.space, self.space
        if self.side == "left":
            self.action = _fit(self.action, B @ M, M, "action")
            self.coaction = _fit(self.coaction, M, B @ M, "coaction")
        elif self.side == "right":
            self.action = _fit(self.action, M @ B, M, "action")
            self.coaction = _fit(self.coaction, M, M @ B, "coaction")
        else:
            raise TetraError("side must be 'left' or 'right'")

    @property
    def dim(self):
        return self.space.dim

    def as_left(self) -> "HopfModule":
        """A right Hopf module over B is a left one over B with both structures flipped."""
        if self.side == "left":
            return self
        B, M = self.base.space, self.space
        return HopfModule(opposite(self.base), M, self.action @ swap(B, M),
                          swap(M, B) @ self.coaction, "left", self.name)


def _fit(f: LinearMap, dom: Space, cod: Space, what: str) -> LinearMap:
    if f.domain.dim != dom.dim or f.codomain.dim != cod.dim:
        raise TetraError("%s has shape %s, expected (%d, %d)" % (what, f.shape, cod.dim, dom.dim))
    return f.relabel(dom, cod)


# ---------------------------------------------------------------------------
# checks


def _module_checks(r: Report, B: Bialgebra, M: Space, act: LinearMap, side: str, tag: str):
    I, Bs = ident(M), B.space
    IB = ident(Bs)
    if side == "left":
        r.add(tag + " module associativity", act @ B.m.tensor(I) == act @ IB.tensor(act))
        r.add(tag + " module unit", act @ B.unit.tensor(I) == I)
    else:
        r.add(tag + " module associativity", act @ I.tensor(B.m) == act @ act.tensor(IB))
        r.add(tag + " module unit", act @ I.tensor(B.unit) == I)


def _comodule_checks(r: Report, B: Bialgebra, M: Space, co: LinearMap, side: str, tag: str):
    I, IB = ident(M), ident(B.space)
    if side == "left":
        r.add(tag + " comodule coassociativity", B.delta.tensor(I) @ co == IB.tensor(co) @ co)
        r.add(tag + " comodule counit", B.counit.tensor(I) @ co == I)
    else:
        r.add(tag + " comodule coassociativity", I.tensor(B.delta) @ co == co.tensor(IB) @ co)
        r.add(tag + " comodule counit", I.tensor(B.counit) @ co == I)


def _compat_ll(B, M, ml, dl):
    # d_l(a·m) = a₁m₋₁ ⊗ a₂m₀
    Bs = B.space
    rhs = B.m.tensor(ml) @ middle_swap(Bs, Bs, Bs, M) @ B.delta.tensor(dl)
    return dl @ ml == rhs


def _compat_lr(B, M, mr, dl):
    # d_l(m·a) = m₋₁a₁ ⊗ m₀a₂
    Bs = B.space
    rhs = B.m.tensor(mr) @ middle_swap(Bs, M, Bs, Bs) @ dl.tensor(B.delta)
    return dl @ mr == rhs


def _compat_rl(B, M, ml, dr):
    # d_r(a·m) = a₁m₀ ⊗ a₂m₁
    Bs = B.space
    rhs = ml.tensor(B.m) @ middle_swap(Bs, Bs, M, Bs) @ B.delta.tensor(dr)
    return dr @ ml == rhs


def _compat_rr(B, M, mr, dr):
    # d_r(m·a) = m₀a₁ ⊗ m₁a₂
    Bs = B.space
    rhs = mr.tensor(B.m) @ middle_swap(M, Bs, Bs, Bs) @ dr.tensor(B.delta)
    return dr @ mr == rhs


def validate_tetramodule(t: Tetramodule) -> Report:
    B, M = t.base, t.space
    IB = ident(B.space)
    r = Report("tetramodule %s" % (t.name or "?"))
    _module_checks(r, B, M, t.ml, "left", "left")
    _module_checks(r, B, M, t.mr, "right", "right")
    r.add("bimodule", t.ml @ IB.tensor(t.mr) == t.mr @ t.ml.tensor(IB))
    _comodule_checks(r, B, M, t.dl, "left", "left")
    _comodule_checks(r, B, M, t.dr, "right", "right")
    r.add("bicomodule", t.dl.tensor(IB) @ t.dr == IB.tensor(t.dr) @ t.dl)
    r.add("compat dl(a.m)", _compat_ll(B, M, t.ml, t.dl))
    r.add("compat dl(m.a)", _compat_lr(B, M, t.mr, t.dl))
    r.add("compat dr(a.m)", _compat_rl(B, M, t.ml, t.dr))
    r.add("compat dr(m.a)", _compat_rr(B, M, t.mr, t.dr))
    return r


def validate_hopf_module(h: HopfModule) -> Report:
    B, M = h.base, h.space
    r = Report("%s hopf module %s" % (h.side, h.name or "?"))
    _module_checks(r, B, M, h.action, h.side, h.side)
    _comodule_checks(r, B, M, h.coaction, h.side, h.side)
    if h.side == "left":
        r.add("compatibility", _compat_ll(B, M, h.action, h.coaction))
    else:
        r.add("compatibility", _compat_rr(B, M, h.action, h.coaction))
    return r


# ---------------------------------------------------------------------------
# constructions


def regular_tetramodule(b: Bialgebra) -> Tetramodule:
    return Tetramodule(b, b.space, b.m, b.m, b.delta, b.delta, "regular(%s)" % b.name)


def _w_space(w) -> Space:
    if isinstance(w, Space):
        return w
    return Space.of_dim(int(w), "w")


def free_tetramodule(b: Bialgebra, w) -> Tetramodule:
    """B⊗W⊗B with actions on the outer factors and diagonal coactions.

    d_l(b⊗w⊗b') = b₁b'₁ ⊗ (b₂⊗w⊗b'₂) and d_r(b⊗w⊗b') = (b₁⊗w⊗b'₁) ⊗ b₂b'₂.
    The coactions must see both outer factors: with d_l taken from the left
    factor alone (see :func:`onesided_free_tetramodule`) the compatibility of
    d_l with the right action fails.
    """
    W = _w_space(w)
    Bs = b.space
    nb, nw = Bs.dim, W.dim
    M = Bs @ W @ Bs
    IB, IW = ident(Bs), ident(W)
    ml = b.m.tensor(IW).tensor(IB)
    mr = IB.tensor(IW).tensor(b.m)
    split = b.delta.tensor(IW).tensor(b.delta)  # b₁ b₂ w b'₁ b'₂
    dims = [nb, nb, nw, nb, nb]
    to_l = permutation_map(split.codomain, dims, [0, 3, 1, 2, 4], Bs @ Bs @ M)
    to_r = permutation_map(split.codomain, dims, [0, 2, 3, 1, 4], M @ Bs @ Bs)
    dl = b.m.tensor(ident(M)) @ to_l @ split
    dr = ident(M).tensor(b.m) @ to_r @ split
    return Tetramodule(b, M, ml, mr, dl, dr, "free(%s, %d)" % (b.name, nw))


def onesided_free_tetramodule(b: Bialgebra, w) -> Tetramodule:
    """B⊗W⊗B with d_l from the left factor only and d_r from the right factor only.

    Kept as a negative example: it is a bimodule and a bicomodule but not a
    tetramodule unless B is trivial.
    """
    W = _w_space(w)
    Bs = b.space
    IB, IW = ident(Bs), ident(W)
    M = Bs @ W @ Bs
    return Tetramodule(b, M, b.m.tensor(IW).tensor(IB), IB.tensor(IW).tensor(b.m),
                       b.delta.tensor(IW).tensor(IB), IB.tensor(IW).tensor(b.delta),
                       "onesided(%s, %d)" % (b.name, W.dim))


def zero_tetramodule(b: Bialgebra) -> Tetramodule:
    Z = Space([])
    return Tetramodule(b, Z, LinearMap.zero(b.space @ Z, Z), LinearMap.zero(Z @ b.space, Z),
                       LinearMap.zero(Z, b.space @ Z), LinearMap.zero(Z, Z @ b.space), "zero")


def regular_hopf_module(h: Bialgebra) -> HopfModule:
    return HopfModule(h, h.space, h.m, h.delta, "left", "regular(%s)" % h.name)


def free_hopf_module(h: Bialgebra, w) -> HopfModule:
    W = _w_space(w)
    IW = ident(W)
    return HopfModule(h, h.space @ W, h.m.tensor(IW), h.delta.tensor(IW), "left",
                      "free(%s, %d)" % (h.name, W.dim))


def zero_hopf_module(h: Bialgebra) -> HopfModule:
    Z = Space([])
    return HopfModule(h, Z, LinearMap.zero(h.space @ Z, Z), LinearMap.zero(Z, h.space @ Z))


# ---------------------------------------------------------------------------
# coinvariants and the fundamental theorem


def _subspace(M: Space, vectors, prefix: str):
    labels = []
    for k, v in enumerate(vectors):
        labels.append("%s%d" % (prefix, k) if len(v) != 1 or next(iter(v.values())) != 1
                      else M.labels[next(iter(v))])
    if len(set(labels)) != len(labels):
        labels = ["%s%d" % (prefix, k) for k in range(len(vectors))]
    sub = Space(labels)
    return sub, LinearMap(sub, M, {j: v for j, v in enumerate(vectors)})


def coinvariants(h: HopfModule):
    """M_Δ = {m : d(m) = 1⊗m} (or m⊗1 on the right), with its inclusion."""
    B, M = h.base, h.space
    if h.side == "left":
        trivial = B.unit.tensor(ident(M))
    else:
        trivial = ident(M).tensor(B.unit)
    return _subspace(M, kernel_basis(h.coaction - trivial), "c")


def two_sided_coinvariants(t: Tetramodule):
    """M₀ = {m : d_l(m) = 1⊗m and d_r(m) = m⊗1}."""
    B, M = t.base, t.space
    a = t.dl - B.unit.tensor(ident(M))
    b = t.dr - ident(M).tensor(B.unit)
    stacked = _vstack(a, b)
    return _subspace(M, kernel_basis(stacked), "c")


def _vstack(a: LinearMap, b: LinearMap) -> LinearMap:
    off = a.codomain.dim
    cod = Space(["0:" + l for l in a.codomain.labels] + ["1:" + l for l in b.codomain.labels])
    cols = {}
    for j in range(a.domain.dim):
        col = dict(a.cols.get(j, {}))
        for i, x in b.cols.get(j, {}).items():
            col[off + i] = x
        if col:
            cols[j] = col
    return LinearMap(a.domain, cod, cols, check=False)


@dataclass
class Decomposition:
    alpha: LinearMap
    beta: Optional[LinearMap]
    P: LinearMap
    report: Report
    coinvariants: Space


def fundamental_decomposition(h: HopfModule) -> Decomposition:
    """α(b⊗m') = b·m', P = m∘(S⊗id)∘d, β = (id⊗P)∘d; checks both composites are identities."""
    if not isinstance(h.base, HopfAlgebra):
        raise HopfError("the fundamental theorem needs an antipode")
    side = h.side
    if side == "right":
        h = h.as_left()
    H, M = h.base, h.space
    IH, IM = ident(H.space), ident(M)
    C, inc = coinvariants(h)
    P = h.action @ H.antipode.tensor(IM) @ h.coaction
    alpha = h.action @ IH.tensor(inc)
    r = Report("fundamental decomposition %s (%s)" % (h.name or "?", side))
    r.add("P(M) in M_coinv", (h.coaction - H.unit.tensor(IM)) @ P == LinearMap.zero(M, H.space @ M))
    r.add("image P = M_coinv", rank(P) == C.dim, rank_P=rank(P), dim_coinv=C.dim)
    r.add("P idempotent", P @ P == P)
    P0 = corestrict(P, inc)
    beta = None
    if P0 is not None:
        beta = IH.tensor(P0) @ h.coaction
        r.add("alpha beta = id", alpha @ beta == IM)
        r.add("beta alpha = id", beta @ alpha == ident(H.space @ C))
    else:
        r.add("alpha beta = id", False, "P does not land in the coinvariants")
        r.add("beta alpha = id", False, "P does not land in the coinvariants")
    r.info("dims", dim_M=M.dim, dim_H=H.dim, dim_coinv=C.dim)
    return Decomposition(alpha, beta, P, r, C)


# ---------------------------------------------------------------------------
# the two-sided reading


def tetra_as_hopf_module(t: Tetramodule) -> HopfModule:
    """The tetramodule viewed as a left module and comodule over H = B⊗B^op.

    Action (b⊗b')·m = b·m·b'.  Coaction m ↦ (m₋₁⊗m₁)⊗m₀, read off from
    (d_l⊗id)∘d_r : M → B⊗M⊗B; since B^op has the flipped coproduct, this is
    coassociative over H whenever M is a bicomodule.
    """
    B = t.base
    H = tensor_hopf(B, opposite(B))
    Bs, M = B.space, t.space
    IB = ident(Bs)
    # (b⊗b')⊗m → b⊗m⊗b' → b·m·b'
    reorder = permutation_map(Bs @ Bs @ M, [Bs.dim, Bs.dim, M.dim], [0, 2, 1], Bs @ M @ Bs)
    action = t.ml @ IB.tensor(t.mr) @ reorder
    lr = t.dl.tensor(IB) @ t.dr  # M → B⊗M⊗B
    back = permutation_map(Bs @ M @ Bs, [Bs.dim, M.dim, Bs.dim], [0, 2, 1], Bs @ Bs @ M)
    coaction = back @ lr
    return HopfModule(H, M, action.relabel(H.space @ M, M), coaction.relabel(M, H.space @ M),
                      "left", "%s over B⊗B^op" % (t.name or "?"))


@dataclass
class TetraDecomposition:
    M0: Space
    inclusion: LinearMap
    alpha: LinearMap  # B⊗B^op⊗M0 → M
    beta: Optional[LinearMap]
    report: Report


def tetra_decomposition_report(t: Tetramodule) -> TetraDecomposition:
    """The two-sided decomposition b⊗b'⊗m₀ ↦ b·m₀·b'; reports, never raises on failure.

    Candidate inverse: β = (id⊗P⊗id)∘(d_l⊗id)∘d_r reordered to B⊗B⊗M₀, with
    P = m_l m_r (S⊗id⊗S)(d_l⊗id)d_r.
    """
    B = t.base
    if not isinstance(B, HopfAlgebra):
        raise HopfError("the two-sided decomposition needs an antipode")
    Bs, M = B.space, t.space
    IB, IM = ident(Bs), ident(M)
    M0, inc = two_sided_coinvariants(t)
    r = Report("tetra decomposition %s" % (t.name or "?"))
    # α: B⊗B⊗M0 → M
    to_bmb = permutation_map(Bs @ Bs @ M, [Bs.dim, Bs.dim, M.dim], [0, 2, 1], Bs @ M @ Bs)
    act2 = t.ml @ IB.tensor(t.mr) @ to_bmb  # b⊗b'⊗m ↦ b·m·b'
    alpha = act2 @ IB.tensor(IB).tensor(inc)
    src = Bs.dim * Bs.dim * M0.dim
    rk = rank(alpha)
    r.info("dims", dim_B=Bs.dim, dim_M=M.dim, dim_M0=M0.dim, source_dim=src, rank=rk)
    r.add("injective", rk == src, rank=rk, source_dim=src)
    r.add("surjective", rk == M.dim, rank=rk, target_dim=M.dim)
    lr = t.dl.tensor(IB) @ t.dr  # M → B⊗M⊗B
    P = t.ml @ IB.tensor(t.mr) @ B.antipode.tensor(IM).tensor(B.antipode) @ lr
    P0 = corestrict(P, inc)
    beta = None
    r.add("P(M) in M0", P0 is not None)
    if P0 is not None:
        lift = IB.tensor(P0).tensor(IB) @ lr  # M → B⊗M0⊗B
        back = permutation_map(lift.codomain, [Bs.dim, M0.dim, Bs.dim], [0, 2, 1],
                               Bs @ Bs @ M0)
        beta = back @ lift
        r.add("alpha beta = id", alpha @ beta == IM)
        r.add("beta alpha = id", beta @ alpha == ident(alpha.domain))
    return TetraDecomposition(M0, inc, alpha, beta, r)


# ---------------------------------------------------------------------------
# file format

def to_json(t: Tetramodule) -> dict:
    from .hopf import to_json as hopf_json
    return {"kind": "tetramodule", "name": t.name, "base": hopf_json(t.base),
            "labels": list(t.space.labels),
            "ml": t.ml.to_json(), "mr": t.mr.to_json(), "dl": t.dl.to_json(), "dr": t.dr.to_json()}


def from_json(data) -> Tetramodule:
    from .hopf import from_json as hopf_from_json
    if data.get("kind") != "tetramodule":
        raise TetraError("expected kind 'tetramodule', got %r" % data.get("kind"))
    try:
        base = hopf_from_json(data["base"])
        maps = [LinearMap.from_json(data[k]) for k in ("ml", "mr", "dl", "dr")]
        return Tetramodule(base, Space(data["labels"]), *maps, name=data.get("name", ""))
    except HopfError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, TetraError):
            raise
        raise TetraError("malformed tetramodule: %s" % e) from None
