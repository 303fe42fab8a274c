"""
Finite cochain complexes over ℚ.

Differentials raise degree by one.  A complex is given by its nonzero
components and differentials; anything outside the support is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .linalg import (
    LinearMap, ShapeError, Space, ZERO, kernel_basis, rank, rank_of_vectors,
)


class ComplexError(ValueError):
    pass


class CochainComplex:
    """Components ``{degree: Space}`` and differentials ``{degree: d^n}``."""

    def __init__(self, components: Mapping[int, Space],
                 differentials: Optional[Mapping[int, LinearMap]] = None, check: bool = True):
        self.components = {int(n): s for n, s in components.items() if s.dim}
        diffs = {}
        for n, d in (differentials or {}).items():
            n = int(n)
            if d.is_zero():
                continue
            if d.domain.dim != self.space(n).dim or d.codomain.dim != self.space(n + 1).dim:
                raise ShapeError("differential in degree %d has wrong shape" % n)
            diffs[n] = d
        self.differentials = diffs
        if check:
            bad = self.square_defects()
            if bad:
                raise ComplexError("d∘d ≠ 0 in degrees %s" % bad)

    def space(self, n: int) -> Space:
        return self.components.get(n, ZERO)

    def dim(self, n: int) -> int:
        return self.space(n).dim

    def d(self, n: int) -> LinearMap:
        d = self.differentials.get(n)
        if d is None:
            return LinearMap(self.space(n), self.space(n + 1))
        return d

    @property
    def support(self) -> list:
        return sorted(self.components)

    def window(self) -> tuple:
        s = self.support
        return (s[0], s[-1]) if s else (0, -1)

    def square_defects(self) -> list:
        return [n for n in self.differentials
                if n + 1 in self.differentials
                and not (self.differentials[n + 1] @ self.differentials[n]).is_zero()]

    def total_dim(self) -> int:
        return sum(s.dim for s in self.components.values())

    def __repr__(self):
        dims = ", ".join("%d:%d" % (n, self.dim(n)) for n in self.support)
        return "CochainComplex({%s})" % dims

    def dims(self) -> dict:
        return {n: self.dim(n) for n in self.support}

    def to_json(self) -> dict:
        return {
            "components": {str(n): list(s.labels) for n, s in sorted(self.components.items())},
            "differentials": {str(n): d.to_json() for n, d in sorted(self.differentials.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CochainComplex":
        comps = {int(n): Space(labels) for n, labels in data["components"].items()}
        diffs = {}
        for n, m in data.get("differentials", {}).items():
            n = int(n)
            diffs[n] = LinearMap.from_entries(comps.get(n, ZERO), comps.get(n + 1, ZERO),
                                              m["entries"])
        return cls(comps, diffs)


def unit_complex() -> CochainComplex:
    """k concentrated in degree 0."""
    return CochainComplex({0: Space(["1"])})


def zero_complex() -> CochainComplex:
    return CochainComplex({})


def cohomology_dims(c: CochainComplex, degrees: Optional[Iterable[int]] = None) -> dict:
    """dim H^n = dim ker d^n − rank d^{n−1} for each requested degree."""
    if degrees is None:
        degrees = c.support
    out = {}
    for n in degrees:
        out[n] = c.dim(n) - rank(c.d(n)) - rank(c.d(n - 1))
    return out


def is_acyclic(c: CochainComplex, degrees: Optional[Iterable[int]] = None) -> bool:
    return not any(cohomology_dims(c, degrees).values())


@dataclass
class ComplexMap:
    """A degree-preserving chain map given by its layers ``{degree: LinearMap}``."""

    source: CochainComplex
    target: CochainComplex
    layers: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        self.layers = {int(n): f for n, f in self.layers.items() if not f.is_zero()}
        for n, f in self.layers.items():
            if f.domain.dim != self.source.dim(n) or f.codomain.dim != self.target.dim(n):
                raise ShapeError("layer %d has wrong shape" % n)
        if self.check:
            bad = self.commutation_defects()
            if bad:
                raise ComplexError("not a chain map in degrees %s" % bad)

    def layer(self, n: int) -> LinearMap:
        f = self.layers.get(n)
        if f is None:
            return LinearMap(self.source.space(n), self.target.space(n))
        return f

    def commutation_defects(self) -> list:
        degs = set(self.source.support) | set(self.target.support)
        bad = []
        for n in sorted(degs):
            lhs = self.target.d(n) @ self.layer(n)
            rhs = self.layer(n + 1) @ self.source.d(n)
            if lhs != rhs:
                bad.append(n)
        return bad

    def __matmul__(self, other: "ComplexMap") -> "ComplexMap":
        degs = set(other.source.support)
        return ComplexMap(other.source, self.target,
                          {n: self.layer(n) @ other.layer(n) for n in degs}, check=False)

    def __sub__(self, other: "ComplexMap") -> "ComplexMap":
        degs = set(self.source.support)
        return ComplexMap(self.source, self.target,
                          {n: self.layer(n) - other.layer(n) for n in degs}, check=False)

    def equals(self, other: "ComplexMap") -> bool:
        degs = set(self.source.support) | set(other.source.support)
        return all(self.layer(n) == other.layer(n) for n in degs)

    @classmethod
    def identity(cls, c: CochainComplex) -> "ComplexMap":
        return cls(c, c, {n: LinearMap.identity(s) for n, s in c.components.items()},
                   check=False)

    @classmethod
    def zero(cls, a: CochainComplex, b: CochainComplex) -> "ComplexMap":
        return cls(a, b, {})


def induced_rank(f: ComplexMap, n: int) -> int:
    """Rank of H^n(f): H^n(source) → H^n(target)."""
    cycles = kernel_basis(f.source.d(n))
    images = [f.layer(n).apply(z) for z in cycles]
    bounds = list(f.target.d(n - 1).cols.values())
    return rank_of_vectors(images + bounds) - rank_of_vectors(bounds)


def is_quasi_iso(f: ComplexMap, degrees: Optional[Iterable[int]] = None):
    """Return ``(verdict, report)``; report maps degree -> (h_src, h_tgt, rank H(f))."""
    if degrees is None:
        degrees = sorted(set(f.source.support) | set(f.target.support))
    report = {}
    ok = True
    for n in degrees:
        hs = cohomology_dims(f.source, [n])[n]
        ht = cohomology_dims(f.target, [n])[n]
        r = induced_rank(f, n) if hs and ht else 0
        report[n] = (hs, ht, r)
        if not (hs == ht == r):
            ok = False
    return ok, report


def cone(f: ComplexMap) -> CochainComplex:
    """Cone^n = A^{n+1} ⊕ B^n with d(a, b) = (−d a, f a + d b)."""
    A, B = f.source, f.target
    degs = set(n - 1 for n in A.support) | set(B.support)
    comps, blocks = {}, {}
    for n in degs:
        a, b = A.space(n + 1), B.space(n)
        comps[n] = Space(["a:%s" % l for l in a.labels] + ["b:%s" % l for l in b.labels])
        blocks[n] = a.dim
    diffs = {}
    for n in degs:
        if n + 1 not in comps:
            continue
        off_src, off_tgt = blocks[n], blocks[n + 1]
        cols = {}
        dA = A.d(n + 1)
        fl = f.layer(n + 1)
        for j, col in dA.cols.items():
            cols[j] = {i: -x for i, x in col.items()}
        for j, col in fl.cols.items():
            c = cols.setdefault(j, {})
            for i, x in col.items():
                c[off_tgt + i] = c.get(off_tgt + i, 0) + x
        for j, col in B.d(n).cols.items():
            cols[off_src + j] = {off_tgt + i: x for i, x in col.items()}
        diffs[n] = LinearMap(comps[n], comps[n + 1], cols)
    return CochainComplex(comps, diffs)


# ---------------------------------------------------------------------------
# tensor products

def _tensor_layout(a: CochainComplex, b: CochainComplex) -> dict:
    """``{n: [(p, q, offset), ...]}`` for the blocks A^p ⊗ B^q of degree n."""
    layout = {}
    for p in a.support:
        for q in b.support:
            layout.setdefault(p + q, []).append((p, q))
    out = {}
    for n, pq in layout.items():
        off, blocks = 0, []
        for p, q in sorted(pq):
            blocks.append((p, q, off))
            off += a.dim(p) * b.dim(q)
        out[n] = blocks
    return out


def _tensor_space(a, b, blocks):
    labels = []
    for p, q, _ in blocks:
        labels.extend("%s⊗%s" % (x, y) for x in a.space(p).labels for y in b.space(q).labels)
    try:
        return Space(labels)
    except ValueError:
        labels = []
        for p, q, _ in blocks:
            labels.extend("%s⊗%s@%d,%d" % (x, y, p, q)
                          for x in a.space(p).labels for y in b.space(q).labels)
        return Space(labels)


def tensor_complexes(a: CochainComplex, b: CochainComplex) -> CochainComplex:
    """Graded tensor product with d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy."""
    layout = _tensor_layout(a, b)
    comps = {n: _tensor_space(a, b, blocks) for n, blocks in layout.items()}
    diffs = {}
    for n, blocks in layout.items():
        if n + 1 not in layout:
            continue
        tgt = {(p, q): off for p, q, off in layout[n + 1]}
        cols = {}
        for p, q, off in blocks:
            dq = b.dim(q)
            sign = -1 if p % 2 else 1
            # dx ⊗ y
            if (p + 1, q) in tgt:
                toff = tgt[(p + 1, q)]
                for jx, col in a.d(p).cols.items():
                    for jy in range(dq):
                        c = cols.setdefault(off + jx * dq + jy, {})
                        for ix, v in col.items():
                            k = toff + ix * dq + jy
                            c[k] = c.get(k, 0) + v
            # ± x ⊗ dy
            if (p, q + 1) in tgt:
                toff = tgt[(p, q + 1)]
                dq1 = b.dim(q + 1)
                for jy, col in b.d(q).cols.items():
                    for jx in range(a.dim(p)):
                        c = cols.setdefault(off + jx * dq + jy, {})
                        for iy, v in col.items():
                            k = toff + jx * dq1 + iy
                            c[k] = c.get(k, 0) + sign * v
        diffs[n] = LinearMap(comps[n], comps[n + 1], cols)
    return CochainComplex(comps, diffs)


def tensor_maps(f: ComplexMap, g: ComplexMap,
                source: CochainComplex = None, target: CochainComplex = None) -> ComplexMap:
    """f ⊗ g between the tensor complexes (degree-0 maps, so no signs)."""
    source = source or tensor_complexes(f.source, g.source)
    target = target or tensor_complexes(f.target, g.target)
    ls = _tensor_layout(f.source, g.source)
    lt = _tensor_layout(f.target, g.target)
    layers = {}
    for n, blocks in ls.items():
        toffs = {(p, q): off for p, q, off in lt.get(n, [])}
        cols = {}
        for p, q, off in blocks:
            if (p, q) not in toffs:
                continue
            toff = toffs[(p, q)]
            fp, gq = f.layer(p), g.layer(q)
            ns, nt = g.source.dim(q), g.target.dim(q)
            for j1, c1 in fp.cols.items():
                for j2, c2 in gq.cols.items():
                    col = {}
                    for i1, x in c1.items():
                        for i2, y in c2.items():
                            col[toff + i1 * nt + i2] = x * y
                    cols[off + j1 * ns + j2] = col
        layers[n] = LinearMap(source.space(n), target.space(n), cols)
    return ComplexMap(source, target, layers)


def kunneth_dims(a: CochainComplex, b: CochainComplex) -> dict:
    ha, hb = cohomology_dims(a), cohomology_dims(b)
    out = {}
    for p, x in ha.items():
        for q, y in hb.items():
            out[p + q] = out.get(p + q, 0) + x * y
    return out


# ---------------------------------------------------------------------------
# exterior-algebra complexes

def _wedge_label(S, names) -> str:
    if not S:
        return "1"
    return "∧".join(names[i] for i in S)


def lambda_basis(n: int) -> dict:
    """``{degree: [subsets]}`` with subsets of {0..n-1} of size ℓ in degree −ℓ."""
    return {-l: list(combinations(range(n), l)) for l in range(n + 1)}


def lambda_complex(n: int, names=None) -> CochainComplex:
    """Λ^ℓ V in degree −ℓ, d(e_{i1}∧…∧e_{iℓ}) = Σ_s (−1)^{s−1} (omit e_{is})."""
    if n < 1:
        raise ValueError("lambda_complex needs n ≥ 1")
    names = names or ["e%d" % (i + 1) for i in range(n)]
    basis = lambda_basis(n)
    comps = {deg: Space(_wedge_label(S, names) for S in subs) for deg, subs in basis.items()}
    index = {deg: {S: k for k, S in enumerate(subs)} for deg, subs in basis.items()}
    diffs = {}
    for l in range(1, n + 1):
        cols = {}
        for j, S in enumerate(basis[-l]):
            col = {}
            for s in range(l):
                T = S[:s] + S[s + 1:]
                col[index[-l + 1][T]] = Fraction((-1) ** s)
            cols[j] = col
        diffs[-l] = LinearMap(comps[-l], comps[-l + 1], cols)
    return CochainComplex(comps, diffs)


def lambda_homotopy(n: int, vector=None) -> dict:
    """h(ω) = v∧ω for v = Σ c_i e_i (default all c_i = 1); layers Λ^ℓ → Λ^{ℓ+1}."""
    c = lambda_complex(n)
    vector = vector or [1] * n
    basis = lambda_basis(n)
    index = {deg: {S: k for k, S in enumerate(subs)} for deg, subs in basis.items()}
    out = {}
    for l in range(n):
        cols = {}
        for j, S in enumerate(basis[-l]):
            col = {}
            for i, ci in enumerate(vector):
                if not ci or i in S:
                    continue
                pos = sum(1 for t in S if t < i)
                T = tuple(sorted(S + (i,)))
                col[index[-l - 1][T]] = Fraction(ci) * (-1) ** pos
            cols[j] = col
        out[-l] = LinearMap(c.space(-l), c.space(-l - 1), cols)
    return out


@dataclass
class LambdaMaps:
    beta: ComplexMap
    psi_sum: ComplexMap
    psi_v: ComplexMap
    psi_w: ComplexMap
    sigma: ComplexMap
    commutes: bool
    report: dict


def psi_map(n: int, names=None) -> ComplexMap:
    """Λ(V) → Λ(U₁): 1 ↦ 1, e_i ↦ e, higher wedges ↦ 0."""
    src = lambda_complex(n, names)
    tgt = lambda_complex(1, ["e"])
    layers = {0: LinearMap(src.space(0), tgt.space(0), {0: {0: 1}}),
              -1: LinearMap(src.space(-1), tgt.space(-1), {j: {0: 1} for j in range(n)})}
    return ComplexMap(src, tgt, layers)


def beta_map(n: int, m: int) -> ComplexMap:
    """Λ(V⊕W) → Λ(V)⊗Λ(W), e_S ↦ ε(S)·e_{S∩V} ⊗ e_{S∩W}.

    With V-indices listed before W-indices every S is already unshuffled,
    so ε(S) = +1; the chain-map check at construction pins this.
    """
    vn = ["e%d" % (i + 1) for i in range(n)]
    wn = ["f%d" % (i + 1) for i in range(m)]
    src = lambda_complex(n + m, vn + wn)
    LV, LW = lambda_complex(n, vn), lambda_complex(m, wn)
    tgt = tensor_complexes(LV, LW)
    layout = _tensor_layout(LV, LW)
    bv, bw = lambda_basis(n), lambda_basis(m)
    iv = {d: {S: k for k, S in enumerate(s)} for d, s in bv.items()}
    iw = {d: {S: k for k, S in enumerate(s)} for d, s in bw.items()}
    layers = {}
    for deg, subs in lambda_basis(n + m).items():
        offs = {(p, q): off for p, q, off in layout[deg]}
        cols = {}
        for j, S in enumerate(subs):
            A = tuple(i for i in S if i < n)
            B = tuple(i - n for i in S if i >= n)
            p, q = -len(A), -len(B)
            k = offs[(p, q)] + iv[p][A] * LW.dim(q) + iw[q][B]
            cols[j] = {k: Fraction(1)}
        layers[deg] = LinearMap(src.space(deg), tgt.space(deg), cols)
    return ComplexMap(src, tgt, layers)


def sigma_map() -> ComplexMap:
    """Λ(U₁)⊗Λ(U₁′) → Λ(U₁″): 1⊗1 ↦ 1, e⊗1, 1⊗e′ ↦ e″, e⊗e′ ↦ 0."""
    a, b = lambda_complex(1, ["e"]), lambda_complex(1, ["e'"])
    src = tensor_complexes(a, b)
    tgt = lambda_complex(1, ["e''"])
    layers = {0: LinearMap(src.space(0), tgt.space(0), {0: {0: 1}}),
              -1: LinearMap(src.space(-1), tgt.space(-1), {0: {0: 1}, 1: {0: 1}})}
    return ComplexMap(src, tgt, layers)


def lambda_maps(n: int, m: int) -> LambdaMaps:
    """β_{V,W}, Ψ's and σ with the check σ∘(Ψ_V⊗Ψ_W)∘β = Ψ_{V⊕W}."""
    beta = beta_map(n, m)
    pv = psi_map(n, ["e%d" % (i + 1) for i in range(n)])
    pw = psi_map(m, ["f%d" % (i + 1) for i in range(m)])
    psum = psi_map(n + m, ["e%d" % (i + 1) for i in range(n)] +
                   ["f%d" % (i + 1) for i in range(m)])
    sigma = sigma_map()
    pvw = tensor_maps(pv, pw, source=beta.target, target=sigma.source)
    composite = sigma @ pvw @ beta
    commutes = composite.equals(psum)
    report = {
        "beta_chain_map": not beta.commutation_defects(),
        "psi_chain_map": not psum.commutation_defects(),
        "sigma_chain_map": not sigma.commutation_defects(),
        "beta_quasi_iso": is_quasi_iso(beta)[0],
        "diagram_commutes": commutes,
    }
    return LambdaMaps(beta, psum, pv, pw, sigma, commutes, report)
