"""
Finite-dimensional bialgebras and Hopf algebras given by structure constants.

All axioms are checked as equalities of matrices: ``B⊗B`` is ordered with the
left factor major, and ``K⊗B`` is identified with ``B`` (see
:meth:`Space.tensor`), so e.g. the left unit law is literally
``m ∘ (u⊗id) == id``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Optional

from .linalg import (
    K, LinearMap, Space, format_scalar, is_iso, parse_scalar, permutation_map,
)
from .report import Report


class HopfError(ValueError):
    pass


def ident(s: Space) -> LinearMap:
    return LinearMap.identity(s)


def swap(a: Space, b: Space) -> LinearMap:
    """τ: A⊗B → B⊗A."""
    return permutation_map(a @ b, [a.dim, b.dim], [1, 0], b @ a)


def middle_swap(a: Space, b: Space, c: Space, d: Space) -> LinearMap:
    """A⊗B⊗C⊗D → A⊗C⊗B⊗D."""
    return permutation_map(a @ b @ c @ d, [a.dim, b.dim, c.dim, d.dim], [0, 2, 1, 3],
                           a @ c @ b @ d)


def tensor_all(*maps: LinearMap) -> LinearMap:
    out = maps[0]
    for f in maps[1:]:
        out = out.tensor(f)
    return out


class Bialgebra:
    """Structure maps m: B⊗B→B, unit: K→B, delta: B→B⊗B, counit: B→K."""

    def __init__(self, space: Space, m: LinearMap, unit: LinearMap, delta: LinearMap,
                 counit: LinearMap, name: str = ""):
        BB = space @ space
        for f, dom, cod, what in ((m, BB, space, "m"), (unit, K, space, "unit"),
                                  (delta, space, BB, "delta"), (counit, space, K, "counit")):
            if f.domain.dim != dom.dim or f.codomain.dim != cod.dim:
                raise HopfError("%s has shape %s, expected (%d, %d)"
                                % (what, f.shape, cod.dim, dom.dim))
        self.space = space
        self.m = m.relabel(BB, space)
        self.unit = unit.relabel(K, space)
        self.delta = delta.relabel(space, BB)
        self.counit = counit.relabel(space, K)
        self.name = name

    @property
    def dim(self):
        return self.space.dim

    @property
    def one(self) -> dict:
        return self.unit.column(0)

    def mul(self, a: Mapping, b: Mapping) -> dict:
        """Product of two vectors."""
        n = self.dim
        v = {}
        for i, x in a.items():
            for j, y in b.items():
                v[i * n + j] = v.get(i * n + j, 0) + x * y
        return self.m.apply(v)

    def __repr__(self):
        return "%s(%s, dim=%d)" % (type(self).__name__, self.name or "?", self.dim)

    def same_data(self, other: "Bialgebra") -> bool:
        return (self.space == other.space and self.m.same_as(other.m)
                and self.unit.same_as(other.unit) and self.delta.same_as(other.delta)
                and self.counit.same_as(other.counit))

    def iterated_product(self, n: int) -> LinearMap:
        """B^{⊗n} → B; n = 0 gives the unit."""
        if n == 0:
            return self.unit
        out = ident(self.space)
        for _ in range(2, n + 1):
            out = self.m @ out.tensor(ident(self.space))
        return out

    def iterated_coproduct(self, n: int) -> LinearMap:
        """B → B^{⊗n}; n = 0 gives the counit."""
        if n == 0:
            return self.counit
        out = ident(self.space)
        for k in range(2, n + 1):
            out = ident(self.space.power(k - 2)).tensor(self.delta) @ out
        return out


class HopfAlgebra(Bialgebra):
    def __init__(self, space, m, unit, delta, counit, antipode: LinearMap, name=""):
        super().__init__(space, m, unit, delta, counit, name)
        if antipode.shape != (space.dim, space.dim):
            raise HopfError("antipode must be square of size %d" % space.dim)
        self.antipode = antipode.relabel(space, space)

    @property
    def bialgebra(self) -> Bialgebra:
        return Bialgebra(self.space, self.m, self.unit, self.delta, self.counit, self.name)

    def same_data(self, other) -> bool:
        return (super().same_data(other) and isinstance(other, HopfAlgebra)
                and self.antipode.same_as(other.antipode))


def with_antipode(b: Bialgebra, s: LinearMap, name: str = None) -> HopfAlgebra:
    return HopfAlgebra(b.space, b.m, b.unit, b.delta, b.counit, s,
                       b.name if name is None else name)


# ---------------------------------------------------------------------------
# validation

def validate_bialgebra(b: Bialgebra) -> Report:
    B = b.space
    I = ident(B)
    m, u, D, e = b.m, b.unit, b.delta, b.counit
    r = Report("bialgebra %s" % (b.name or "?"))
    r.add("associativity", m @ m.tensor(I) == m @ I.tensor(m))
    r.add("left unit", m @ u.tensor(I) == I)
    r.add("right unit", m @ I.tensor(u) == I)
    r.add("coassociativity", D.tensor(I) @ D == I.tensor(D) @ D)
    r.add("left counit", e.tensor(I) @ D == I)
    r.add("right counit", I.tensor(e) @ D == I)
    r.add("delta multiplicative", D @ m == m.tensor(m) @ middle_swap(B, B, B, B) @ D.tensor(D))
    r.add("counit multiplicative", e @ m == e.tensor(e))
    r.add("unit comultiplicative", D @ u == u.tensor(u))
    r.add("counit of unit", e @ u == ident(K))
    return r


def validate_hopf(h: HopfAlgebra) -> Report:
    r = validate_bialgebra(h)
    r.subject = "hopf %s" % (h.name or "?")
    B = h.space
    I, S = ident(B), h.antipode
    m, u, D, e = h.m, h.unit, h.delta, h.counit
    ue = u @ e
    r.add("antipode invertible", is_iso(S))
    r.add("antipode left", m @ I.tensor(S) @ D == ue)
    r.add("antipode right", m @ S.tensor(I) @ D == ue)
    t = swap(B, B)
    r.add("antipode anti-multiplicative", S @ m == m @ S.tensor(S) @ t)
    r.add("antipode anti-comultiplicative", D @ S == S.tensor(S) @ t @ D)
    r.add("counit of antipode", e @ S == e)
    r.add("antipode of unit", S @ u == u)
    return r


# ---------------------------------------------------------------------------
# constructions

def opposite(b: Bialgebra):
    """m(a⊗b) := m(b⊗a) and Δ := τΔ; the antipode is carried over unchanged."""
    t = swap(b.space, b.space)
    name = b.name[:-3] if b.name.endswith("^op") else (b.name + "^op" if b.name else "")
    m, D = b.m @ t, t @ b.delta
    if isinstance(b, HopfAlgebra):
        return HopfAlgebra(b.space, m, b.unit, D, b.counit, b.antipode, name)
    return Bialgebra(b.space, m, b.unit, D, b.counit, name)


def tensor_hopf(c: Bialgebra, d: Bialgebra):
    """Componentwise structure on C⊗D; the antipode is S_C⊗S_D."""
    C, Dsp = c.space, d.space
    mid = middle_swap(C, Dsp, C, Dsp)
    m = c.m.tensor(d.m) @ mid
    delta = middle_swap(C, C, Dsp, Dsp) @ c.delta.tensor(d.delta)
    unit = c.unit.tensor(d.unit)
    counit = c.counit.tensor(d.counit)
    name = "%s⊗%s" % (c.name or "?", d.name or "?")
    space = C @ Dsp
    if isinstance(c, HopfAlgebra) and isinstance(d, HopfAlgebra):
        return HopfAlgebra(space, m, unit, delta, counit, c.antipode.tensor(d.antipode), name)
    return Bialgebra(space, m, unit, delta, counit, name)


def from_tables(labels, mult: Mapping, comult: Mapping, counit: Mapping,
                antipode: Optional[Mapping] = None, unit_label: str = "1", name: str = ""):
    """Build from dictionaries keyed by basis labels.

    ``mult[(a, b)] = {c: x}`` means a*b = Σ x c; missing pairs are zero.
    ``comult[a] = {(b, c): x}``; ``counit[a] = x``; ``antipode[a] = {b: x}``.
    """
    B = Space(labels)
    BB = B @ B
    n = B.dim
    mcols, dcols = {}, {}
    for (a, b), out in mult.items():
        mcols[B.index(a) * n + B.index(b)] = {B.index(c): Fraction(x) for c, x in out.items()}
    for a, out in comult.items():
        dcols[B.index(a)] = {B.index(p) * n + B.index(q): Fraction(x) for (p, q), x in out.items()}
    m = LinearMap(BB, B, mcols)
    delta = LinearMap(B, BB, dcols)
    u = LinearMap(K, B, {0: {B.index(unit_label): Fraction(1)}})
    e = LinearMap(B, K, {B.index(a): {0: Fraction(x)} for a, x in counit.items()})
    if antipode is None:
        return Bialgebra(B, m, u, delta, e, name)
    s = LinearMap(B, B, {B.index(a): {B.index(c): Fraction(x) for c, x in out.items()}
                         for a, out in antipode.items()})
    return HopfAlgebra(B, m, u, delta, e, s, name)


def trivial() -> HopfAlgebra:
    return from_tables(["1"], {("1", "1"): {"1": 1}}, {"1": {("1", "1"): 1}}, {"1": 1},
                       {"1": {"1": 1}}, name="trivial")


def _g(i: int) -> str:
    return "1" if i == 0 else ("g" if i == 1 else "g^%d" % i)


def group_algebra(n: int) -> HopfAlgebra:
    """ℚ[ℤ/n] with basis 1, g, g^2, …; g grouplike, S(g^i) = g^{-i}."""
    if n < 1:
        raise HopfError("group order must be positive")
    labels = [_g(i) for i in range(n)]
    mult = {(_g(i), _g(j)): {_g((i + j) % n): 1} for i in range(n) for j in range(n)}
    comult = {_g(i): {(_g(i), _g(i)): 1} for i in range(n)}
    return from_tables(labels, mult, comult, {l: 1 for l in labels},
                       {_g(i): {_g(-i % n): 1} for i in range(n)}, name="Z/%d" % n)


def sweedler() -> HopfAlgebra:
    """Sweedler's 4-dimensional algebra.

    Basis 1, g, x, gx with g² = 1, x² = 0, xg = −gx; g is grouplike,
    Δx = x⊗1 + g⊗x (so Δ(gx) = gx⊗g + 1⊗gx), ε(x) = 0, S(g) = g, S(x) = −gx.
    """
    # words in g, x reduced to ±{1, g, x, gx}
    def word(w):
        sign, gs, xs = 1, 0, 0
        for ch in w:
            if ch == "g":
                if xs % 2:
                    sign = -sign
                gs += 1
            else:
                xs += 1
        if xs > 1:
            return None
        lab = ("g" if gs % 2 else "") + ("x" if xs else "")
        return sign, lab or "1"

    labels = ["1", "g", "x", "gx"]
    mult = {}
    for a in labels:
        for b in labels:
            w = word(a.replace("1", "") + b.replace("1", ""))
            if w is not None:
                mult[(a, b)] = {w[1]: w[0]}
    comult = {"1": {("1", "1"): 1}, "g": {("g", "g"): 1},
              "x": {("x", "1"): 1, ("g", "x"): 1},
              "gx": {("gx", "g"): 1, ("1", "gx"): 1}}
    counit = {"1": 1, "g": 1}
    antipode = {"1": {"1": 1}, "g": {"g": 1}, "x": {"gx": -1}, "gx": {"x": 1}}
    return from_tables(labels, mult, comult, counit, antipode, name="sweedler")


def builtin(name: str) -> HopfAlgebra:
    """``trivial``, ``sweedler``, ``group_algebra(n)`` (also ``Z/n`` or ``group:n``)."""
    s = name.strip()
    if s == "trivial":
        return trivial()
    if s == "sweedler":
        return sweedler()
    for pre, post in (("group_algebra(", ")"), ("Z/", ""), ("group:", "")):
        if s.startswith(pre) and s.endswith(post):
            body = s[len(pre):len(s) - len(post)]
            if body.isdigit() and int(body) >= 1:
                return group_algebra(int(body))
    raise HopfError("unknown builtin Hopf algebra %r" % name)


BUILTINS = ("trivial", "group_algebra(2)", "group_algebra(3)", "sweedler")


def antipode_order(h: HopfAlgebra, limit: int = 64) -> Optional[int]:
    S = h.antipode
    P = S
    for k in range(1, limit + 1):
        if P == ident(h.space):
            return k
        P = S @ P
    return None


# ---------------------------------------------------------------------------
# file format

def to_json(b: Bialgebra) -> dict:
    B = b.space
    L = B.labels
    n = B.dim
    out = {"kind": "hopf" if isinstance(b, HopfAlgebra) else "bialgebra",
           "name": b.name, "dim": n, "labels": list(L)}
    out["m"] = [[L[j // n], L[j % n], L[i], format_scalar(x)]
                for j, i, x in _sorted_entries(b.m)]
    out["delta"] = [[L[j], L[i // n], L[i % n], format_scalar(x)]
                    for j, i, x in _sorted_entries(b.delta)]
    out["unit"] = {L[i]: format_scalar(x) for i, x in sorted(b.one.items())}
    out["counit"] = {L[j]: format_scalar(c[0]) for j, c in sorted(b.counit.cols.items())}
    if isinstance(b, HopfAlgebra):
        out["antipode"] = b.antipode.to_json()
    return out


def _sorted_entries(f: LinearMap):
    for j in sorted(f.cols):
        for i in sorted(f.cols[j]):
            yield j, i, f.cols[j][i]


def from_json(data: Mapping):
    try:
        labels = data["labels"]
        B = Space(labels)
        if "dim" in data and int(data["dim"]) != B.dim:
            raise HopfError("dim does not match labels")
        n = B.dim
        BB = B @ B
        mcols = {}
        for a, b2, c, x in data["m"]:
            col = mcols.setdefault(B.index(a) * n + B.index(b2), {})
            col[B.index(c)] = col.get(B.index(c), 0) + parse_scalar(x)
        dcols = {}
        for a, p, q, x in data["delta"]:
            col = dcols.setdefault(B.index(a), {})
            k = B.index(p) * n + B.index(q)
            col[k] = col.get(k, 0) + parse_scalar(x)
        m = LinearMap(BB, B, mcols)
        delta = LinearMap(B, BB, dcols)
        u = LinearMap(K, B, {0: {B.index(k): parse_scalar(x) for k, x in data["unit"].items()}})
        e = LinearMap(B, K, {B.index(k): {0: parse_scalar(x)}
                             for k, x in data["counit"].items()})
        name = data.get("name", "")
        if data.get("antipode") is not None:
            s = LinearMap.from_json(data["antipode"]).relabel(B, B)
            return HopfAlgebra(B, m, u, delta, e, s, name)
        return Bialgebra(B, m, u, delta, e, name)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, HopfError):
            raise
        raise HopfError("malformed Hopf algebra data: %s" % exc) from exc


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))
