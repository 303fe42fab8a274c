"""
Finite dg categories, Drinfeld quotients and the colax maps between them.

Morphisms are handled as sparse vectors keyed by basis *keys*: plain
labels in a finite category, words in a quotient, :class:`Tensor` tuples
in a tensor product.  Words are stored in composition order, so
``(a1, ε, a0)`` means ``a1 ∘ ε ∘ a0``.  Every Hom complex lives in
degrees ≤ 0; quotients are built on a window ``(lo, 0)`` and carry the
components ``lo-1 .. 0`` so that cohomology in ``lo .. 0`` is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Optional

from .cochain import CochainComplex, ComplexMap, _tensor_layout, cohomology_dims, is_quasi_iso
from .linalg import LinearMap, Space, format_scalar, kernel_basis, parse_scalar, solve
from .report import Report


class DgError(ValueError):
    pass


def _acc(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class Tensor(tuple):
    """A flat tuple of objects or basis keys, one per tensor factor."""

    def __repr__(self):
        return "(" + "⊗".join(render(k) for k in self) + ")"


@dataclass(frozen=True)
class Eps:
    """The generator ε^I_Y of degree −|I|."""
    index: tuple
    obj: object

    def __repr__(self):
        return "ε%s[%s]" % ("".join(map(str, self.index)), render(self.obj))


def render(key) -> str:
    if isinstance(key, (Tensor, Eps)):
        return repr(key)
    if isinstance(key, tuple):
        return "·".join(render(k) for k in key)
    return str(key)


def flat(x) -> tuple:
    return tuple(x) if isinstance(x, Tensor) else (x,)


def join(parts) -> object:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Tensor(parts)


# ---------------------------------------------------------------------------
# Hom complexes

class HomComplex:
    """A Hom complex together with its basis keys.

    ``keys`` maps degree → list of keys; ``dfun(key)`` returns d(key) as a
    key vector.
    """

    def __init__(self, keys: dict, dfun: Callable, check: bool = False):
        self.keys = {n: list(ks) for n, ks in keys.items() if ks}
        self.where = {}
        for n, ks in self.keys.items():
            for i, k in enumerate(ks):
                self.where[k] = (n, i)
        spaces = {n: Space(render(k) for k in ks) for n, ks in self.keys.items()}
        diffs = {}
        self.missing = []
        for n, ks in self.keys.items():
            cols = {}
            for j, k in enumerate(ks):
                for t, c in dfun(k).items():
                    pos = self.where.get(t)
                    if pos is None or pos[0] != n + 1:
                        self.missing.append((k, t))
                        continue
                    cols.setdefault(j, {})[pos[1]] = Fraction(c)
            if cols:
                if n + 1 not in spaces:
                    continue
                diffs[n] = LinearMap(spaces[n], spaces[n + 1], cols)
        self.complex = CochainComplex(spaces, diffs, check=check)

    def basis(self):
        for n in sorted(self.keys):
            for k in self.keys[n]:
                yield k, n

    def __contains__(self, key):
        return key in self.where

    def degree(self, key) -> int:
        return self.where[key][0]

    @property
    def dims(self) -> dict:
        return {n: len(ks) for n, ks in sorted(self.keys.items())}

    def column(self, vec: dict, degree: int) -> dict:
        out = {}
        for k, c in vec.items():
            n, i = self.where[k]
            if n != degree:
                raise DgError("%s has degree %d, not %d" % (render(k), n, degree))
            out[i] = Fraction(c)
        return out

    def element(self, degree: int, col: dict) -> dict:
        ks = self.keys.get(degree, [])
        return {ks[i]: c for i, c in col.items() if c}

    def d(self, vec: dict) -> dict:
        out = {}
        for k, c in vec.items():
            n, i = self.where[k]
            col = self.complex.d(n).column(i)
            for t, x in col.items():
                _acc(out, self.keys[n + 1][t], c * x)
        return out


def truncate(c: CochainComplex, low: int) -> CochainComplex:
    comps = {n: s for n, s in c.components.items() if n >= low}
    diffs = {n: d for n, d in c.differentials.items() if n >= low}
    return CochainComplex(comps, diffs, check=False)


# ---------------------------------------------------------------------------
# categories

class DgCategory:
    """Common interface: objects, ``hom``, ``compose_basis``, ``unit``, ``degree``.

    ``window`` is None for categories whose Hom complexes are complete,
    else ``(lo, 0)``.
    """

    objects: list
    window: Optional[tuple] = None
    name: str = ""

    def __init__(self):
        self._homs = {}

    def hom(self, x, y) -> HomComplex:
        h = self._homs.get((x, y))
        if h is None:
            h = self._homs[(x, y)] = self._build_hom(x, y)
        return h

    def compose(self, x, y, z, g: dict, f: dict) -> dict:
        out = {}
        for kg, cg in g.items():
            for kf, cf in f.items():
                for k, c in self.compose_basis(x, y, z, kg, kf).items():
                    _acc(out, k, cg * cf * c)
        return out

    def d(self, x, y, vec: dict) -> dict:
        out = {}
        for k, c in vec.items():
            for t, v in self.d_basis(x, y, k).items():
                _acc(out, t, c * v)
        return out

    @property
    def low(self):
        """Lowest degree carried by the Hom complexes, or None if complete."""
        return None if self.window is None else self.window[0] - 1

    def h0_dims(self) -> dict:
        return {(x, y): cohomology_dims(self.hom(x, y).complex, [0])[0]
                for x in self.objects for y in self.objects}

    def __repr__(self):
        return "%s(%s, objects=%s)" % (type(self).__name__, self.name,
                                       [render(o) for o in self.objects])


class FiniteDgCategory(DgCategory):
    """A dg category given by explicit tables.

    ``homs[(X, Y)] = (labels_with_degrees, differential)`` where the first
    is a dict label → degree and the second a dict label → {label: coef}.
    ``compose[(X, Y, Z)][(g, f)] = {h: coef}`` (missing entries are zero),
    ``units[X] = label``.
    """

    def __init__(self, objects, homs, compose, units, bound=None, name="C"):
        super().__init__()
        self.objects = list(objects)
        self.name = name
        self.tables = {}
        for x in self.objects:
            for y in self.objects:
                degs, diff = homs.get((x, y), ({}, {}))
                self.tables[(x, y)] = (dict(degs), {k: dict(v) for k, v in diff.items()})
        self.comp = {k: {gf: dict(v) for gf, v in t.items()} for k, t in compose.items()}
        self.units = dict(units)
        lows = [min(d.values()) for d, _ in self.tables.values() if d]
        self.bound = bound if bound is not None else max([-min(lows + [0]), 0])

    def _build_hom(self, x, y):
        degs, diff = self.tables[(x, y)]
        keys = {}
        for k, n in degs.items():
            keys.setdefault(n, []).append(k)
        return HomComplex(keys, lambda k: diff.get(k, {}))

    def d_basis(self, x, y, k):
        return self.tables[(x, y)][1].get(k, {})

    def degree(self, x, y, k) -> int:
        return self.tables[(x, y)][0][k]

    def compose_basis(self, x, y, z, g, f):
        return self.comp.get((x, y, z), {}).get((g, f), {})

    def unit(self, x):
        return self.units[x]

    def to_json(self) -> dict:
        homs = {}
        for (x, y), (degs, diff) in self.tables.items():
            if degs:
                homs["%s,%s" % (x, y)] = {
                    "degrees": degs,
                    "d": [[a, b, format_scalar(c)] for a, col in diff.items() for b, c in col.items()],
                }
        comp = [[x, y, z, g, f, h, format_scalar(c)]
                for (x, y, z), t in self.comp.items() for (g, f), v in t.items()
                for h, c in v.items()]
        return {"kind": "dgcat", "name": self.name, "objects": self.objects,
                "bound": self.bound, "homs": homs, "compose": comp, "units": self.units}

    @classmethod
    def from_json(cls, data) -> "FiniteDgCategory":
        try:
            if data.get("kind", "dgcat") != "dgcat":
                raise DgError("expected kind 'dgcat'")
            objects = list(data["objects"])
            homs = {}
            for pair, h in data.get("homs", {}).items():
                x, y = pair.split(",")
                diff = {}
                for a, b, c in h.get("d", []):
                    diff.setdefault(a, {})[b] = parse_scalar(c)
                homs[(x, y)] = ({k: int(n) for k, n in h["degrees"].items()}, diff)
            comp = {}
            for x, y, z, g, f, h, c in data.get("compose", []):
                comp.setdefault((x, y, z), {}).setdefault((g, f), {})[h] = parse_scalar(c)
            return cls(objects, homs, comp, data["units"], data.get("bound"),
                       data.get("name", "C"))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, DgError):
                raise
            raise DgError("malformed dg category: %s" % e) from None


def load(path) -> FiniteDgCategory:
    with open(path) as fh:
        return FiniteDgCategory.from_json(json.load(fh))


class TensorCategory(DgCategory):
    """C₁ ⊗ … ⊗ C_r with objects and keys flat :class:`Tensor` tuples."""

    def __init__(self, factors):
        super().__init__()
        self.factors = list(factors)
        self.objects = [Tensor(t) for t in product(*[f.objects for f in self.factors])]
        self.name = "⊗".join(f.name for f in self.factors)
        lows = [f.low for f in self.factors if f.low is not None]
        self.window = (max(lows) + 1, 0) if lows else None
        bounds = [getattr(f, "bound", None) for f in self.factors]
        self.bound = None if None in bounds else sum(bounds)

    def _build_hom(self, x, y):
        homs = [f.hom(a, b) for f, a, b in zip(self.factors, x, y)]
        cur = homs[0].complex
        keys = {n: [(k,) for k in ks] for n, ks in homs[0].keys.items()}
        for h in homs[1:]:
            layout = _tensor_layout(cur, h.complex)
            nk = {}
            for n, blocks in layout.items():
                nk[n] = [ka + (kb,) for p, q, _ in blocks
                         for ka in keys.get(p, []) for kb in h.keys.get(q, [])]
            keys = nk
            cur = _tensor_of(cur, h.complex, self.low)
        keys = {n: [Tensor(k) for k in ks] for n, ks in keys.items()
                if self.low is None or n >= self.low}
        return HomComplex(keys, lambda k: self.d_basis(x, y, k))

    def d_basis(self, x, y, k):
        out, sign = {}, 1
        for i, (f, a, b) in enumerate(zip(self.factors, x, y)):
            for t, c in f.d_basis(a, b, k[i]).items():
                _acc(out, Tensor(k[:i] + (t,) + k[i + 1:]), sign * c)
            if f.degree(a, b, k[i]) % 2:
                sign = -sign
        return out

    def degree(self, x, y, k) -> int:
        return sum(f.degree(a, b, t) for f, a, b, t in zip(self.factors, x, y, k))

    def compose_basis(self, x, y, z, g, f):
        # Koszul: moving f_i past g_j for i < j
        sign = 0
        parts = []
        for i, cat in enumerate(self.factors):
            df = cat.degree(x[i], y[i], f[i])
            sign += df * sum(cat2.degree(y[j], z[j], g[j])
                             for j, cat2 in enumerate(self.factors) if j > i)
            parts.append(cat.compose_basis(x[i], y[i], z[i], g[i], f[i]))
        out = {}
        s = -1 if sign % 2 else 1
        for combo in product(*[p.items() for p in parts]):
            c = s
            for _, v in combo:
                c *= v
            _acc(out, Tensor(k for k, _ in combo), c)
        return out

    def unit(self, x):
        return Tensor(f.unit(a) for f, a in zip(self.factors, x))


def _tensor_of(a, b, low):
    from .cochain import tensor_complexes
    c = tensor_complexes(a, b)
    return c if low is None else truncate(c, low)


def tensor_dgcat(c: DgCategory, d: DgCategory) -> TensorCategory:
    """c ⊗ d; nested products are flattened, so ⊗ is strictly associative."""
    fs = []
    for x in (c, d):
        fs.extend(x.factors if isinstance(x, TensorCategory) else [x])
    return TensorCategory(fs)


def arity(c: DgCategory) -> int:
    return len(c.factors) if isinstance(c, TensorCategory) else 1


def same_category(a: DgCategory, b: DgCategory) -> bool:
    """Literal equality of objects, Hom bases, differentials, composition and units."""
    if list(a.objects) != list(b.objects):
        return False
    for x in a.objects:
        if a.unit(x) != b.unit(x):
            return False
        for y in a.objects:
            ha, hb = a.hom(x, y), b.hom(x, y)
            if ha.keys != hb.keys:
                return False
            for k, _ in ha.basis():
                if a.d_basis(x, y, k) != b.d_basis(x, y, k):
                    return False
    for x, y, z in product(a.objects, repeat=3):
        for g, _ in a.hom(y, z).basis():
            for f, _ in a.hom(x, y).basis():
                if a.compose_basis(x, y, z, g, f) != b.compose_basis(x, y, z, g, f):
                    return False
    return True


# ---------------------------------------------------------------------------
# validation

def _pairs_in_window(cat, hg, hf):
    low = cat.low
    for g, dg in hg.basis():
        for f, df in hf.basis():
            if low is None or dg + df >= low:
                yield g, dg, f, df


def validate_dg_category(c: DgCategory, bound: Optional[int] = None) -> Report:
    """Associativity, units, Leibniz, d² = 0 and the degree bound."""
    r = Report("dg category %s" % c.name)
    obs = list(c.objects)
    bound = getattr(c, "bound", None) if bound is None else bound
    sq, deg_bad, missing = [], [], []
    for x in obs:
        for y in obs:
            h = c.hom(x, y)
            if h.complex.square_defects():
                sq.append("%s→%s" % (render(x), render(y)))
            if h.missing:
                missing.append("%s→%s" % (render(x), render(y)))
            for _, n in h.basis():
                if n > 0 or (bound is not None and n < -bound):
                    deg_bad.append("%s→%s deg %d" % (render(x), render(y), n))
                    break
    r.add("d² = 0", not sq, ", ".join(sq))
    r.add("differential closed in basis", not missing, ", ".join(missing))
    r.add("degree bound", not deg_bad, ", ".join(deg_bad), bound=bound)
    unit_bad, lu, ru = [], [], []
    for x in obs:
        u = c.unit(x)
        hx = c.hom(x, x)
        if u not in hx or hx.degree(u) != 0 or c.d_basis(x, x, u):
            unit_bad.append(render(x))
        for y in obs:
            for f, _ in c.hom(x, y).basis():
                if c.compose_basis(x, y, y, c.unit(y), f) != {f: 1}:
                    lu.append(render(f))
                if c.compose_basis(x, x, y, f, u) != {f: 1}:
                    ru.append(render(f))
    r.add("units closed of degree 0", not unit_bad, ", ".join(unit_bad))
    r.add("left unit", not lu, ", ".join(lu[:5]))
    r.add("right unit", not ru, ", ".join(ru[:5]))
    leib, assoc = [], []
    for x, y, z in product(obs, repeat=3):
        hxy, hyz = c.hom(x, y), c.hom(y, z)
        for g, dg, f, df in _pairs_in_window(c, hyz, hxy):
            lhs = c.d(x, z, c.compose_basis(x, y, z, g, f))
            rhs = c.compose(x, y, z, c.d_basis(y, z, g), {f: 1})
            for k, v in c.compose(x, y, z, {g: 1}, c.d_basis(x, y, f)).items():
                _acc(rhs, k, (-1) ** (dg % 2) * v)
            if lhs != rhs:
                leib.append("%s∘%s" % (render(g), render(f)))
    for x, y, z, w in product(obs, repeat=4):
        hxy, hyz, hzw = c.hom(x, y), c.hom(y, z), c.hom(z, w)
        low = c.low
        for h, dh in hzw.basis():
            for g, dg in hyz.basis():
                if low is not None and dh + dg < low:
                    continue
                hg = c.compose_basis(y, z, w, h, g)
                for f, df in hxy.basis():
                    if low is not None and dh + dg + df < low:
                        continue
                    a = c.compose(x, y, w, hg, {f: 1})
                    b = c.compose(x, z, w, {h: 1}, c.compose_basis(x, y, z, g, f))
                    if a != b:
                        assoc.append("%s∘%s∘%s" % (render(h), render(g), render(f)))
    r.add("Leibniz", not leib, ", ".join(leib[:5]))
    r.add("associativity", not assoc, ", ".join(assoc[:5]))
    return r


# ---------------------------------------------------------------------------
# example categories

def one_object(name="pt") -> FiniteDgCategory:
    """The terminal dg category: one object with Hom = k·id."""
    return FiniteDgCategory(["*"], {("*", "*"): ({"id": 0}, {})},
                            {("*", "*", "*"): {("id", "id"): {"id": 1}}}, {"*": "id"},
                            name=name)


def from_generators(objects, morphisms, compose_rules=None, differential=None, name="C"):
    """Build tables from identities plus extra basis morphisms.

    ``morphisms`` is a list of ``(label, src, tgt, degree)``; ``compose_rules``
    maps ``(g, f) → {h: coef}`` for composites of non-identity morphisms
    (absent means zero) and ``differential`` maps ``f → {h: coef}``.
    """
    rules = dict(compose_rules or {})
    homs = {(x, y): ({}, {}) for x in objects for y in objects}
    units = {}
    src = {}
    for x in objects:
        units[x] = "id_%s" % x
        homs[(x, x)][0][units[x]] = 0
        src[units[x]] = (x, x)
    for lab, a, b, n in morphisms:
        homs[(a, b)][0][lab] = n
        src[lab] = (a, b)
    for f, v in (differential or {}).items():
        homs[src[f]][1][f] = dict(v)
    comp = {}
    for g, (y, z) in src.items():
        for f, (x, y2) in src.items():
            if y2 != y:
                continue
            if g == units[y]:
                val = {f: 1}
            elif f == units[y]:
                val = {g: 1}
            else:
                val = rules.get((g, f), {})
            if val:
                comp.setdefault((x, y, z), {})[(g, f)] = val
    return FiniteDgCategory(objects, homs, comp, units, name=name)


def two_object_example() -> FiniteDgCategory:
    """Objects X, Y; Hom(X, Y) = k·f closed of degree 0; Hom(Y, X) = 0."""
    return from_generators(["X", "Y"], [("f", "X", "Y", 0)], name="C2")


#: H⁰ Hom dimensions of the Verdier quotient of the two-object example by Y,
#: computed by hand: Y becomes a zero object, X keeps End = k.
VERDIER_H0 = {("X", "X"): 1, ("X", "Y"): 0, ("Y", "X"): 0, ("Y", "Y"): 0}


# ---------------------------------------------------------------------------
# marked categories and quotients

@dataclass
class PCat:
    """An ambient dg category with an ordered list of marked object subsets."""
    ambient: DgCategory
    marked: list

    def __post_init__(self):
        self.marked = [frozenset(m) for m in self.marked]
        if not self.marked:
            raise DgError("a marked category needs at least one subset")
        obs = set(self.ambient.objects)
        for i, m in enumerate(self.marked):
            if not m <= obs:
                raise DgError("marked subset %d is not a set of objects" % (i + 1))


def tensor_pcat(x: PCat, y: PCat) -> PCat:
    """(C; C_i) ⊗ (D; D_j) = (C⊗D; C_i⊗D …, C⊗D_j …)."""
    amb = tensor_dgcat(x.ambient, y.ambient)
    ax = arity(x.ambient)
    marks = []
    for m in x.marked:
        marks.append({o for o in amb.objects if join(o[:ax]) in m})
    for m in y.marked:
        marks.append({o for o in amb.objects if join(o[ax:]) in m})
    return PCat(amb, marks)


def same_pcat(a: PCat, b: PCat) -> bool:
    return a.marked == b.marked and same_category(a.ambient, b.ambient)


def _check_window(window):
    lo, hi = window
    if not lo <= 0 <= hi:
        raise DgError("window %s does not contain degree 0" % (window,))
    return (int(lo), 0)


class QuotientCategory(DgCategory):
    """C/(C₁, …, C_k) on a degree window, in the interleaved-word basis.

    A basis morphism X → Y is a word ``a_n ε a_{n-1} … ε a_0`` of basis
    morphisms of C separated by generators ε^I_Z, I a nonempty increasing
    multi-index with Z in every C_i, i ∈ I.  The ε's are never composed
    with each other directly: ε∘ε is the word ε·id·ε.
    """

    def __init__(self, base: DgCategory, marked, window, name=None):
        super().__init__()
        self.base = base
        self.marked = [frozenset(m) for m in marked]
        self.window = _check_window(window)
        self.objects = list(base.objects)
        k = len(self.marked)
        self.indices = {}
        for z in self.objects:
            inside = [i + 1 for i in range(k) if z in self.marked[i]]
            idx = [I for s in range(1, len(inside) + 1) for I in combinations(inside, s)]
            if idx:
                self.indices[z] = idx
        self.name = name or "%s/%d" % (base.name, k)
        self.bound = None

    # words -------------------------------------------------------------
    def letters(self, x, y, word):
        """Yield ``(position, letter, src, tgt)`` for the morphisms of C in a word."""
        objs = [y] + [e.obj for e in word[1::2]] + [x]
        for j, a in enumerate(word[0::2]):
            yield 2 * j, a, objs[j + 1], objs[j]

    def degree(self, x, y, word) -> int:
        n = sum(self.base.degree(s, t, a) for _, a, s, t in self.letters(x, y, word))
        return n - sum(len(e.index) for e in word[1::2])

    def _build_hom(self, x, y):
        low = self.low
        found = {}

        def grow(cur, path, deg):
            for a, da in self.base.hom(cur, y).basis():
                if deg + da >= low:
                    w = tuple(reversed(path + [a]))
                    found.setdefault(deg + da, []).append(w)
            for z, idx in self.indices.items():
                for a, da in self.base.hom(cur, z).basis():
                    for I in idx:
                        nd = deg + da - len(I)
                        if nd >= low:
                            grow(z, path + [a, Eps(I, z)], nd)

        grow(x, [], 0)
        return HomComplex(found, lambda w: self.d_basis(x, y, w))

    def _substitute(self, word, i, vec, out, c, width=1):
        for k, v in vec.items():
            _acc(out, word[:i] + (k,) + word[i + width:], c * v)

    def d_basis(self, x, y, word):
        out = {}
        objs = [y] + [e.obj for e in word[1::2]] + [x]
        s = 0
        for i, item in enumerate(word):
            sign = -1 if s % 2 else 1
            if i % 2 == 0:
                a, b = objs[i // 2 + 1], objs[i // 2]
                self._substitute(word, i, self.base.d_basis(a, b, item), out, sign)
                s += self.base.degree(a, b, item)
            else:
                I, z = item.index, item.obj
                if len(I) == 1:
                    # dε = id: merge the neighbours
                    left, right = word[i - 1], word[i + 1]
                    src, nxt = objs[i // 2 + 2], objs[i // 2]
                    merged = self.base.compose_basis(src, z, nxt, left, right)
                    self._substitute(word, i - 1, merged, out, sign, width=3)
                else:
                    # Čech signs: dε^{ij} = ε^i − ε^j
                    for t in range(len(I)):
                        _acc(out, word[:i] + (Eps(I[:t] + I[t + 1:], z),) + word[i + 1:],
                             sign * cech_sign(I, t))
                s -= len(I)
        return out

    def compose_basis(self, x, y, z, g, f):
        # g: y → z, f: x → y; the last letter of g meets the first of f at y
        a_src = f[1].obj if len(f) > 1 else x
        a_tgt = g[-2].obj if len(g) > 1 else z
        merged = self.base.compose_basis(a_src, y, a_tgt, g[-1], f[0])
        return {g[:-1] + (k,) + f[1:]: c for k, c in merged.items()}

    def unit(self, x):
        return (self.base.unit(x),)

    def eps(self, I, z) -> tuple:
        u = self.base.unit(z)
        return (u, Eps(tuple(I), z), u)

    def generator_report(self) -> Report:
        """dε^I = Čech sum for every generator, and d² = 0 on it."""
        r = Report("generators of %s" % self.name)
        bad, sq = [], []
        for z, idx in self.indices.items():
            u = self.base.unit(z)
            for I in idx:
                w = self.eps(I, z)
                got = self.d_basis(z, z, w)
                if len(I) == 1:
                    want = {(u,): 1}
                else:
                    want = {}
                    for t in range(len(I)):
                        _acc(want, self.eps(I[:t] + I[t + 1:], z), cech_sign(I, t))
                if got != want:
                    bad.append(repr(Eps(I, z)))
                if self.d(z, z, got):
                    sq.append(repr(Eps(I, z)))
        r.add("dε = Čech sum", not bad, ", ".join(bad))
        r.add("d²ε = 0", not sq, ", ".join(sq))
        return r


def cech_sign(I, t) -> int:
    """Sign of ε^{I minus its t-th index} in dε^I."""
    return -1 if (len(I) - 1 - t) % 2 else 1


def koszul_split_sign(ix, iy) -> int:
    return -1 if (len(ix) * len(iy)) % 2 else 1


def drinfeld_quotient(c: DgCategory, c0, window=(-6, 0)) -> QuotientCategory:
    c0 = frozenset(c0)
    if not c0:
        raise DgError("the subcategory to kill is empty")
    if not c0 <= set(c.objects):
        raise DgError("unknown objects %s" % sorted(map(render, c0 - set(c.objects))))
    return QuotientCategory(c, [c0], window, name="%s/%s" % (c.name, ",".join(
        sorted(map(render, c0)))))


def generalized_quotient(p: PCat, window=(-6, 0)) -> QuotientCategory:
    return QuotientCategory(p.ambient, p.marked, window)


# ---------------------------------------------------------------------------
# functors

class DgFunctor:
    """A dg functor given on objects and on basis keys."""

    def __init__(self, source: DgCategory, target: DgCategory, obj: Callable,
                 fmap: Callable, name="F"):
        self.source, self.target = source, target
        self.obj, self.fmap = obj, fmap
        self.name = name
        self._maps = {}

    def apply(self, x, y, vec: dict) -> dict:
        out = {}
        for k, c in vec.items():
            for t, v in self.fmap(x, y, k).items():
                _acc(out, t, c * v)
        return out

    def hom_map(self, x, y) -> ComplexMap:
        key = (x, y)
        if key not in self._maps:
            hs, ht = self.source.hom(x, y), self.target.hom(self.obj(x), self.obj(y))
            layers = {}
            for n, ks in hs.keys.items():
                tgt_space = ht.complex.space(n)
                cols = {}
                for j, k in enumerate(ks):
                    img = self.fmap(x, y, k)
                    if img:
                        cols[j] = ht.column(img, n)
                layers[n] = LinearMap(hs.complex.space(n), tgt_space, cols)
            self._maps[key] = ComplexMap(hs.complex, ht.complex, layers, check=False)
        return self._maps[key]


def identity_functor(c: DgCategory) -> DgFunctor:
    return DgFunctor(c, c, lambda x: x, lambda x, y, k: {k: 1}, name="id")


def compose_functors(g: DgFunctor, f: DgFunctor) -> DgFunctor:
    return DgFunctor(f.source, g.target, lambda x: g.obj(f.obj(x)),
                     lambda x, y, k: g.apply(f.obj(x), f.obj(y), f.fmap(x, y, k)),
                     name="%s∘%s" % (g.name, f.name))


def tensor_functors(f: DgFunctor, g: DgFunctor, source=None, target=None) -> DgFunctor:
    """f ⊗ g on the flattened tensor categories (degree-0 functors: no signs)."""
    source = source or tensor_dgcat(f.source, g.source)
    target = target or tensor_dgcat(f.target, g.target)
    na = arity(f.source)

    def obj(x):
        return Tensor(flat(f.obj(join(x[:na]))) + flat(g.obj(join(x[na:]))))

    def fmap(x, y, k):
        a = f.fmap(join(x[:na]), join(y[:na]), join(k[:na]))
        b = g.fmap(join(x[na:]), join(y[na:]), join(k[na:]))
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                _acc(out, Tensor(flat(ka) + flat(kb)), ca * cb)
        return out

    return DgFunctor(source, target, obj, fmap, name="%s⊗%s" % (f.name, g.name))


def inclusion_functor(q: QuotientCategory) -> DgFunctor:
    return DgFunctor(q.base, q, lambda x: x, lambda x, y, k: {(k,): 1}, name="incl")


def induced_functor(f: DgFunctor, source: QuotientCategory, target: QuotientCategory,
                    eps_map: Optional[Callable] = None) -> DgFunctor:
    """F̄ on quotients: apply F letterwise, send ε^I_Z to ``eps_map(I)`` at F(Z)."""
    eps_map = eps_map or (lambda I: I)

    def fmap(x, y, word):
        out = {(): Fraction(1)}
        for i, item in enumerate(word):
            if i % 2:
                I = eps_map(item.index)
                if I is None:
                    return {}
                out = {w + (Eps(I, f.obj(item.obj)),): c for w, c in out.items()}
            else:
                a, b = _letter_objects(word, i, x, y)
                img = f.fmap(a, b, item)
                nxt = {}
                for w, c in out.items():
                    for k, v in img.items():
                        _acc(nxt, w + (k,), c * v)
                out = nxt
        return out

    return DgFunctor(source, target, f.obj, fmap, name="%s̄" % f.name)


def _letter_objects(word, i, x, y):
    objs = [y] + [e.obj for e in word[1::2]] + [x]
    return objs[i // 2 + 1], objs[i // 2]


def functor_report(f: DgFunctor) -> Report:
    """Units, composition and differentials preserved, checked on the basis."""
    s, t = f.source, f.target
    r = Report("dg functor %s" % f.name)
    obs = list(s.objects)
    r.add("units", all(f.fmap(x, x, s.unit(x)) == {t.unit(f.obj(x)): 1} for x in obs))
    bad = []
    for x, y in product(obs, repeat=2):
        m = f.hom_map(x, y)
        if m.commutation_defects():
            bad.append("%s→%s" % (render(x), render(y)))
    r.add("commutes with d", not bad, ", ".join(bad))
    comp = []
    for x, y, z in product(obs, repeat=3):
        for g, dg, h, dh in _pairs_in_window(s, s.hom(y, z), s.hom(x, y)):
            lhs = f.apply(x, z, s.compose_basis(x, y, z, g, h))
            rhs = t.compose(f.obj(x), f.obj(y), f.obj(z), f.fmap(y, z, g), f.fmap(x, y, h))
            if lhs != rhs:
                comp.append("%s∘%s" % (render(g), render(h)))
    r.add("composition", not comp, ", ".join(comp[:5]))
    return r


def _degrees(f: DgFunctor, degrees):
    if degrees is not None:
        return list(degrees)
    w = f.source.window or f.target.window
    if w is not None:
        return list(range(w[0], w[1] + 1))
    return None


def _h0_span(cat, x, y):
    """Closed degree-0 basis (as key vectors) and boundaries of Hom(x, y)."""
    h = cat.hom(x, y)
    cyc = [h.element(0, v) for v in kernel_basis(h.complex.d(0))]
    bnd = [h.element(0, col) for col in h.complex.d(-1).cols.values()]
    return cyc, bnd


def _is_h0_iso(cat, a, b, u) -> bool:
    """Is the closed degree-0 u: a → b invertible in H⁰?  Decided by a linear solve."""
    cyc, _ = _h0_span(cat, b, a)
    _, ba = _h0_span(cat, a, a)
    _, bb = _h0_span(cat, b, b)
    ha, hb = cat.hom(a, a), cat.hom(b, b)
    # unknowns: v = Σ x_i cyc_i, plus boundary corrections; rows: End(a) ⊕ End(b) in degree 0
    na = len(ha.keys.get(0, []))
    cols = []
    for v in cyc:
        c = {i: x for i, x in ha.column(cat.compose(a, b, a, v, u), 0).items()}
        for i, x in hb.column(cat.compose(b, a, b, u, v), 0).items():
            c[na + i] = x
        cols.append(c)
    cols += [ha.column(z, 0) for z in ba]
    cols += [{na + i: x for i, x in hb.column(z, 0).items()} for z in bb]
    rows = Space.of_dim(na + len(hb.keys.get(0, [])))
    m = LinearMap(Space.of_dim(len(cols)), rows, dict(enumerate(cols)))
    target = dict(ha.column({cat.unit(a): 1}, 0))
    for i, x in hb.column({cat.unit(b): 1}, 0).items():
        target[na + i] = x
    return solve(m, target) is not None


def h0_isomorphic(cat, a, b, coeffs=(0, 1, -1)) -> bool:
    """Search the closed degree-0 maps a → b with coefficients in ``coeffs``."""
    if a == b:
        return True
    za = cohomology_dims(cat.hom(a, a).complex, [0])[0]
    zb = cohomology_dims(cat.hom(b, b).complex, [0])[0]
    if za == 0 or zb == 0:
        return za == zb
    cyc, _ = _h0_span(cat, a, b)
    for combo in product(coeffs, repeat=len(cyc)):
        if not any(combo):
            continue
        u = {}
        for c, z in zip(combo, cyc):
            for k, v in z.items():
                _acc(u, k, c * v)
        if _is_h0_iso(cat, a, b, u):
            return True
    return False


def quasi_equivalence_check(f: DgFunctor, degrees=None) -> Report:
    """Hom-level quasi-isomorphisms plus essential surjectivity of H⁰ f."""
    r = Report("quasi-equivalence %s" % f.name)
    degs = _degrees(f, degrees)
    obs = list(f.source.objects)
    bad = []
    for x, y in product(obs, repeat=2):
        ok, _ = is_quasi_iso(f.hom_map(x, y), degs)
        if not ok:
            bad.append("%s→%s" % (render(x), render(y)))
    r.add("Hom quasi-isomorphisms", not bad, ", ".join(bad[:8]),
          pairs=len(obs) ** 2, failed=len(bad))
    images = {f.obj(x) for x in obs}
    missing = [render(t) for t in f.target.objects
               if t not in images and not any(h0_isomorphic(f.target, i, t) for i in images)]
    r.add("H⁰ essentially surjective", not missing, ", ".join(missing))
    return r


# ---------------------------------------------------------------------------
# Ψ and β

def psi_comparison(p: PCat, window=(-5, 0)):
    """Ψ: C/(C₁, …, C_k) → C/C_Σ, ε^i ↦ ε, higher ε ↦ 0.  Returns (Ψ, report)."""
    src = generalized_quotient(p, window)
    union = frozenset().union(*p.marked)
    if not union:
        tgt = src
    else:
        tgt = drinfeld_quotient(p.ambient, union, window)
    psi = induced_functor(identity_functor(p.ambient), src, tgt,
                          lambda I: (1,) if len(I) == 1 else None)
    psi.name = "Ψ"
    r = Report("Ψ comparison")
    r.extend(src.generator_report(), "source ")
    r.extend(functor_report(psi))
    r.extend(quasi_equivalence_check(psi))
    return psi, r


@dataclass
class ColaxBeta:
    functor: DgFunctor
    report: Report


def beta_functor(x: PCat, y: PCat, window, source=None, target=None,
                 sign_rule=koszul_split_sign) -> DgFunctor:
    """β: Dr(x⊗y) → Dr(x) ⊗ Dr(y), ε^I ↦ ±ε^{I∩x} ⊗ ε^{I∩y} (ε^∅ = id).

    With Čech signs on both sides the dg-functor equation forces the sign
    (−1)^{|I∩x|·|I∩y|}; ``sign_rule`` is exposed so a wrong rule can be tried.
    """
    xy = tensor_pcat(x, y)
    source = source or generalized_quotient(xy, window)
    qx, qy = generalized_quotient(x, window), generalized_quotient(y, window)
    target = target or tensor_dgcat(qx, qy)
    ax, nx = arity(x.ambient), len(x.marked)

    def split(o):
        return join(o[:ax]), join(o[ax:])

    def piece(I, o):
        ox, oy = split(o)
        ix = tuple(i for i in I if i <= nx)
        iy = tuple(i - nx for i in I if i > nx)
        wx = qx.eps(ix, ox) if ix else qx.unit(ox)
        wy = qy.eps(iy, oy) if iy else qy.unit(oy)
        return Tensor((wx, wy)), sign_rule(ix, iy)

    def obj(o):
        return Tensor(split(o))

    def fmap(a, b, word):
        objs = [b] + [e.obj for e in word[1::2]] + [a]
        out, cur_src = None, None
        # build the image left to right in composition order: out: cur_src → b
        for i, item in enumerate(word):
            if i % 2 == 0:
                s = objs[i // 2 + 1]
                kx, ky = split(item)
                img = {Tensor(((kx,), (ky,))): Fraction(1)}
            else:
                s = item.obj
                k, c = piece(item.index, item.obj)
                img = {k: Fraction(c)}
            if out is None:
                out = img
            else:
                out = target.compose(obj(s), obj(cur_src), obj(b), out, img)
            cur_src = s
        return out

    return DgFunctor(source, target, obj, fmap, name="β")


def colax_beta(x: PCat, y: PCat, window=(-4, 0)) -> ColaxBeta:
    f = beta_functor(x, y, window)
    r = Report("colax β")
    r.extend(functor_report(f))
    r.extend(quasi_equivalence_check(f))
    return ColaxBeta(f, r)


def coassociativity_report(x: PCat, y: PCat, z: PCat, window=(-2, 0), pairs=None) -> Report:
    """(β_{x,y} ⊗ id)∘β_{x⊗y,z} = (id ⊗ β_{y,z})∘β_{x,y⊗z} on every basis morphism.

    ``pairs`` restricts the check to some (source, target) object pairs.
    """
    xy, yz = tensor_pcat(x, y), tensor_pcat(y, z)
    r = Report("β coassociativity")
    r.add("(x⊗y)⊗z = x⊗(y⊗z)", same_pcat(tensor_pcat(xy, z), tensor_pcat(x, yz)))
    b_xy_z = beta_functor(xy, z, window)
    b_x_yz = beta_functor(x, yz, window, source=b_xy_z.source)
    b_xy = beta_functor(x, y, window)
    b_yz = beta_functor(y, z, window)
    qx = generalized_quotient(x, window)
    qz = generalized_quotient(z, window)
    target = tensor_dgcat(b_xy.target, qz)
    left = compose_functors(tensor_functors(b_xy, identity_functor(qz), target=target), b_xy_z)
    right = compose_functors(tensor_functors(identity_functor(qx), b_yz, target=target), b_x_yz)
    src = b_xy_z.source
    bad, count = [], 0
    for a, b in pairs or product(src.objects, repeat=2):
        for k, _ in src.hom(a, b).basis():
            count += 1
            if left.fmap(a, b, k) != right.fmap(a, b, k):
                bad.append(render(k))
    r.add("square commutes", not bad, ", ".join(bad[:5]), morphisms=count)
    return r


def example_pcat(copies=1) -> PCat:
    """The two-object example with ``copies`` marked copies of {Y}."""
    return PCat(two_object_example(), [{"Y"}] * copies)


def tensor_homs(a: HomComplex, b: HomComplex) -> HomComplex:
    """a ⊗ b with keys Tensor((ka, kb)) and the Koszul differential."""
    keys = {}
    for ka, na in a.basis():
        for kb, nb in b.basis():
            keys.setdefault(na + nb, []).append(Tensor((ka, kb)))

    def dfun(k):
        ka, kb = k
        out = {}
        for t, c in a.d({ka: 1}).items():
            _acc(out, Tensor((t, kb)), c)
        s = -1 if a.degree(ka) % 2 else 1
        for t, c in b.d({kb: 1}).items():
            _acc(out, Tensor((ka, t)), s * c)
        return out

    return HomComplex(keys, dfun)
