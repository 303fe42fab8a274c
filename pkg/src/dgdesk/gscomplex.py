"""
The Gerstenhaber–Schack bicomplex of a finite-dimensional bialgebra.

C^{p,q} = Hom(B^{⊗p}, B^{⊗q}) for p, q ≥ 1.  d_h is the Hochschild
differential with coefficients in B^{⊗q} (B acts through the iterated
coproduct), d_v the co-Hochschild differential with coefficients in B^{⊗p}
(B coacts through the iterated product).  The total differential on
C^{p,q} is d_h + (−1)^p d_v, and the total degree is n = p + q − 1, so
infinitesimal deformations of (m, Δ) sit in degree 2.

Everything is computed on index tuples of the basis of B.  A cochain basis
element E[i → j] sends the input tuple i to the output tuple j.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .hopf import Bialgebra, HopfAlgebra, with_antipode
from .linalg import LinearMap, Space, inverse, is_iso, rank
from .report import Report


class GsError(ValueError):
    pass


def _acc(out, k, c):
    v = out.get(k, 0) + c
    if v:
        out[k] = v
    else:
        out.pop(k, None)


class _Tables:
    """Structure constants of B as index dictionaries."""

    def __init__(self, b: Bialgebra):
        d = self.d = b.dim
        self.mult = {}
        for j, col in b.m.cols.items():
            self.mult[divmod(j, d)] = dict(col)
        self.pre = {}   # c → [(u, v, coef)] with m(u, v) ∋ coef·c
        for (u, v), col in self.mult.items():
            for c, x in col.items():
                self.pre.setdefault(c, []).append((u, v, x))
        self.delta = {a: {divmod(k, d): x for k, x in b.delta.column(a).items()}
                      for a in range(d)}

    @lru_cache(maxsize=None)
    def prod(self, x: tuple) -> tuple:
        """Iterated product of a nonempty tuple, as ((c, coef), ...)."""
        cur = {x[0]: Fraction(1)}
        for b in x[1:]:
            nxt = {}
            for a, c in cur.items():
                for t, v in self.mult.get((a, b), {}).items():
                    _acc(nxt, t, c * v)
            cur = nxt
        return tuple(cur.items())

    @lru_cache(maxsize=None)
    def coprod(self, a: int, q: int) -> tuple:
        """Iterated coproduct B → B^{⊗q}."""
        cur = {(a,): Fraction(1)}
        for _ in range(q - 1):
            nxt = {}
            for t, c in cur.items():
                for (u, v), x in self.delta[t[-1]].items():
                    _acc(nxt, t[:-1] + (u, v), c * x)
            cur = nxt
        return tuple(cur.items())

    def _mul_tuples(self, y: tuple, z: tuple) -> dict:
        out = {(): Fraction(1)}
        for a, b in zip(y, z):
            nxt = {}
            for t, c in out.items():
                for s, v in self.mult.get((a, b), {}).items():
                    _acc(nxt, t + (s,), c * v)
            out = nxt
        return out

    @lru_cache(maxsize=None)
    def act_left(self, b: int, y: tuple) -> tuple:
        out = {}
        for z, c in self.coprod(b, len(y)):
            for t, v in self._mul_tuples(z, y).items():
                _acc(out, t, c * v)
        return tuple(out.items())

    @lru_cache(maxsize=None)
    def act_right(self, y: tuple, b: int) -> tuple:
        out = {}
        for z, c in self.coprod(b, len(y)):
            for t, v in self._mul_tuples(y, z).items():
                _acc(out, t, c * v)
        return tuple(out.items())

    @lru_cache(maxsize=None)
    def tuple_coprod(self, x: tuple) -> tuple:
        """Δ of B^{⊗p} as a tensor coalgebra: ((x1, x2, coef), ...)."""
        cur = {((), ()): Fraction(1)}
        for a in x:
            nxt = {}
            for (l, r), c in cur.items():
                for (u, v), w in self.delta[a].items():
                    _acc(nxt, (l + (u,), r + (v,)), c * w)
            cur = nxt
        return tuple((l, r, c) for (l, r), c in cur.items())

    @lru_cache(maxsize=None)
    def coprod_index(self, p: int):
        """For each tuple i: who has i as right (resp. left) half of its coproduct."""
        by_right, by_left = {}, {}
        for x in product(range(self.d), repeat=p):
            for l, r, c in self.tuple_coprod(x):
                by_right.setdefault(r, []).append((x, l, c))
                by_left.setdefault(l, []).append((x, r, c))
        return by_right, by_left


def _coefficient_tuples(d, n, allowed):
    return [t for t in product(range(d), repeat=n) if all(a in allowed for a in t)]


class GsBicomplex:
    """The bicomplex on the window 1 ≤ p ≤ pmax, 1 ≤ q ≤ qmax.

    With ``normalized=True`` the base is first rewritten in a basis
    {1} ∪ (basis of ker ε) and cochains are restricted to tuples avoiding
    the unit index: this is the unit/counit-reduced subcomplex.
    """

    def __init__(self, base: Bialgebra, pmax: int, qmax: int, normalized: bool = False):
        if pmax < 1 or qmax < 1:
            raise GsError("window (%d, %d) is too small" % (pmax, qmax))
        self.original = base
        self.normalized = normalized
        if normalized:
            base = change_basis(base, adapted_basis(base))
        self.base = base
        self.pmax, self.qmax = pmax, qmax
        self.t = _Tables(base)
        d = self.t.d
        self.allowed = set(range(1, d)) if normalized else set(range(d))
        self._tuples = {}
        self._index = {}
        self._cache = {}

    # cells -------------------------------------------------------------
    def tuples(self, n: int) -> list:
        if n not in self._tuples:
            ts = _coefficient_tuples(self.t.d, n, self.allowed)
            self._tuples[n] = ts
            self._index[n] = {t: k for k, t in enumerate(ts)}
        return self._tuples[n]

    def cell_dim(self, p: int, q: int) -> int:
        return len(self.tuples(p)) * len(self.tuples(q))

    def in_window(self, p, q) -> bool:
        return 1 <= p <= self.pmax and 1 <= q <= self.qmax

    def _pos(self, i, j) -> int:
        nq = len(self.tuples(len(j)))
        return self._index[len(i)][i] * nq + self._index[len(j)][j]

    def _assemble(self, p, q, p2, q2, image) -> LinearMap:
        self.tuples(p2), self.tuples(q2)
        cols = {}
        for i in self.tuples(p):
            for j in self.tuples(q):
                col = {}
                for (x, y), c in image(i, j).items():
                    if x in self._index[len(x)] and y in self._index[len(y)]:
                        col[self._pos(x, y)] = c
                    else:
                        # only reachable when normalized cochains are not a subcomplex
                        raise GsError("differential leaves the normalized cochains")
                if col:
                    cols[self._pos(i, j)] = col
        return LinearMap(Space.of_dim(self.cell_dim(p, q), "c"),
                         Space.of_dim(self.cell_dim(p2, q2), "c"), cols)

    # differentials on basis elements ------------------------------------
    def _dh_basis(self, i, j) -> dict:
        t, p, out = self.t, len(i), {}
        for b in range(t.d):
            for y, c in t.act_left(b, j):
                _acc(out, ((b,) + i, y), c)
        for k in range(p):
            sign = -1 if (k + 1) % 2 else 1
            for u, v, c in t.pre.get(i[k], []):
                _acc(out, (i[:k] + (u, v) + i[k + 1:], j), sign * c)
        sign = -1 if (p + 1) % 2 else 1
        for b in range(t.d):
            for y, c in t.act_right(j, b):
                _acc(out, (i + (b,), y), sign * c)
        return out

    def _dv_basis(self, i, j) -> dict:
        t, q, out = self.t, len(j), {}
        by_right, by_left = t.coprod_index(len(i))
        for x, l, c in by_right.get(i, []):
            for a, v in t.prod(l):
                _acc(out, (x, (a,) + j), c * v)
        for k in range(q):
            sign = -1 if (k + 1) % 2 else 1
            for (u, v), c in t.delta[j[k]].items():
                _acc(out, (i, j[:k] + (u, v) + j[k + 1:]), sign * c)
        sign = -1 if (q + 1) % 2 else 1
        for x, r, c in by_left.get(i, []):
            for a, v in t.prod(r):
                _acc(out, (x, j + (a,)), sign * c * v)
        return out

    def dh(self, p: int, q: int) -> LinearMap:
        key = ("h", p, q)
        if key not in self._cache:
            self._cache[key] = self._assemble(p, q, p + 1, q, self._dh_basis)
        return self._cache[key]

    def dv(self, p: int, q: int) -> LinearMap:
        key = ("v", p, q)
        if key not in self._cache:
            self._cache[key] = self._assemble(p, q, p, q + 1, self._dv_basis)
        return self._cache[key]

    # total complex -------------------------------------------------------
    def cells(self, n: int) -> list:
        return [(p, n + 1 - p) for p in range(1, n + 1) if self.in_window(p, n + 1 - p)]

    def complete(self, n: int) -> bool:
        """Does the window hold every cell of total degree n?"""
        return n < 1 or (n <= self.pmax and n <= self.qmax)

    def total_dim(self, n: int) -> int:
        return sum(self.cell_dim(p, q) for p, q in self.cells(n))

    def total_d(self, n: int) -> LinearMap:
        """D: C^n → C^{n+1} restricted to the window."""
        src, tgt = self.cells(n), self.cells(n + 1)
        soff, toff = {}, {}
        o = 0
        for c in src:
            soff[c] = o
            o += self.cell_dim(*c)
        dom = Space.of_dim(o, "c")
        o = 0
        for c in tgt:
            toff[c] = o
            o += self.cell_dim(*c)
        cod = Space.of_dim(o, "c")
        cols = {}
        for p, q in src:
            blocks = []
            if (p + 1, q) in toff:
                blocks.append((self.dh(p, q), toff[(p + 1, q)], 1))
            if (p, q + 1) in toff:
                blocks.append((self.dv(p, q), toff[(p, q + 1)], -1 if p % 2 else 1))
            for m, off, sign in blocks:
                for j, col in m.cols.items():
                    c = cols.setdefault(soff[(p, q)] + j, {})
                    for i, x in col.items():
                        _acc(c, off + i, sign * x)
        return LinearMap(dom, cod, {j: c for j, c in cols.items() if c})

    def reportable(self) -> list:
        """Degrees n whose cohomology the window determines exactly."""
        return [n for n in range(1, min(self.pmax, self.qmax)) if self.complete(n + 1)]


def build_gs_bicomplex(b: Bialgebra, pmax: int = 3, qmax: int = 3,
                       normalized: bool = False) -> GsBicomplex:
    return GsBicomplex(b, pmax, qmax, normalized)


def square_report(g: GsBicomplex) -> Report:
    """d_h² = 0, d_v² = 0 and d_h d_v = d_v d_h on every cell where both sides fit."""
    r = Report("GS square identities (%d,%d)" % (g.pmax, g.qmax))
    hh, vv, hv = [], [], []
    for p in range(1, g.pmax + 1):
        for q in range(1, g.qmax + 1):
            if p + 2 <= g.pmax and not (g.dh(p + 1, q) @ g.dh(p, q)).is_zero():
                hh.append((p, q))
            if q + 2 <= g.qmax and not (g.dv(p, q + 1) @ g.dv(p, q)).is_zero():
                vv.append((p, q))
            if p + 1 <= g.pmax and q + 1 <= g.qmax:
                if g.dv(p + 1, q) @ g.dh(p, q) != g.dh(p, q + 1) @ g.dv(p, q):
                    hv.append((p, q))
    r.add("d_h² = 0", not hh, str(hh) if hh else "")
    r.add("d_v² = 0", not vv, str(vv) if vv else "")
    r.add("d_h d_v = d_v d_h", not hv, str(hv) if hv else "")
    return r


def gs_cohomology(g: GsBicomplex, degrees=None) -> dict:
    """dim H^n of the total complex for the reportable degrees (optionally a subset)."""
    ok = g.reportable()
    if degrees is None:
        degrees = ok
    out = {}
    ranks = {}

    def rk(n):
        if n not in ranks:
            ranks[n] = 0 if n < 1 else rank(g.total_d(n))
        return ranks[n]

    for n in degrees:
        if n not in ok:
            continue
        out[n] = g.total_dim(n) - rk(n) - rk(n - 1)
    return out


# ---------------------------------------------------------------------------
# change of basis

def change_basis(b: Bialgebra, P: LinearMap) -> Bialgebra:
    """Rewrite b in the basis given by the columns of the invertible P."""
    Pi = inverse(P)
    S = b.space
    m = Pi @ b.m @ P.tensor(P)
    unit = Pi @ b.unit
    delta = Pi.tensor(Pi) @ b.delta @ P
    counit = b.counit @ P
    cls = Bialgebra(S, m.relabel(S @ S, S), unit.relabel(None, S),
                    delta.relabel(S, S @ S), counit.relabel(S, None), b.name + "'")
    if isinstance(b, HopfAlgebra):
        return with_antipode(cls, (Pi @ b.antipode @ P).relabel(S, S), b.name + "'")
    return cls


def adapted_basis(b: Bialgebra) -> LinearMap:
    """Columns: the unit, then e_k − ε(e_k)·1 for all but one basis vector."""
    d = b.dim
    one = b.one
    k0 = min(one)
    eps = b.counit
    cols = {0: dict(one)}
    c = 1
    for k in range(d):
        if k == k0:
            continue
        v = {k: Fraction(1)}
        e = eps.column(k).get(0, 0)
        for i, x in one.items():
            _acc(v, i, -e * x)
        cols[c] = v
        c += 1
    P = LinearMap(b.space, b.space, cols)
    if not is_iso(P):
        raise GsError("could not adapt the basis")
    return P


def random_basis_change(b: Bialgebra, seed: int = 0, spread: int = 3) -> LinearMap:
    """A seeded random invertible integer matrix."""
    rng = random.Random(seed)
    d = b.dim
    while True:
        rows = [[rng.randint(-spread, spread) for _ in range(d)] for _ in range(d)]
        P = LinearMap.from_dense(rows, b.space, b.space)
        if is_iso(P):
            return P


# ---------------------------------------------------------------------------
# the deformation oracle

def _unknown_block(S, T, offset):
    """Basis of Hom(S, T) as (offset + k) ↦ matrix unit, column-major."""
    units = []
    for i in range(S.dim):
        for j in range(T.dim):
            units.append(LinearMap(S, T, {i: {j: Fraction(1)}}))
    return units


def deformation_oracle(b: Bialgebra) -> int:
    """Infinitesimal deformations of (m, Δ) modulo trivial ones, unit and counit fixed.

    Unknowns (m′, Δ′) satisfy the linearized associativity, coassociativity
    and Δ(ab) = Δ(a)Δ(b); m′(1⊗a) = m′(a⊗1) = 0, ε∘m′ = 0, Δ′(1) = 0 and
    (ε⊗id)Δ′ = (id⊗ε)Δ′ = 0.  Trivial deformations come from φ: B → B with
    φ(1) = 0 and ε∘φ = 0.  Solved directly from the structure maps.
    """
    from .hopf import ident, middle_swap
    S = b.space
    SS = S @ S
    I = ident(S)
    m, delta, unit, eps = b.m, b.delta, b.unit, b.counit
    mid = middle_swap(S, S, S, S)

    def equations(mp, dp):
        # every output is a LinearMap; they are flattened into one vector
        eqs = [
            mp @ m.tensor(I) + m @ mp.tensor(I) - mp @ I.tensor(m) - m @ I.tensor(mp),
            dp.tensor(I) @ delta + delta.tensor(I) @ dp - I.tensor(dp) @ delta
            - I.tensor(delta) @ dp,
            dp @ m + delta @ mp - (mp.tensor(m) + m.tensor(mp)) @ mid @ delta.tensor(delta)
            - m.tensor(m) @ mid @ (dp.tensor(delta) + delta.tensor(dp)),
            mp @ unit.tensor(I), mp @ I.tensor(unit), eps @ mp,
            dp @ unit, eps.tensor(I) @ dp, I.tensor(eps) @ dp,
        ]
        return eqs

    def flatten(maps):
        v, off = {}, 0
        for f in maps:
            nrow = f.codomain.dim
            for j, col in f.cols.items():
                for i, x in col.items():
                    v[off + j * nrow + i] = x
            off += f.domain.dim * nrow
        return v, off

    zero_m, zero_d = LinearMap.zero(SS, S), LinearMap.zero(S, SS)
    units_m = _unknown_block(SS, S, 0)
    units_d = _unknown_block(S, SS, 0)
    cols, nrows = {}, 0
    for k, u in enumerate(units_m):
        cols[k], nrows = flatten(equations(u, zero_d))
    for k, u in enumerate(units_d):
        cols[len(units_m) + k], nrows = flatten(equations(zero_m, u))
    n_unknowns = len(units_m) + len(units_d)
    A = LinearMap(Space.of_dim(n_unknowns, "x"), Space.of_dim(nrows, "r"), cols)
    solutions = n_unknowns - rank(A)
    # trivial deformations: φ ↦ (m(φ⊗1) + m(1⊗φ) − φm, (φ⊗1)Δ + (1⊗φ)Δ − Δφ)
    phis = _normalized_endomorphisms(b)
    triv = {}
    for k, phi in enumerate(phis):
        mp = m @ phi.tensor(I) + m @ I.tensor(phi) - phi @ m
        dp = phi.tensor(I) @ delta + I.tensor(phi) @ delta - delta @ phi
        triv[k], _ = flatten([mp, dp])
    T = LinearMap(Space.of_dim(len(triv), "t"), Space.of_dim(n_unknowns, "x"), triv)
    return solutions - rank(T)


def _normalized_endomorphisms(b: Bialgebra) -> list:
    """A basis of {φ: B → B | φ(1) = 0, ε∘φ = 0}."""
    from .linalg import kernel_basis
    S = b.space
    d = S.dim
    units = _unknown_block(S, S, 0)
    cols = {}
    for k, phi in enumerate(units):
        v = {}
        for i, x in (phi @ b.unit).column(0).items():
            v[i] = x
        for j, x in (b.counit @ phi).cols.items():
            for _, y in x.items():
                v[d + j] = y
        cols[k] = v
    C = LinearMap(Space.of_dim(len(units), "u"), Space.of_dim(2 * d, "r"), cols)
    out = []
    for vec in kernel_basis(C):
        f = LinearMap.zero(S, S)
        for k, x in vec.items():
            f = f + units[k].scale(x)
        out.append(f)
    return out


def derivation_oracle(b: Bialgebra) -> int:
    """dim of {φ: B → B | φ a derivation and a coderivation}.

    With p, q ≥ 1 nothing lands in total degree 1 from below, so this is
    the expected dim H¹ of the GS complex.
    """
    from .hopf import ident
    S = b.space
    I = ident(S)
    units = _unknown_block(S, S, 0)
    cols, nrows = {}, 0
    for k, phi in enumerate(units):
        eqs = [phi @ b.m - b.m @ phi.tensor(I) - b.m @ I.tensor(phi),
               b.delta @ phi - phi.tensor(I) @ b.delta - I.tensor(phi) @ b.delta]
        v, off = {}, 0
        for f in eqs:
            nrow = f.codomain.dim
            for j, col in f.cols.items():
                for i, x in col.items():
                    v[off + j * nrow + i] = x
            off += f.domain.dim * nrow
        cols[k], nrows = v, off
    A = LinearMap(Space.of_dim(len(units), "x"), Space.of_dim(nrows, "r"), cols)
    return len(units) - rank(A)
