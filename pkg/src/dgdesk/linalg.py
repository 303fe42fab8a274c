"""
Exact linear algebra over the rationals.

Vectors are sparse dicts ``{index: Fraction}``.  A :class:`LinearMap` stores
its matrix column-wise (one sparse vector per domain basis element) between
two labelled :class:`Space` objects.  Elimination is done on integer rows
with fraction-free updates, so no rounding ever happens.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Iterable, Mapping, Optional, Sequence

Vector = dict  # {int: Fraction}

_SCALAR_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars

def parse_scalar(s) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or an int) into a Fraction.

    Decimal and exponent notation are rejected on purpose.
    """
    if isinstance(s, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if not isinstance(s, str):
        raise ValueError("not a rational scalar: %r" % (s,))
    mo = _SCALAR_RE.match(s)
    if mo is None:
        raise ValueError("not a rational scalar: %r" % (s,))
    num = int(mo.group(1))
    den = int(mo.group(2)) if mo.group(2) is not None else 1
    if den == 0:
        raise ValueError("zero denominator: %r" % (s,))
    return Fraction(num, den)


def format_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# sparse vectors

def vec_add(u: Mapping, v: Mapping, c=1) -> Vector:
    """u + c*v as a new dict."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(u: dict, v: Mapping, c=1) -> dict:
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)
    return u


def vec_scale(v: Mapping, c) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_clean(v: Mapping) -> Vector:
    return {k: Fraction(x) for k, x in v.items() if x}


# ---------------------------------------------------------------------------
# spaces

class Space:
    """A finite-dimensional space with an ordered list of distinct basis labels."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(l) for l in labels)
        index = {l: i for i, l in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("basis labels must be distinct")
        self.labels = labels
        self._index = index

    @classmethod
    def of_dim(cls, n: int, prefix: str = "e") -> "Space":
        return cls("%s%d" % (prefix, i) for i in range(n))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def __eq__(self, other):
        return isinstance(other, Space) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        if self.dim <= 6:
            return "Space(%r)" % (list(self.labels),)
        return "Space(dim=%d)" % self.dim

    def tensor(self, other: "Space") -> "Space":
        # only the ground field's basis "1" is elided, so labels stay distinct
        if other.labels == ("1",):
            return Space(self.labels)
        if self.labels == ("1",):
            return Space(other.labels)
        return Space("%s⊗%s" % (a, b) for a, b in product(self.labels, other.labels))

    __matmul__ = tensor

    def power(self, n: int) -> "Space":
        out = K
        for _ in range(n):
            out = out.tensor(self)
        return out

    def basis_vector(self, i) -> Vector:
        if isinstance(i, str):
            i = self._index[i]
        return {i: Fraction(1)}


def direct_sum_space(*spaces: Space) -> Space:
    labels = []
    for i, s in enumerate(spaces):
        labels.extend("%d:%s" % (i, l) for l in s.labels)
    return Space(labels)


#: the ground field as a 1-dimensional space
K = Space(["1"])
ZERO = Space([])


# ---------------------------------------------------------------------------
# linear maps

class LinearMap:
    """An exact rational matrix between labelled spaces, stored by columns."""

    __slots__ = ("domain", "codomain", "cols")

    def __init__(self, domain: Space, codomain: Space, cols: Optional[Mapping] = None,
                 check: bool = True):
        self.domain = domain
        self.codomain = codomain
        out = {}
        if cols:
            n, m = domain.dim, codomain.dim
            for j, col in cols.items():
                if check and not (0 <= j < n):
                    raise ShapeError("column %r out of range" % (j,))
                c = {}
                for i, x in col.items():
                    if x:
                        if check and not (0 <= i < m):
                            raise ShapeError("row %r out of range" % (i,))
                        c[i] = x if type(x) is Fraction else Fraction(x)
                if c:
                    out[j] = c
        self.cols = out

    # -- constructors
    @classmethod
    def zero(cls, domain: Space, codomain: Space) -> "LinearMap":
        return cls(domain, codomain)

    @classmethod
    def identity(cls, space: Space) -> "LinearMap":
        return cls(space, space, {i: {i: Fraction(1)} for i in range(space.dim)}, check=False)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], domain: Space = None,
                   codomain: Space = None) -> "LinearMap":
        m = len(rows)
        n = len(rows[0]) if m else (domain.dim if domain else 0)
        domain = domain or Space.of_dim(n, "x")
        codomain = codomain or Space.of_dim(m, "y")
        if codomain.dim != m or domain.dim != n:
            raise ShapeError("dense matrix shape does not match spaces")
        cols = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ShapeError("ragged matrix")
            for j, x in enumerate(row):
                x = Fraction(x)
                if x:
                    cols.setdefault(j, {})[i] = x
        return cls(domain, codomain, cols, check=False)

    @classmethod
    def from_function(cls, domain: Space, codomain: Space,
                      fn: Callable[[int], Mapping]) -> "LinearMap":
        return cls(domain, codomain, {j: fn(j) for j in range(domain.dim)})

    @classmethod
    def from_entries(cls, domain: Space, codomain: Space, entries) -> "LinearMap":
        """Build from ``(row_label, col_label, value)`` triples."""
        cols = {}
        for r, c, x in entries:
            x = parse_scalar(x)
            if x:
                col = cols.setdefault(domain.index(c), {})
                i = codomain.index(r)
                col[i] = col.get(i, 0) + x
        return cls(domain, codomain, cols)

    # -- basic access
    @property
    def shape(self):
        return (self.codomain.dim, self.domain.dim)

    def column(self, j: int) -> Vector:
        return self.cols.get(j, {})

    def entry(self, i: int, j: int) -> Fraction:
        return self.cols.get(j, {}).get(i, Fraction(0))

    @property
    def entries(self) -> dict:
        """Sparse map ``(row_label, col_label) -> Fraction``."""
        rl, cl = self.codomain.labels, self.domain.labels
        return {(rl[i], cl[j]): x for j, col in self.cols.items() for i, x in col.items()}

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def to_dense(self) -> list:
        m, n = self.shape
        A = [[Fraction(0)] * n for _ in range(m)]
        for j, col in self.cols.items():
            for i, x in col.items():
                A[i][j] = x
        return A

    def rows(self) -> dict:
        """Row-wise sparse view ``{i: {j: x}}``."""
        out = {}
        for j, col in self.cols.items():
            for i, x in col.items():
                out.setdefault(i, {})[j] = x
        return out

    def apply(self, v: Mapping) -> Vector:
        out = {}
        cols = self.cols
        for j, x in v.items():
            col = cols.get(j)
            if col and x:
                for i, y in col.items():
                    z = out.get(i, 0) + x * y
                    if z:
                        out[i] = z
                    else:
                        del out[i]
        return out

    __call__ = apply

    # -- algebra
    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition ``self ∘ other``."""
        if other.codomain.dim != self.domain.dim:
            raise ShapeError("cannot compose %s after %s" % (self.shape, other.shape))
        cols = {j: self.apply(col) for j, col in other.cols.items()}
        return LinearMap(other.domain, self.codomain, cols, check=False)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeError("shape mismatch %s vs %s" % (self.shape, other.shape))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check_same(other)
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, c in other.cols.items():
            vec_iadd(cols.setdefault(j, {}), c)
        return LinearMap(self.domain, self.codomain, cols, check=False)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._check_same(other)
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, c in other.cols.items():
            vec_iadd(cols.setdefault(j, {}), c, -1)
        return LinearMap(self.domain, self.codomain, cols, check=False)

    def __neg__(self) -> "LinearMap":
        return self.scale(-1)

    def scale(self, c) -> "LinearMap":
        c = Fraction(c)
        if not c:
            return LinearMap(self.domain, self.codomain)
        return LinearMap(self.domain, self.codomain,
                         {j: {i: c * x for i, x in col.items()} for j, col in self.cols.items()},
                         check=False)

    def __rmul__(self, c) -> "LinearMap":
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __hash__(self):
        return id(self)

    def same_as(self, other: "LinearMap") -> bool:
        """Equality including the basis labels of both spaces."""
        return (self == other and self.domain == other.domain
                and self.codomain == other.codomain)

    def is_zero(self) -> bool:
        return not self.cols

    def transpose(self) -> "LinearMap":
        return LinearMap(self.codomain, self.domain, self.rows(), check=False)

    def tensor(self, other: "LinearMap") -> "LinearMap":
        """Kronecker product; basis of ``A⊗B`` ordered with A's index major."""
        n2, m2 = other.domain.dim, other.codomain.dim
        cols = {}
        for j1, c1 in self.cols.items():
            for j2, c2 in other.cols.items():
                col = {}
                for i1, x in c1.items():
                    base = i1 * m2
                    for i2, y in c2.items():
                        col[base + i2] = x * y
                cols[j1 * n2 + j2] = col
        return LinearMap(self.domain.tensor(other.domain), self.codomain.tensor(other.codomain),
                         cols, check=False)

    def relabel(self, domain: Space = None, codomain: Space = None) -> "LinearMap":
        domain = domain or self.domain
        codomain = codomain or self.codomain
        if domain.dim != self.domain.dim or codomain.dim != self.codomain.dim:
            raise ShapeError("relabel must preserve dimensions")
        return LinearMap(domain, codomain, self.cols, check=False)

    def restrict_columns(self, idx: Sequence[int], domain: Space = None) -> "LinearMap":
        domain = domain or Space(self.domain.labels[j] for j in idx)
        return LinearMap(domain, self.codomain,
                         {k: self.cols[j] for k, j in enumerate(idx) if j in self.cols},
                         check=False)

    def __repr__(self):
        return "LinearMap(%d×%d, nnz=%d)" % (self.shape[0], self.shape[1], self.nnz())

    # -- serialization
    def to_json(self) -> dict:
        rl, cl = self.codomain.labels, self.domain.labels
        entries = [[rl[i], cl[j], format_scalar(x)]
                   for j in sorted(self.cols) for i, x in sorted(self.cols[j].items())]
        return {"rows": list(rl), "cols": list(cl), "entries": entries}

    @classmethod
    def from_json(cls, data: Mapping) -> "LinearMap":
        return cls.from_entries(Space(data["cols"]), Space(data["rows"]), data["entries"])


def hstack_columns(codomain: Space, vectors: Sequence[Mapping], prefix="v") -> LinearMap:
    """The map whose j-th column is ``vectors[j]``."""
    dom = Space("%s%d" % (prefix, j) for j in range(len(vectors)))
    return LinearMap(dom, codomain, {j: v for j, v in enumerate(vectors)})


def permutation_map(space: Space, factor_dims: Sequence[int], perm: Sequence[int],
                    codomain: Space = None) -> LinearMap:
    """Permute tensor factors: output factor k is input factor ``perm[k]``."""
    dims = list(factor_dims)
    out_dims = [dims[p] for p in perm]
    n = len(dims)
    cols = {}
    for j, idx in enumerate(product(*[range(d) for d in dims])):
        out = 0
        for k in range(n):
            out = out * out_dims[k] + idx[perm[k]]
        cols[j] = {out: Fraction(1)}
    if codomain is None:
        codomain = Space.of_dim(space.dim, "p")
    return LinearMap(space, codomain, cols, check=False)


# ---------------------------------------------------------------------------
# fraction-free elimination

def _primitive(row: dict) -> dict:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: x // g for k, x in row.items()}
    return row


def _integer_row(v: Mapping) -> dict:
    den = 1
    for x in v.values():
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return {k: int(Fraction(x) * den) for k, x in v.items() if x}


class Echelon:
    """Incremental row echelon form of integer sparse rows.

    Each stored row is primitive with leading column equal to its pivot.
    Row reduction uses the fraction-free update ``row <- p*row - a*pivot_row``
    followed by content removal.
    """

    def __init__(self):
        self.pivots = {}  # col -> row

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        pivots = self.pivots
        heap = [c for c in row if c in pivots]
        if not heap:
            return row
        heapq.heapify(heap)
        scaled = False
        while heap:
            c = heapq.heappop(heap)
            a = row.get(c)
            if not a:
                continue
            prow = pivots[c]
            p = prow[c]
            g = gcd(p, a)
            pa, aa = p // g, a // g
            if pa < 0:
                pa, aa = -pa, -aa
            if pa != 1:
                for k in row:
                    row[k] *= pa
                scaled = True
            for k, v in prow.items():
                nv = row.get(k, 0) - aa * v
                if nv:
                    if k not in row and k in pivots and k != c:
                        heapq.heappush(heap, k)
                    row[k] = nv
                else:
                    row.pop(k, None)
        if scaled and row:
            row = _primitive(row)
        return row

    def add(self, v: Mapping) -> Optional[int]:
        """Insert a vector; return its new pivot column, or None if dependent."""
        row = _integer_row(v)
        if not row:
            return None
        row = self.reduce(row)
        if not row:
            return None
        row = _primitive(row)
        c = min(row)
        self.pivots[c] = row
        return c

    def back_substitute(self):
        """Bring the stored rows into reduced echelon form (in place)."""
        pivots = self.pivots
        for c in sorted(pivots, reverse=True):
            prow = pivots[c]
            p = prow[c]
            for c2, row in pivots.items():
                if c2 < c and c in row:
                    a = row[c]
                    g = gcd(p, a)
                    pa, aa = p // g, a // g
                    if pa < 0:
                        pa, aa = -pa, -aa
                    new = {k: x * pa for k, x in row.items()} if pa != 1 else dict(row)
                    for k, v in prow.items():
                        nv = new.get(k, 0) - aa * v
                        if nv:
                            new[k] = nv
                        else:
                            new.pop(k, None)
                    pivots[c2] = _primitive(new)

    def reduce_vector(self, v: Mapping) -> Vector:
        """Exact remainder of ``v`` modulo the row span (needs reduced form)."""
        out = {k: Fraction(x) for k, x in v.items() if x}
        for c, prow in self.pivots.items():
            a = out.get(c)
            if a:
                f = a / prow[c]
                for k, x in prow.items():
                    nv = out.get(k, 0) - f * x
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out


def rank_of_vectors(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def rank(m: LinearMap) -> int:
    """Exact rank over ℚ."""
    if m.domain.dim <= m.codomain.dim:
        return rank_of_vectors(m.cols.values())
    return rank_of_vectors(m.rows().values())


def _row_echelon(m: LinearMap) -> Echelon:
    ech = Echelon()
    for row in m.rows().values():
        ech.add(row)
    ech.back_substitute()
    return ech


def kernel_basis(m: LinearMap) -> list:
    """Basis of ker m; one vector per free column, with a 1 in that column."""
    ech = _row_echelon(m)
    pivots = ech.pivots
    basis = []
    for f in range(m.domain.dim):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for c, row in pivots.items():
            x = row.get(f)
            if x:
                v[c] = Fraction(-x, row[c])
        basis.append(v)
    return basis


def solve(m: LinearMap, target: Mapping) -> Optional[Vector]:
    """Some x with m·x = target, or None when target is not in the image."""
    n = m.domain.dim
    rows = m.rows()
    for i, t in target.items():
        if t:
            if not (0 <= i < m.codomain.dim):
                raise ShapeError("target index out of range")
            rows.setdefault(i, {})[n] = t
    ech = Echelon()
    for row in rows.values():
        ech.add(row)
    if n in ech.pivots:
        return None
    ech.back_substitute()
    x = {}
    for c, row in ech.pivots.items():
        t = row.get(n)
        if t:
            x[c] = Fraction(t, row[c])
    return x


def solve_many(m: LinearMap, targets: Sequence[Mapping]) -> list:
    """:func:`solve` for several right-hand sides with one elimination."""
    n = m.domain.dim
    rows = m.rows()
    for t_idx, target in enumerate(targets):
        for i, t in target.items():
            if t:
                rows.setdefault(i, {})[n + t_idx] = t
    ech = Echelon()
    for row in rows.values():
        ech.add(row)
    ech.back_substitute()
    bad = set()
    for c, row in ech.pivots.items():
        if c >= n:
            bad.update(k - n for k in row)
    out = []
    for t_idx in range(len(targets)):
        if t_idx in bad:
            out.append(None)
            continue
        x = {}
        for c, row in ech.pivots.items():
            if c < n:
                t = row.get(n + t_idx)
                if t:
                    x[c] = Fraction(t, row[c])
        out.append(x)
    return out


def image_basis(m: LinearMap) -> list:
    """A basis of the column space (as reduced integer-free Fraction vectors)."""
    ech = Echelon()
    for col in m.cols.values():
        ech.add(col)
    ech.back_substitute()
    return [{k: Fraction(x) for k, x in row.items()} for _, row in sorted(ech.pivots.items())]


def is_injective(m: LinearMap) -> bool:
    return rank(m) == m.domain.dim


def is_surjective(m: LinearMap) -> bool:
    return rank(m) == m.codomain.dim


def is_iso(m: LinearMap) -> bool:
    return m.domain.dim == m.codomain.dim and rank(m) == m.domain.dim


def inverse(m: LinearMap) -> LinearMap:
    if m.domain.dim != m.codomain.dim:
        raise ShapeError("non-square map has no inverse")
    xs = solve_many(m, [{i: Fraction(1)} for i in range(m.codomain.dim)])
    if any(x is None for x in xs):
        raise ValueError("map is singular")
    return LinearMap(m.codomain, m.domain, dict(enumerate(xs)), check=False)


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Bareiss elimination on a dense square matrix."""
    n = len(rows)
    A = [[Fraction(x) for x in r] for r in rows]
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else Fraction(1)


# ---------------------------------------------------------------------------
# sub- and quotient spaces

def subquotient(ambient: Space, f: LinearMap, g: LinearMap, mode: str):
    """Equalizer or coequalizer of a parallel pair.

    ``mode="equalizer"`` returns ``(E, ι)`` with ι: E → ambient spanning
    ker(f − g) (``ambient`` is the common domain).  ``mode="coequalizer"``
    returns ``(Q, π)`` with π: ambient → Q the quotient by im(f − g)
    (``ambient`` is the common codomain).  Basis labels of E and Q record a
    representative ambient label.
    """
    if f.shape != g.shape:
        raise ShapeError("parallel maps must have equal shapes")
    diff = f - g
    if mode == "equalizer":
        if f.domain.dim != ambient.dim:
            raise ShapeError("equalizer ambient must be the common domain")
        basis = kernel_basis(diff)
        labels = _dedupe(["ker[%s]" % ambient.labels[_free_col(v)] for v in basis])
        E = Space(labels)
        return E, LinearMap(E, ambient, {j: v for j, v in enumerate(basis)}, check=False)
    if mode == "coequalizer":
        if f.codomain.dim != ambient.dim:
            raise ShapeError("coequalizer ambient must be the common codomain")
        return quotient_by(ambient, list(diff.cols.values()))
    raise ValueError("mode must be 'equalizer' or 'coequalizer'")


def _free_col(v: Mapping) -> int:
    # kernel_basis puts a 1 at the free column; prefer it as the representative
    for k, x in sorted(v.items(), key=lambda kv: -kv[0]):
        if x == 1:
            return k
    return max(v)


def _dedupe(labels):
    seen = {}
    out = []
    for l in labels:
        n = seen.get(l, 0)
        seen[l] = n + 1
        out.append(l if n == 0 else "%s#%d" % (l, n))
    return out


def quotient_by(ambient: Space, relations: Sequence[Mapping], with_section: bool = False):
    """Quotient of ``ambient`` by the span of ``relations``; returns (Q, π).

    With ``with_section`` also returns the section sending each class to its
    representative basis vector (the non-pivot coordinates).
    """
    ech = Echelon()
    for r in relations:
        ech.add(r)
    ech.back_substitute()
    free = [i for i in range(ambient.dim) if i not in ech.pivots]
    pos = {i: k for k, i in enumerate(free)}
    Q = Space("[%s]" % ambient.labels[i] for i in free)
    cols = {}
    for j in range(ambient.dim):
        rem = ech.reduce_vector({j: 1})
        cols[j] = {pos[k]: x for k, x in rem.items()}
    pi = LinearMap(ambient, Q, cols, check=False)
    if with_section:
        sec = LinearMap(Q, ambient, {k: {i: Fraction(1)} for k, i in enumerate(free)}, check=False)
        return Q, pi, sec
    return Q, pi


def section_of(projection: LinearMap) -> LinearMap:
    """A linear right inverse of a surjection built by :func:`quotient_by`."""
    xs = solve_many(projection, [{q: Fraction(1)} for q in range(projection.codomain.dim)])
    if any(x is None for x in xs):
        raise ValueError("projection is not surjective")
    return LinearMap(projection.codomain, projection.domain, dict(enumerate(xs)), check=False)


def coordinates(inclusion: LinearMap, v: Mapping) -> Optional[Vector]:
    """Coordinates of ``v`` along the (injective) columns of ``inclusion``."""
    return solve(inclusion, v)


def corestrict(f: LinearMap, inclusion: LinearMap) -> Optional[LinearMap]:
    """f viewed as a map into the span of ``inclusion``'s columns; None if it leaves it."""
    js = sorted(f.cols)
    xs = solve_many(inclusion, [f.cols[j] for j in js])
    if any(x is None for x in xs):
        return None
    return LinearMap(f.domain, inclusion.domain, dict(zip(js, xs)), check=False)
