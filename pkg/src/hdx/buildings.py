"""Finite fields, canonical subspaces of F_q^r, and spherical buildings.

Subspaces are kept as reduced row-echelon bases, which are unique per
subspace, so enumeration, sorting and equality are all canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .complexes import Complex, cone
from .errors import BadParameter, NotAnnotated, ResourceLimit

# Irreducible monic polynomials (constant-first coefficient lists) for the
# prime-power orders supported at desk scale.  Prime q uses plain mod-p
# arithmetic and needs no table entry.
_IRREDUCIBLE = {
    4: (2, [1, 1, 1]),        # x^2 + x + 1 over F_2
    8: (2, [1, 1, 0, 1]),     # x^3 + x + 1
    9: (3, [1, 0, 1]),        # x^2 + 1
    16: (2, [1, 1, 0, 0, 1]), # x^4 + x + 1
    25: (5, [2, 0, 1]),       # x^2 + 2
    27: (3, [1, 2, 0, 1]),    # x^3 + 2x + 1
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


class FqField:
    """Arithmetic in F_q with elements encoded as integers 0..q-1.

    For q = p^r > p, an element's base-p digits are the coefficients of its
    polynomial representative; multiplication reduces modulo a fixed
    irreducible polynomial.
    """

    def __init__(self, q: int):
        if _is_prime(q):
            self.p, self.r = q, 1
            self.modulus = None
        elif q in _IRREDUCIBLE:
            self.p, poly = _IRREDUCIBLE[q]
            self.r = len(poly) - 1
            self.modulus = poly
        else:
            raise BadParameter(f"unsupported field order {q}")
        self.q = q
        self._mul = None
        self._inv = None
        if self.r > 1:
            self._build_tables()

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.r):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, ds: Sequence[int]) -> int:
        val = 0
        for c in reversed(ds):
            val = val * self.p + c
        return val

    def _poly_mul(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        # Reduce modulo the irreducible polynomial (monic, degree r).
        mod = self.modulus
        for k in range(len(prod) - 1, self.r - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for j in range(self.r):
                    prod[k - self.r + j] = (prod[k - self.r + j] - c * mod[j]) % self.p
        return self._from_digits(prod[: self.r])

    def _build_tables(self):
        q = self.q
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                v = self._poly_mul(a, b)
                self._mul[a][b] = v
                self._mul[b][a] = v
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return self._from_digits([(-x) % self.p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        return self._inv[a]

    def __repr__(self):
        return f"FqField({self.q})"


_FIELDS: dict[int, FqField] = {}


def field(q: int) -> FqField:
    if q not in _FIELDS:
        _FIELDS[q] = FqField(q)
    return _FIELDS[q]


Row = tuple[int, ...]


def rref_fq(rows: Iterable[Row], f: FqField) -> tuple[Row, ...]:
    """Reduced row echelon form over F_q; returns the nonzero rows."""
    work = [list(r) for r in rows]
    if not work:
        return ()
    n = len(work[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    for row in work:
        row = row[:]
        for prow, piv in zip(out, pivots):
            c = row[piv]
            if c:
                row = [f.sub(x, f.mul(c, y)) for x, y in zip(row, prow)]
        piv = next((j for j, x in enumerate(row) if x), None)
        if piv is None:
            continue
        c = f.inv(row[piv])
        row = [f.mul(c, x) for x in row]
        for k, (prow, _) in enumerate(zip(out, pivots)):
            c = prow[piv]
            if c:
                out[k] = [f.sub(x, f.mul(c, y)) for x, y in zip(prow, row)]
        pos = 0
        while pos < len(pivots) and pivots[pos] < piv:
            pos += 1
        out.insert(pos, row)
        pivots.insert(pos, piv)
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of F_q^r as its canonical reduced-echelon basis."""

    ambient_dim: int
    q: int
    basis: tuple[Row, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @staticmethod
    def from_vectors(vectors: Iterable[Row], r: int, q: int) -> "Subspace":
        basis = rref_fq(vectors, field(q))
        for row in basis:
            if len(row) != r:
                raise BadParameter("vector length does not match ambient dimension")
        return Subspace(r, q, basis)

    def contains_space(self, other: "Subspace") -> bool:
        """other <= self, via rank of the stacked bases."""
        if (self.ambient_dim, self.q) != (other.ambient_dim, other.q):
            raise BadParameter("subspaces live in different ambient spaces")
        stacked = rref_fq(self.basis + other.basis, field(self.q))
        return len(stacked) == self.dim

    def vectors(self) -> list[Row]:
        """All q^dim elements (small q only; used for spot checks)."""
        f = field(self.q)
        out = []
        for coeffs in product(range(self.q), repeat=self.dim):
            v = [0] * self.ambient_dim
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [f.add(x, f.mul(c, y)) for x, y in zip(v, row)]
            out.append(tuple(v))
        return out


def gaussian_binomial(r: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^r."""
    if not 0 <= k <= r:
        raise BadParameter(f"need 0 <= k <= r, got k={k}, r={r}")
    num = den = 1
    for i in range(k):
        num *= q ** (r - i) - 1
        den *= q ** (k - i) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(r: int, q: int, k: int) -> list[Subspace]:
    """All k-dimensional subspaces of F_q^r, canonical and sorted.

    Iterates echelon pivot patterns and then the free entries, so each
    subspace is produced exactly once already in reduced form.
    """
    if not 1 <= k <= r - 1:
        raise BadParameter(f"need 1 <= k <= r-1, got k={k}, r={r}")
    field(q)  # validates q
    out = []
    for pivots in combinations(range(r), k):
        free_pos = []
        for i, p in enumerate(pivots):
            for j in range(p + 1, r):
                if j not in pivots:
                    free_pos.append((i, j))
        for vals in product(range(q), repeat=len(free_pos)):
            rows = [[0] * r for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free_pos, vals):
                rows[i][j] = v
            out.append(Subspace(r, q, tuple(tuple(row) for row in rows)))
    out.sort()
    assert len(out) == gaussian_binomial(r, k, q)
    return out


def spherical_building(r: int, q: int, vertex_cap: int = 200_000) -> Complex:
    """The flag complex of the proper nonzero subspaces of F_q^r.

    Vertices are annotated (in `labels`) with their subspace dimension and
    basis so that coloring and the section graphs can be recovered.
    """
    if r < 2:
        raise BadParameter("need r >= 2")
    n_vertices = sum(gaussian_binomial(r, k, q) for k in range(1, r))
    if n_vertices > vertex_cap:
        raise ResourceLimit(
            f"building would have {n_vertices} vertices (cap {vertex_cap})")
    by_dim = {k: enumerate_subspaces(r, q, k) for k in range(1, r)}
    vid: dict[Subspace, int] = {}
    vertex_dims = []
    vertex_spaces = []
    for k in range(1, r):
        for s in by_dim[k]:
            vid[s] = len(vertex_dims)
            vertex_dims.append(k)
            vertex_spaces.append(s)
    if r == 2:
        facets = [(vid[s],) for s in by_dim[1]]
    else:
        # Maximal flags u_1 < u_2 < ... < u_{r-1}; incidence via rank tests.
        contain: dict[int, list[tuple[Subspace, list[Subspace]]]] = {}
        for k in range(1, r - 1):
            contain[k] = [
                (s, [t for t in by_dim[k + 1] if t.contains_space(s)])
                for s in by_dim[k]
            ]
        flags: list[list[Subspace]] = [[s] for s in by_dim[1]]
        for k in range(1, r - 1):
            ups = {s: t for s, t in contain[k]}
            flags = [fl + [t] for fl in flags for t in ups[fl[-1]]]
        facets = [tuple(sorted(vid[s] for s in fl)) for fl in flags]
    labels = {
        "kind": "spherical_building",
        "r": r,
        "q": q,
        "vertex_dims": tuple(vertex_dims),
        "vertex_spaces": tuple(vertex_spaces),
    }
    return Complex(facets, labels=labels)


def color_cells(x: Complex) -> tuple[str, ...]:
    """Per-vertex black/white coloring of an r=4 building-typed complex.

    Black marks the vertices for 1- and 3-dimensional subspaces, white the
    2-dimensional ones.
    """
    if not x.labels or x.labels.get("kind") != "spherical_building":
        raise NotAnnotated("complex carries no subspace annotations")
    if x.labels["r"] != 4:
        raise NotAnnotated("black/white coloring is defined for r=4 only")
    return tuple("b" if d in (1, 3) else "w" for d in x.labels["vertex_dims"])


@dataclass(frozen=True)
class BipartiteSectionGraph:
    """Inclusion graph between the dim-i and dim-j subspaces of F_q^r."""

    r: int
    q: int
    i: int
    j: int
    left: tuple[Subspace, ...]
    right: tuple[Subspace, ...]
    edges: tuple[tuple[int, int], ...]
    left_degree: int
    right_degree: int


def section_graph(r: int, q: int, i: int, j: int) -> BipartiteSectionGraph:
    """The bipartite graph Z_{i,j}: U ~ W iff U < W."""
    if not 1 <= i < j <= r - 1:
        raise BadParameter(f"need 1 <= i < j <= r-1, got i={i}, j={j}")
    left = tuple(enumerate_subspaces(r, q, i))
    right = tuple(enumerate_subspaces(r, q, j))
    edges = []
    for a, u in enumerate(left):
        for b, w in enumerate(right):
            if w.contains_space(u):
                edges.append((a, b))
    k_left = gaussian_binomial(r - i, j - i, q)
    k_right = gaussian_binomial(j, i, q)
    assert len(edges) == len(left) * k_left == len(right) * k_right
    return BipartiteSectionGraph(r, q, i, j, left, right, tuple(edges), k_left, k_right)


def building_cone(q: int, r: int = 4, vertex_cap: int = 200_000) -> Complex:
    """Cone over S(r,q): the closed star of a vertex whose link is the building.

    The edges from the apex inherit the black/white coloring of their
    endpoint, recorded in labels["edge_colors"] (edge index -> 'b'/'w');
    base edges carry no color.
    """
    base = spherical_building(r, q, vertex_cap)
    colors = color_cells(base)
    x = cone(base)
    apex = max(x.vertices)
    edge_colors = {}
    for k, e in enumerate(x.cells_by_dim[1]):
        if apex in e:
            other = e[0] if e[1] == apex else e[1]
            edge_colors[k] = colors[other]
    x.labels = {
        "kind": "building_cone",
        "r": r,
        "q": q,
        "apex": apex,
        "edge_colors": edge_colors,
        "vertex_dims": base.labels["vertex_dims"] + (None,),
    }
    return x
