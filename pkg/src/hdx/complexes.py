"""Pure simplicial complexes with exact weighted norms and cochain restriction.

Cells are sorted vertex tuples, indexed lexicographically per dimension.
Norms use exact rational arithmetic so every identity in the test suite can
be asserted as an equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadDimension,
    BadParameter,
    DimensionMismatch,
    EmptyInput,
    MixedDimensions,
    NotACell,
)

Cell = tuple[int, ...]


@dataclass(frozen=True)
class Cochain:
    """An F2 i-cochain as a bit vector over the indexed cell set X(i)."""

    dim: int
    bits: int
    length: int

    def __post_init__(self):
        if self.bits >> self.length:
            raise BadParameter("support bits exceed the cell count")

    @property
    def size(self) -> int:
        """Counting norm |alpha| (population count)."""
        return self.bits.bit_count()

    def __xor__(self, other: "Cochain") -> "Cochain":
        if (self.dim, self.length) != (other.dim, other.length):
            raise DimensionMismatch("cochains live on different cell sets")
        return Cochain(self.dim, self.bits ^ other.bits, self.length)

    def __bool__(self) -> bool:
        return self.bits != 0

    def indices(self) -> list[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]


@dataclass(frozen=True)
class WeightTable:
    """Exact c(sigma) and w(sigma) for one dimension; the weights sum to 1."""

    dim: int
    c_values: tuple[int, ...]
    w_values: tuple[Fraction, ...]
    denominator: int


class Complex:
    """A d-dimensional simplicial complex with indexed cells per dimension.

    Instances are immutable after construction; all operations are pure
    reads, so sharing across threads is safe.
    """

    def __init__(self, facets: Sequence[Cell], *, full_skeleton_on: Sequence[int] | None = None,
                 labels: Mapping | None = None):
        facets = [tuple(sorted(f)) for f in facets]
        if not facets:
            raise EmptyInput("a complex needs at least one facet")
        sizes = {len(f) for f in facets}
        if len(sizes) != 1:
            raise MixedDimensions(f"facet sizes differ: {sorted(sizes)}")
        for f in facets:
            if len(set(f)) != len(f):
                raise BadParameter(f"facet {f} repeats a vertex")
            if any(v < 0 for v in f):
                raise BadParameter("vertex ids must be non-negative")
        self.d = len(facets[0]) - 1
        cells: dict[int, set[Cell]] = {i: set() for i in range(self.d + 1)}
        for f in facets:
            for i in range(self.d + 1):
                for c in combinations(f, i + 1):
                    cells[i].add(c)
        if full_skeleton_on is not None:
            # Used by the random-complex generator: force the complete
            # (d-1)-skeleton over the given vertex set.
            vs = sorted(full_skeleton_on)
            for i in range(self.d):
                cells[i].update(combinations(vs, i + 1))
        self.cells_by_dim: dict[int, tuple[Cell, ...]] = {
            i: tuple(sorted(cells[i])) for i in range(self.d + 1)
        }
        self.index: dict[int, dict[Cell, int]] = {
            i: {c: k for k, c in enumerate(self.cells_by_dim[i])}
            for i in range(self.d + 1)
        }
        self.vertices: tuple[int, ...] = tuple(c[0] for c in self.cells_by_dim[0])
        self.n_vertices = len(self.vertices)
        self.facets: tuple[Cell, ...] = self.cells_by_dim[self.d]
        # m(i): number of i-cells containing a fixed vertex, when constant.
        per_vertex: dict[int, dict[int, int]] = {i: {} for i in range(self.d + 1)}
        for i in range(self.d + 1):
            counts = {v: 0 for v in self.vertices}
            for c in self.cells_by_dim[i]:
                for v in c:
                    counts[v] += 1
            per_vertex[i] = counts
        self.m_table: dict[int, int | None] = {}
        for i in range(self.d + 1):
            vals = set(per_vertex[i].values())
            self.m_table[i] = vals.pop() if len(vals) == 1 else None
        self.is_homogeneous = all(self.m_table[i] is not None for i in range(self.d + 1))
        # Pure: every (d-1)-cell lies in some facet.  from_facets input is
        # pure by construction; the flag matters for generator output with a
        # forced full skeleton.
        covered = set()
        for f in self.facets:
            covered.update(combinations(f, self.d))
        self.is_pure = self.d == 0 or covered == set(self.cells_by_dim[self.d - 1])
        self.labels = dict(labels) if labels else None
        self._cache: dict = {}

    # -- basics ---------------------------------------------------------

    def cells(self, i: int) -> tuple[Cell, ...]:
        if i == -1:
            return ((),)
        if not 0 <= i <= self.d:
            raise BadDimension(f"no cells of dimension {i}")
        return self.cells_by_dim[i]

    def num_cells(self, i: int) -> int:
        return len(self.cells(i))

    def cell_index(self, cell: Cell) -> int:
        cell = tuple(sorted(cell))
        i = len(cell) - 1
        try:
            return self.index[i][cell]
        except KeyError:
            raise NotACell(f"{cell} is not a cell of this complex")

    def has_cell(self, cell: Cell) -> bool:
        cell = tuple(sorted(cell))
        i = len(cell) - 1
        return i in self.index and cell in self.index[i]

    def cochain(self, i: int, bits: int = 0) -> Cochain:
        return Cochain(i, bits, self.num_cells(i))

    def cochain_from_cells(self, i: int, cells: Iterable[Cell]) -> Cochain:
        bits = 0
        for c in cells:
            k = self.cell_index(tuple(sorted(c)))
            if len(c) - 1 != i:
                raise DimensionMismatch(f"{c} is not an {i}-cell")
            bits |= 1 << k
        return Cochain(i, bits, self.num_cells(i))

    def support(self, alpha: Cochain) -> list[Cell]:
        cells = self.cells(alpha.dim)
        return [cells[j] for j in alpha.indices()]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Complex)
            and self.d == other.d
            and self.cells_by_dim == other.cells_by_dim
        )

    def __hash__(self):
        return hash((self.d, self.facets))

    def __repr__(self):
        counts = ",".join(str(self.num_cells(i)) for i in range(self.d + 1))
        return f"Complex(d={self.d}, cells=({counts}))"


@dataclass(frozen=True)
class LinkView:
    """The link of a cell, with the bijection back to the parent complex.

    `to_parent[j][k]` is the parent index of the k-th j-cell of the link
    (the cell union the base); `from_parent[j]` inverts it.
    """

    parent: Complex
    base: Cell
    link_complex: Complex
    to_parent: dict[int, tuple[int, ...]]
    from_parent: dict[int, dict[int, int]]


def from_facets(facets: Sequence[Iterable[int]]) -> Complex:
    """Build a pure complex from its facet list."""
    return Complex([tuple(f) for f in facets])


def complete_complex(n: int, d: int) -> Complex:
    """The complete d-dimensional complex on n vertices."""
    if n <= d:
        raise BadDimension(f"need n > d, got n={n}, d={d}")
    return Complex(list(combinations(range(n), d + 1)))


def skeleton(x: Complex, k: int) -> Complex:
    """The k-skeleton as a pure k-dimensional complex."""
    if not 0 <= k <= x.d:
        raise BadDimension(f"no {k}-skeleton of a {x.d}-complex")
    return Complex(list(x.cells_by_dim[k]), labels=x.labels)


def cone(x: Complex, apex: int | None = None) -> Complex:
    """The cone over x: every facet gains a fresh apex vertex."""
    if apex is None:
        apex = max(x.vertices) + 1
    if apex in x.vertices:
        raise BadParameter("apex collides with an existing vertex")
    return Complex([f + (apex,) for f in x.facets])


def link(x: Complex, base: Iterable[int]) -> LinkView:
    """The link of `base`, as a complex plus the cell bijection."""
    base = tuple(sorted(base))
    if not x.has_cell(base):
        raise NotACell(f"{base} is not a cell")
    if len(base) - 1 == x.d:
        raise BadDimension("the link of a facet is the void complex")
    bset = set(base)
    link_facets = [
        tuple(v for v in f if v not in bset)
        for f in x.facets
        if bset.issubset(f)
    ]
    lc = Complex(link_facets)
    to_parent: dict[int, tuple[int, ...]] = {}
    from_parent: dict[int, dict[int, int]] = {}
    for j in range(lc.d + 1):
        fwd = []
        inv = {}
        for k, c in enumerate(lc.cells_by_dim[j]):
            pidx = x.cell_index(tuple(sorted(c + base)))
            fwd.append(pidx)
            inv[pidx] = k
        to_parent[j] = tuple(fwd)
        from_parent[j] = inv
    return LinkView(x, base, lc, to_parent, from_parent)


def vertex_link(x: Complex, v: int) -> LinkView:
    """Cached link of a single vertex."""
    key = ("vlink", v)
    if key not in x._cache:
        x._cache[key] = link(x, (v,))
    return x._cache[key]


def weight_table(x: Complex, i: int) -> WeightTable:
    """c(sigma) and w(sigma) = c(sigma) / (C(d+1,i+1) |X(d)|) for all i-cells."""
    if not 0 <= i <= x.d:
        raise BadDimension(f"no weight table for dimension {i}")
    key = ("weights", i)
    if key in x._cache:
        return x._cache[key]
    counts = [0] * x.num_cells(i)
    for f in x.facets:
        for c in combinations(f, i + 1):
            counts[x.index[i][c]] += 1
    denom = comb(x.d + 1, i + 1) * len(x.facets)
    table = WeightTable(
        dim=i,
        c_values=tuple(counts),
        w_values=tuple(Fraction(c, denom) for c in counts),
        denominator=denom,
    )
    x._cache[key] = table
    return table


def norm(x: Complex, alpha: Cochain) -> Fraction:
    """The weighted norm of a cochain, an exact rational in [0, 1]."""
    if alpha.length != x.num_cells(alpha.dim):
        raise DimensionMismatch("cochain is indexed against a different complex")
    wt = weight_table(x, alpha.dim)
    total = 0
    bits = alpha.bits
    while bits:
        j = (bits & -bits).bit_length() - 1
        total += wt.c_values[j]
        bits &= bits - 1
    return Fraction(total, wt.denominator)


def norm_numerator(x: Complex, i: int, bits: int) -> int:
    """Integer numerator of the norm over the common denominator for dim i."""
    wt = weight_table(x, i)
    total = 0
    while bits:
        j = (bits & -bits).bit_length() - 1
        total += wt.c_values[j]
        bits &= bits - 1
    return total


def restrict(x: Complex, alpha: Cochain, v: int) -> Cochain:
    """The restriction alpha_v on the link of v: alpha_v(s \\ {v}) = alpha(s)."""
    if alpha.dim < 1:
        raise DimensionMismatch("restriction needs dim >= 1")
    lv = vertex_link(x, v)
    j = alpha.dim - 1
    bits = 0
    for k, pidx in enumerate(lv.to_parent[j]):
        if (alpha.bits >> pidx) & 1:
            bits |= 1 << k
    return Cochain(j, bits, lv.link_complex.num_cells(j))


def link_triangle_restriction(x: Complex, beta: Cochain, v: int) -> Cochain:
    """The second induced cochain: beta restricted to the cells of the link.

    A j-cell of the link is itself a j-cell of the parent; the value is just
    beta on that cell.  Used by the vertex-split identity for 3-complexes.
    """
    lv = vertex_link(x, v)
    j = beta.dim
    if j > lv.link_complex.d:
        raise DimensionMismatch("link has no cells of this dimension")
    bits = 0
    for k, c in enumerate(lv.link_complex.cells_by_dim[j]):
        if x.has_cell(c) and (beta.bits >> x.cell_index(c)) & 1:
            bits |= 1 << k
    return Cochain(j, bits, lv.link_complex.num_cells(j))


def random_cochain(x: Complex, i: int, rng: random.Random, density: float = 0.5) -> Cochain:
    """Seeded random cochain; each cell included independently."""
    n = x.num_cells(i)
    if density == 0.5:
        return Cochain(i, rng.getrandbits(n) if n else 0, n)
    bits = 0
    for j in range(n):
        if rng.random() < density:
            bits |= 1 << j
    return Cochain(i, bits, n)


# -- generators ----------------------------------------------------------

_RP2_FACETS = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5),
]


def rp2_six_vertex() -> Complex:
    """The 6-vertex triangulation of the real projective plane."""
    return Complex(_RP2_FACETS)


def sphere_boundary(d: int) -> Complex:
    """The boundary of the (d+1)-simplex, a triangulated d-sphere."""
    if d < 0:
        raise BadDimension("d must be non-negative")
    return Complex(list(combinations(range(d + 2), d + 1)))


def linial_meshulam(n: int, d: int, p: float, seed: int) -> Complex:
    """Random complex: full (d-1)-skeleton, each d-cell kept with probability p.

    Reproducible from the seed.  With p = 0 the result is the complete
    (d-1)-dimensional complex; intermediate p can leave (d-1)-cells uncovered,
    which the `is_pure` flag records.
    """
    if not 0.0 <= p <= 1.0:
        raise BadParameter("p must be in [0, 1]")
    if n <= d:
        raise BadDimension(f"need n > d, got n={n}, d={d}")
    rng = random.Random(seed)
    top = [c for c in combinations(range(n), d + 1) if rng.random() < p]
    if not top:
        return complete_complex(n, d - 1)
    return Complex(top, full_skeleton_on=range(n))
