"""Graph extraction, dense spectra, and Cheeger/mixing inequality checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .buildings import BipartiteSectionGraph
from .complexes import Complex
from .errors import BadParameter, CapExceeded, NotBiRegular

SPECTRAL_TOL = 1e-8
DENSE_CAP = 5000


@dataclass(frozen=True)
class Graph:
    """An undirected graph as a symmetric 0/1 adjacency matrix.

    `bipartition`, when present, is a pair of vertex-index tuples forming a
    proper 2-coloring.
    """

    n: int
    adjacency: np.ndarray
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    neighbor_masks: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        a = self.adjacency
        if a.shape != (self.n, self.n):
            raise BadParameter("adjacency shape does not match n")
        if (a != a.T).any():
            raise BadParameter("adjacency must be symmetric")
        if np.diagonal(a).any():
            raise BadParameter("adjacency must have a zero diagonal")
        if self.bipartition is not None:
            left, right = self.bipartition
            if sorted(left + right) != list(range(self.n)):
                raise BadParameter("bipartition must cover all vertices once")
            for side in (left, right):
                if a[np.ix_(side, side)].any():
                    raise BadParameter("bipartition is not a proper 2-coloring")
        masks = []
        for v in range(self.n):
            m = 0
            for u in np.flatnonzero(a[v]):
                m |= 1 << int(u)
            masks.append(m)
        object.__setattr__(self, "neighbor_masks", tuple(masks))

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def regular_degree(self) -> int | None:
        degs = set(self.degrees.tolist())
        return degs.pop() if len(degs) == 1 else None

    def edge_count_between(self, a_set: Iterable[int], b_set: Iterable[int]) -> int:
        """|E(A,B)| counting each unordered edge with one end in each set once.

        For overlapping sets, edges inside the intersection count once, per
        the convention E(W) = E(W,W).
        """
        amask = 0
        for v in a_set:
            amask |= 1 << v
        bmask = 0
        for v in b_set:
            bmask |= 1 << v
        total = 0
        for v in range(self.n):
            if (amask >> v) & 1:
                total += (self.neighbor_masks[v] & bmask).bit_count()
        # Ordered count above double-counts edges with both ends in A and B.
        both = amask & bmask
        inner = 0
        for v in range(self.n):
            if (both >> v) & 1:
                inner += (self.neighbor_masks[v] & both).bit_count()
        return (total - inner) + inner // 2


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]],
                     bipartition=None) -> Graph:
    a = np.zeros((n, n), dtype=np.int64)
    for u, v in edges:
        if u == v:
            raise BadParameter("self loops are not allowed")
        a[u, v] = 1
        a[v, u] = 1
    return Graph(n, a, bipartition)


def one_skeleton(x: Complex) -> Graph:
    """The graph on X(0) with the 1-cells of x as edges."""
    if x.d < 1:
        return Graph(x.n_vertices, np.zeros((x.n_vertices, x.n_vertices), dtype=np.int64))
    pos = {v: k for k, v in enumerate(x.vertices)}
    edges = [(pos[a], pos[b]) for a, b in x.cells_by_dim[1]]
    return graph_from_edges(x.n_vertices, edges)


def section_graph_to_graph(z: BipartiteSectionGraph) -> Graph:
    nl, nr = len(z.left), len(z.right)
    edges = [(a, nl + b) for a, b in z.edges]
    bip = (tuple(range(nl)), tuple(range(nl, nl + nr)))
    return graph_from_edges(nl + nr, edges, bipartition=bip)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: tuple[float, ...]  # sorted descending
    lambda1_laplacian: float        # second-smallest Laplacian eigenvalue
    second_adjacency: float         # second-largest adjacency eigenvalue
    regular: int | None
    max_residual: float
    tolerance: float = SPECTRAL_TOL


def spectrum(g: Graph, cap: int = DENSE_CAP) -> SpectralReport:
    """Full symmetric spectrum with residual verification."""
    if g.n > cap:
        raise CapExceeded(f"graph has {g.n} vertices (cap {cap})")
    a = g.adjacency.astype(np.float64)
    vals, vecs = np.linalg.eigh(a)
    residual = np.abs(a @ vecs - vecs * vals).max() if g.n else 0.0
    if residual > SPECTRAL_TOL:
        raise ArithmeticError(f"eigen residual {residual} above tolerance")
    deg = np.diag(g.degrees.astype(np.float64))
    lap_vals = np.linalg.eigvalsh(deg - a)
    lam1 = float(np.sort(lap_vals)[1]) if g.n > 1 else 0.0
    desc = np.sort(vals)[::-1]
    return SpectralReport(
        eigenvalues=tuple(float(v) for v in desc),
        lambda1_laplacian=lam1,
        second_adjacency=float(desc[1]) if g.n > 1 else 0.0,
        regular=g.regular_degree,
        max_residual=float(residual),
    )


@dataclass(frozen=True)
class CheegerReport:
    cut_size: int
    cut_bound: float
    cut_holds: bool
    within_size: int | None
    within_bound: float | None
    within_holds: bool | None
    lambda1: float


def cheeger_check(g: Graph, w: Iterable[int], report: SpectralReport | None = None) -> CheegerReport:
    """Check the lambda_1 lower bound on |E(W, W-complement)|.

    For regular graphs also checks the companion upper bound on the number
    of edges inside W.
    """
    w = sorted(set(w))
    if not 0 < len(w) < g.n:
        raise BadParameter("W must be a proper nonempty vertex subset")
    if report is None:
        report = spectrum(g)
    lam1 = report.lambda1_laplacian
    comp = [v for v in range(g.n) if v not in set(w)]
    cut = g.edge_count_between(w, comp)
    bound = len(w) * len(comp) / g.n * lam1
    tol = SPECTRAL_TOL * max(1.0, abs(bound))
    k = g.regular_degree
    within = within_bound = within_holds = None
    if k is not None:
        within = g.edge_count_between(w, w)
        assert 2 * within == k * len(w) - cut
        within_bound = 0.5 * (k - len(comp) / g.n * lam1) * len(w)
        within_holds = within <= within_bound + SPECTRAL_TOL * max(1.0, abs(within_bound))
    return CheegerReport(
        cut_size=cut,
        cut_bound=bound,
        cut_holds=cut >= bound - tol,
        within_size=within,
        within_bound=within_bound,
        within_holds=within_holds,
        lambda1=lam1,
    )


def cheeger_constant(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """h(X) by exhaustive minimization over all proper nonempty subsets."""
    if g.n > 22:
        raise CapExceeded("exhaustive Cheeger constant limited to 22 vertices")
    best = None
    best_w = None
    full = (1 << g.n) - 1
    for mask in range(1, full):
        cut = 0
        size = 0
        for v in range(g.n):
            if (mask >> v) & 1:
                size += 1
                cut += (g.neighbor_masks[v] & ~mask & full).bit_count()
        val = Fraction(cut, min(size, g.n - size))
        if best is None or val < best:
            best = val
            best_w = mask
    w = tuple(v for v in range(g.n) if (best_w >> v) & 1)
    return best, w


@dataclass(frozen=True)
class MixingReport:
    edge_count: int
    main_term: float
    deviation: float
    bound: float
    holds: bool
    lam: float


def mixing_check(g: Graph, a_set: Iterable[int], b_set: Iterable[int],
                 report: SpectralReport | None = None) -> MixingReport:
    """Bipartite bi-regular mixing: | |E(A,B)| - sqrt(k'k'')|A||B|/sqrt(|V'||V''|) |
    is at most lambda * sqrt(|A||B|), with lambda the second-largest
    adjacency eigenvalue (computed, not assumed)."""
    if g.bipartition is None:
        raise NotBiRegular("graph carries no bipartition")
    left, right = g.bipartition
    degs = g.degrees
    kl = {int(degs[v]) for v in left}
    kr = {int(degs[v]) for v in right}
    if len(kl) != 1 or len(kr) != 1:
        raise NotBiRegular("graph is not bi-regular")
    a_set, b_set = sorted(set(a_set)), sorted(set(b_set))
    if not set(a_set) <= set(left) or not set(b_set) <= set(right):
        raise BadParameter("A must lie in V', B in V''")
    if report is None:
        report = spectrum(g)
    lam = report.second_adjacency
    e_ab = g.edge_count_between(a_set, b_set)
    main = (
        (kl.pop() * kr.pop()) ** 0.5 * len(a_set) * len(b_set)
        / (len(left) * len(right)) ** 0.5
    )
    deviation = abs(e_ab - main)
    bound = lam * (len(a_set) * len(b_set)) ** 0.5
    tol = SPECTRAL_TOL * max(1.0, abs(bound))
    return MixingReport(e_ab, main, deviation, bound, deviation <= bound + tol, lam)


@dataclass(frozen=True)
class TsetReport:
    edges_within: int
    union_size: int
    ratio: Fraction | None  # None when vacuous
    size_bound_violations: tuple[str, ...]
    degree_bound_violations: tuple[str, ...]


def tset_mixing_report(
    building: Complex,
    t_sets: Sequence[Iterable[int]],
    edge_sets: dict[int, Iterable[int]],
) -> TsetReport:
    """Ratio |E(T,T)| / |union of E(t)| for T = T_1 u T_2 u T_3 in S(4,q).

    `t_sets` gives the three parts by subspace dimension; `edge_sets` maps a
    vertex t to the neighbors spanning its chosen edge set E(t).  The size
    hypotheses are checked and reported, never enforced; the ratio is an
    exact rational and the asymptotic claim is left to the caller to read
    as a trend across q.
    """
    if not building.labels or "vertex_dims" not in (building.labels or {}):
        raise BadParameter("building must carry subspace annotations")
    q = building.labels["q"]
    dims = building.labels["vertex_dims"]
    graph = one_skeleton(building)
    t_all = set()
    size_viol = []
    for part_idx, part in enumerate(t_sets, start=1):
        part = set(part)
        for t in part:
            if dims[t] != part_idx:
                raise BadParameter(f"vertex {t} is not in M_{part_idx}")
        limit = q ** 2.75 if part_idx in (1, 3) else q ** 3.7
        if len(part) > limit:
            size_viol.append(f"|T_{part_idx}|={len(part)} > q^{2.75 if part_idx in (1,3) else 3.7}")
        t_all |= part
    deg_viol = []
    union_edges = set()
    for t in sorted(t_all):
        nbrs = set(edge_sets.get(t, ()))
        for u in nbrs:
            if not (graph.adjacency[t, u]):
                raise BadParameter(f"({t},{u}) is not an edge of the building")
            union_edges.add((min(t, u), max(t, u)))
        floor = q ** 1.8 if dims[t] in (1, 3) else q ** 0.9
        if len(nbrs) <= floor:
            deg_viol.append(f"|E({t})|={len(nbrs)} <= q^{1.8 if dims[t] in (1,3) else 0.9}")
    within = graph.edge_count_between(t_all, t_all) if t_all else 0
    ratio = Fraction(within, len(union_edges)) if union_edges else None
    return TsetReport(within, len(union_edges), ratio,
                      tuple(size_viol), tuple(deg_viol))
