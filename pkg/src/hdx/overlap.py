"""Counting-lemma verifiers, the fill-bound pipeline, and planar overlap depth.

Every counting identity is checked as an exact integer/rational equality,
with both sides reported.  The overlap estimator uses exact rational
orientation predicates, so its value is a certified depth for the given
placement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import gf2
from .cohomology import coboundary, coboundary_matrix
from .complexes import (
    Cochain,
    Complex,
    link_triangle_restriction,
    norm,
    random_cochain,
    restrict,
    skeleton,
    vertex_link,
    weight_table,
)
from .errors import BadDimension, BadParameter, DimensionMismatch, NotAnnotated
from .minimization import locally_minimize


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: object
    rhs: object

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class TriangleCountVector:
    """t[i] = number of top cells meeting the cochain in exactly i faces."""

    t: tuple[int, ...]
    checks: tuple[IdentityCheck, ...]

    def check(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def _triangle_vector(x: Complex, alpha: Cochain) -> tuple[int, ...]:
    if alpha.dim != 1:
        raise DimensionMismatch("edge cochain expected")
    t = [0, 0, 0, 0]
    idx1 = x.index[1]
    for tri in x.cells_by_dim[2]:
        k = sum(1 for e in combinations(tri, 2) if (alpha.bits >> idx1[e]) & 1)
        t[k] += 1
    return tuple(t)


def _link_cut_sum_over_vertices(x: Complex, alpha: Cochain) -> int:
    """Sum over v of the cut size of alpha_v in the link graph of v.

    A triangle contributes, at each of its vertices, one link edge between
    its two edges through that vertex; the edge is counted when exactly one
    of the pair lies in alpha.
    """
    idx1 = x.index[1]
    total = 0
    for tri in x.cells_by_dim[2]:
        a, b, c = tri
        bits = [
            (alpha.bits >> idx1[(min(u, v), max(u, v))]) & 1
            for u, v in ((a, b), (a, c), (b, c))
        ]
        # pairs through each vertex: a: (ab, ac); b: (ab, bc); c: (ac, bc)
        total += (bits[0] ^ bits[1]) + (bits[0] ^ bits[2]) + (bits[1] ^ bits[2])
    return total


def triangle_counts(x: Complex, alpha: Cochain) -> TriangleCountVector:
    """Triangle statistics of an edge cochain with the three exact identities.

    The weighted identity is kept in its general form (sum of per-edge
    triangle counts); the constant specialization is asserted only when
    every edge lies in the same number of triangles.
    """
    if x.d < 2:
        raise BadDimension("triangle counting needs dimension >= 2")
    t = _triangle_vector(x, alpha)
    per_edge = [0] * x.num_cells(1)
    idx1 = x.index[1]
    for tri in x.cells_by_dim[2]:
        for e in combinations(tri, 2):
            per_edge[idx1[e]] += 1
    weighted_rhs = sum(per_edge[j] for j in alpha.indices())
    checks = [
        IdentityCheck("weighted", t[1] + 2 * t[2] + 3 * t[3], weighted_rhs),
        IdentityCheck("coboundary", coboundary_size(x, alpha), t[1] + t[3]),
        IdentityCheck("link_cuts", _link_cut_sum_over_vertices(x, alpha),
                      2 * t[1] + 2 * t[2]),
    ]
    const = set(per_edge)
    if len(const) == 1:
        k = const.pop()
        checks.append(IdentityCheck("weighted_constant",
                                    t[1] + 2 * t[2] + 3 * t[3], k * alpha.size))
    return TriangleCountVector(t, tuple(checks))


def coboundary_size(x: Complex, alpha: Cochain) -> int:
    """|delta(alpha)| computed by the cohomology module (independent route)."""
    return coboundary(x, alpha).size


def triangle_counts_3d(x: Complex, alpha: Cochain,
                       colors: Mapping[int, str] | None = None,
                       q: int | None = None) -> TriangleCountVector:
    """Triangle statistics on a 3-complex, with the colored identity.

    The colored form needs every supported edge colored and the field order
    q; it states that the weighted count equals 2(q+1) times the colored
    norm, which is exact on building-typed stars.
    """
    if x.d != 3:
        raise BadDimension("expected a 3-complex")
    base = triangle_counts(x, alpha)
    checks = list(base.checks)
    if colors is None and x.labels:
        colors = x.labels.get("edge_colors")
    if q is None and x.labels:
        q = x.labels.get("q")
    if colors is None or q is None:
        raise NotAnnotated("colored identity needs edge colors and q")
    black = white = 0
    for j in alpha.indices():
        c = colors.get(j)
        if c is None:
            raise NotAnnotated(f"edge {j} carries no color")
        black += c == "b"
        white += c == "w"
    t = base.t
    colored_rhs = 2 * (q * q + q + 1) * black + 2 * (q + 1) * white
    checks.append(IdentityCheck("weighted_colored", t[1] + 2 * t[2] + 3 * t[3], colored_rhs))
    return TriangleCountVector(t, tuple(checks))


@dataclass(frozen=True)
class PyramidCountVector:
    t: tuple[int, ...]
    checks: tuple[IdentityCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def pyramid_counts(x: Complex, beta: Cochain) -> PyramidCountVector:
    """Top-cell statistics of a triangle cochain on a 3-complex."""
    if x.d != 3:
        raise BadDimension("expected a 3-complex")
    if beta.dim != 2:
        raise DimensionMismatch("triangle cochain expected")
    idx2 = x.index[2]
    idx1 = x.index[1]
    t = [0] * 5
    link_cut_sum = 0
    for pyr in x.cells_by_dim[3]:
        tris = list(combinations(pyr, 3))
        inb = [(beta.bits >> idx2[tr]) & 1 for tr in tris]
        t[sum(inb)] += 1
        # Each of the 6 edges of the pyramid pairs the two triangles
        # containing it; the pair contributes when exactly one is in beta.
        for a, b in combinations(range(4), 2):
            if inb[a] ^ inb[b]:
                link_cut_sum += 1
    per_edge_alpha = [0] * x.num_cells(1)
    per_tri_pyr = [0] * x.num_cells(2)
    for pyr in x.cells_by_dim[3]:
        for tr in combinations(pyr, 3):
            per_tri_pyr[idx2[tr]] += 1
    for k in beta.indices():
        for e in combinations(x.cells_by_dim[2][k], 2):
            per_edge_alpha[idx1[e]] += 1
    weighted_rhs = sum(per_tri_pyr[k] for k in beta.indices())
    checks = [
        IdentityCheck("edge_sum", sum(per_edge_alpha), 3 * beta.size),
        IdentityCheck("weighted", t[1] + 2 * t[2] + 3 * t[3] + 4 * t[4], weighted_rhs),
        IdentityCheck("link_cuts", link_cut_sum, 3 * t[1] + 4 * t[2] + 3 * t[3]),
        IdentityCheck("coboundary", coboundary_size(x, beta), t[1] + t[3]),
    ]
    const = set(per_tri_pyr)
    if len(const) == 1:
        k = const.pop()
        checks.append(IdentityCheck("weighted_constant",
                                    t[1] + 2 * t[2] + 3 * t[3] + 4 * t[4],
                                    k * beta.size))
    return PyramidCountVector(tuple(t), tuple(checks))


@dataclass(frozen=True)
class VertexSplitReport:
    delta2_size: int
    split_sum: int
    equality: IdentityCheck
    subadditive_bound: int
    constant_pyramids: int | None
    checks: tuple[IdentityCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks) and self.delta2_size * 4 >= self.subadditive_bound


def vertex_split_check(x: Complex, beta: Cochain) -> VertexSplitReport:
    """The vertex decomposition of |delta_2(beta)| on a 3-complex.

    Summing over vertices, a top cell with an odd number of beta-triangles
    is seen once per vertex through the pair (link coboundary of the edge
    restriction, link restriction), giving 4|delta_2 beta| exactly.
    """
    if x.d != 3 or beta.dim != 2:
        raise DimensionMismatch("triangle cochain on a 3-complex expected")
    split_sum = 0
    sum_delta1 = 0
    sum_beta2 = 0
    for v in x.vertices:
        lc = vertex_link(x, v).link_complex
        bv1 = restrict(x, beta, v)
        bv2 = link_triangle_restriction(x, beta, v)
        d1 = coboundary(lc, bv1)
        split_sum += (d1.bits ^ bv2.bits).bit_count()
        sum_delta1 += d1.size
        sum_beta2 += bv2.size
    d2 = coboundary(x, beta)
    wt = weight_table(x, 2)
    const = set(wt.c_values)
    constant = const.pop() if len(const) == 1 else None
    checks = [
        IdentityCheck("split_equality", 4 * d2.size, split_sum),
        IdentityCheck("restriction_total", sum_beta2,
                      sum(wt.c_values[k] for k in beta.indices())),
    ]
    if constant is not None:
        checks.append(IdentityCheck("restriction_total_constant",
                                    sum_beta2, constant * beta.size))
    return VertexSplitReport(
        delta2_size=d2.size,
        split_sum=split_sum,
        equality=checks[0],
        subadditive_bound=sum_delta1 - sum_beta2,
        constant_pyramids=constant,
        checks=tuple(checks),
    )


# -- fill-bound pipeline ----------------------------------------------------


@dataclass(frozen=True)
class FillPipelineSample:
    beta: Cochain
    alpha: Cochain
    branch: str
    beta_norm: Fraction
    alpha_norm: Fraction
    mu_claimed: Fraction
    delta_matches: bool
    bound_holds: bool


@dataclass(frozen=True)
class FillPipelineReport:
    i: int
    eta: Fraction
    samples: tuple[FillPipelineSample, ...]

    @property
    def all_certified(self) -> bool:
        return all(s.delta_matches and s.bound_holds for s in self.samples)


def mu_pipeline_report(x: Complex, i: int, eta: Fraction,
                       samples: int = 8, seed: int = 0) -> FillPipelineReport:
    """Run the fill-bound procedure on sampled coboundaries of the 2-skeleton.

    For each sampled beta in B^{i+1}(Y), Y the 2-skeleton of x, the produced
    alpha satisfies delta(alpha) = beta, and the report records which branch
    of max(1/eta, (2-i)/(i+2) m(i)) justified the bound for the given eta.
    This validates the pipeline's logic on instances, not any theorem
    constants.
    """
    if x.d != 3:
        raise BadDimension("the pipeline consumes a pure 3-complex")
    if not 0 <= i <= 1:
        raise BadParameter("i must be 0 or 1")
    eta = Fraction(eta)
    if eta <= 0:
        raise BadParameter("eta must be positive")
    y = skeleton(x, 2)
    m_i = y.m_table[i]
    if m_i is None:
        raise BadParameter("skeleton is not homogeneous in dimension i")
    mu_claimed = max(Fraction(1, 1) / eta, Fraction(2 - i, i + 2) * m_i)
    rng = random.Random(seed)
    mat = coboundary_matrix(y, i)
    out = []
    for _ in range(samples):
        a0 = random_cochain(y, i, rng)
        beta = coboundary(y, a0)
        bnorm = norm(y, beta)
        if bnorm > eta:
            sol = gf2.solve(mat.bits, beta.bits, mat.cols)
            alpha = Cochain(i, sol, y.num_cells(i))
            branch = "norm-exceeds-eta"
        else:
            bprime, trace = locally_minimize(y, beta)
            if not bprime:
                alpha = trace.total_gamma
                branch = "descent-reached-zero"
            else:
                sol = gf2.solve(mat.bits, beta.bits, mat.cols)
                alpha = Cochain(i, sol, y.num_cells(i))
                branch = "descent-stuck"
        anorm = norm(y, alpha)
        out.append(FillPipelineSample(
            beta=beta,
            alpha=alpha,
            branch=branch,
            beta_norm=bnorm,
            alpha_norm=anorm,
            mu_claimed=mu_claimed,
            delta_matches=coboundary(y, alpha).bits == beta.bits,
            bound_holds=anorm <= mu_claimed * bnorm,
        ))
    return FillPipelineReport(i, eta, tuple(out))


# -- geometric overlap -------------------------------------------------------

Point = tuple[Fraction, Fraction]


def _orient(a: Point, b: Point, c: Point) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
    return (v > 0) - (v < 0)


def _in_closed_triangle(p: Point, tri: Sequence[Point]) -> bool:
    a, b, c = tri
    o = _orient(a, b, c)
    if o == 0:
        # Degenerate image: the closed triangle is a segment (or point).
        # For collinear points the lexicographic order agrees with the
        # order along the supporting line.
        lo, _, hi = sorted(tri)
        if _orient(lo, hi, p) != 0:
            return False
        return lo <= p <= hi
    s1 = _orient(a, b, p)
    s2 = _orient(b, c, p)
    s3 = _orient(c, a, p)
    if o < 0:
        s1, s2, s3 = -s1, -s2, -s3
    return s1 >= 0 and s2 >= 0 and s3 >= 0


def _segment_intersection(p: Point, q: Point, r: Point, s: Point) -> Point | None:
    """Intersection point of segments pq and rs when unique; None otherwise."""
    d1 = (q[0] - p[0], q[1] - p[1])
    d2 = (s[0] - r[0], s[1] - r[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None  # parallel or collinear; endpoints are candidates anyway
    tnum = (r[0] - p[0]) * d2[1] - (r[1] - p[1]) * d2[0]
    unum = (r[0] - p[0]) * d1[1] - (r[1] - p[1]) * d1[0]
    t = Fraction(tnum, den)
    u = Fraction(unum, den)
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (p[0] + t * d1[0], p[1] + t * d1[1])
    return None


def _line_intersection(p: Point, q: Point, r: Point, s: Point) -> Point | None:
    d1 = (q[0] - p[0], q[1] - p[1])
    d2 = (s[0] - r[0], s[1] - r[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    t = Fraction((r[0] - p[0]) * d2[1] - (r[1] - p[1]) * d2[0], den)
    return (p[0] + t * d1[0], p[1] + t * d1[1])


@dataclass(frozen=True)
class OverlapEstimate:
    placement: dict[int, Point]
    best_point: Point
    covered_fraction: Fraction
    depth: int
    method: str
    trial_fractions: tuple[Fraction, ...] = ()


def _snap_placement(x: Complex, placement: Mapping[int, Sequence[float]]):
    out = {}
    snapped = False
    for v in x.vertices:
        if v not in placement:
            raise BadParameter(f"vertex {v} has no image")
        px, py = placement[v]
        if not isinstance(px, (int, Fraction)) or not isinstance(py, (int, Fraction)):
            snapped = True
        out[v] = (Fraction(px), Fraction(py))
    return out, snapped


def _image_segments(x: Complex, pts: Mapping[int, Point]) -> list[tuple[Point, Point]]:
    segs = set()
    for a, b in x.cells_by_dim[1]:
        segs.add(tuple(sorted((pts[a], pts[b]))))
    return [s for s in sorted(segs) if s[0] != s[1]]


def _depth_at(pts_tris: Sequence[Sequence[Point]], z: Point) -> int:
    return sum(1 for tri in pts_tris if _in_closed_triangle(z, tri))


def _evaluate_candidates(x: Complex, pts: Mapping[int, Point], candidates) -> tuple[int, Point]:
    tris = [tuple(pts[v] for v in t) for t in x.cells_by_dim[2]]
    best_depth = -1
    best_point = None
    for z in sorted(set(candidates)):
        dep = _depth_at(tris, z)
        if dep > best_depth:
            best_depth, best_point = dep, z
    return best_depth, best_point


def _candidate_points(x: Complex, pts: Mapping[int, Point]) -> list[Point]:
    """Image vertices, pairwise segment intersections, arrangement-edge
    midpoints, and face centroids of the image triangles."""
    cands: list[Point] = list(pts.values())
    segs = _image_segments(x, pts)
    on_segment: dict[int, list[Point]] = {k: [s[0], s[1]] for k, s in enumerate(segs)}
    for k1, k2 in combinations(range(len(segs)), 2):
        p = _segment_intersection(*segs[k1], *segs[k2])
        if p is not None:
            cands.append(p)
            on_segment[k1].append(p)
            on_segment[k2].append(p)
    # Midpoint refinement: one interior sample per arrangement edge.
    for k, plist in on_segment.items():
        plist = sorted(set(plist))
        for a, b in zip(plist, plist[1:]):
            cands.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
    for t in x.cells_by_dim[2]:
        xs = [pts[v][0] for v in t]
        ys = [pts[v][1] for v in t]
        cands.append((sum(xs) / 3, sum(ys) / 3))
    return cands


def _gaussian_placement(x: Complex, rng: random.Random) -> dict[int, Point]:
    return {
        v: (Fraction(round(rng.gauss(0.0, 1.0) * 65536), 65536),
            Fraction(round(rng.gauss(0.0, 1.0) * 65536), 65536))
        for v in x.vertices
    }


def geometric_overlap(x: Complex, placement: Mapping[int, Sequence[float]] | None = None,
                      seed: int = 7, trials: int = 1) -> OverlapEstimate:
    """Max fraction of image triangles covering one point, for a placement.

    With a given placement this is a certified lower bound on the true depth
    (and equal to it: the maximum of the upper semicontinuous depth function
    is attained at a candidate point).  Without one, `trials` seeded Gaussian
    placements are evaluated and the minimum estimate is returned as an
    empirical probe of the overlap constant.
    """
    if x.d != 2:
        raise BadDimension("overlap depth is implemented for 2-complexes")
    if placement is not None:
        pts, snapped = _snap_placement(x, placement)
        depth, best = _evaluate_candidates(x, pts, _candidate_points(x, pts))
        method = "candidate-points"
        if snapped:
            method += "+snapped"
        if _all_collinear(pts):
            method += "+degenerate-line"
        frac = Fraction(depth, x.num_cells(2))
        return OverlapEstimate(pts, best, frac, depth, method, (frac,))
    if trials < 1:
        raise BadParameter("trials must be >= 1")
    rng = random.Random(seed)
    best_est = None
    fractions = []
    for _ in range(trials):
        pts = _gaussian_placement(x, rng)
        depth, best = _evaluate_candidates(x, pts, _candidate_points(x, pts))
        frac = Fraction(depth, x.num_cells(2))
        fractions.append(frac)
        est = OverlapEstimate(pts, best, frac, depth, "candidate-points+gaussian")
        if best_est is None or est.covered_fraction < best_est.covered_fraction:
            best_est = est
    return OverlapEstimate(best_est.placement, best_est.best_point,
                           best_est.covered_fraction, best_est.depth,
                           best_est.method, tuple(fractions))


def _all_collinear(pts: Mapping[int, Point]) -> bool:
    vals = list(pts.values())
    if len(vals) < 3:
        return True
    a, b = vals[0], vals[1]
    k = 2
    while a == b and k < len(vals):
        b = vals[k]
        k += 1
    return all(_orient(a, b, c) == 0 for c in vals)


def arrangement_depth_oracle(x: Complex, placement: Mapping[int, Sequence[float]],
                             max_triangles: int = 40) -> OverlapEstimate:
    """Exhaustive small-instance oracle: depth over the full line arrangement.

    Evaluates every pairwise intersection of the supporting lines of the
    image segments plus all image vertices; the maximum depth of the closed
    triangles is attained at one of these arrangement vertices.
    """
    if x.d != 2:
        raise BadDimension("overlap depth is implemented for 2-complexes")
    if x.num_cells(2) > max_triangles:
        raise BadParameter(f"oracle capped at {max_triangles} triangles")
    pts, _ = _snap_placement(x, placement)
    cands: list[Point] = list(pts.values())
    segs = _image_segments(x, pts)
    for s1, s2 in combinations(segs, 2):
        p = _line_intersection(*s1, *s2)
        if p is not None:
            cands.append(p)
    depth, best = _evaluate_candidates(x, pts, cands)
    frac = Fraction(depth, x.num_cells(2))
    return OverlapEstimate(pts, best, frac, depth, "line-arrangement-oracle", (frac,))
