"""Minimality predicates, the local-minimization descent, and colored norms.

The descent repeatedly replaces a vertex restriction by the true minimal
representative of its class in the link (links are small at desk scale, so
that coset leader is found exactly), which strictly decreases the global
norm and terminates within the quantized step bound.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from . import gf2
from .buildings import gaussian_binomial
from .cohomology import (
    EXACT_THRESHOLD_BITS,
    coboundary,
    coboundary_matrix,
    coboundary_space,
    cocycle_space,
    coset_min_norm,
)
from .complexes import Cochain, Complex, norm, restrict, vertex_link, weight_table
from .errors import (
    BadDimension,
    BadParameter,
    DimensionMismatch,
    NotAnnotated,
    NonHomogeneousWarning,
    ThresholdExceeded,
)
from .cohomology import _sweep_min  # shared exact sweep


@dataclass(frozen=True)
class DescentStep:
    vertex: int
    eta_cells: tuple[tuple[int, ...], ...]
    norm_before: Fraction
    norm_after: Fraction


@dataclass(frozen=True)
class DescentTrace:
    steps: tuple[DescentStep, ...]
    total_gamma: Cochain
    step_count: int
    step_bound: int
    # Stated bound (d+1-i)/(i+1) * m(i-1) * ||alpha||: reported, not certified;
    # it can fail because a single step's eta has norm up to the star weight,
    # which carries a c(sigma) factor the plain m(i-1) accounting misses.
    gamma_norm_bound: Fraction | None
    # Same accounting with the max c over (i-1)-cells restored; certified.
    gamma_norm_bound_certified: Fraction | None


def _link_gap(x: Complex, alpha: Cochain, v: int, threshold: int):
    """Exact improvement available at v: (gap_numerator, best link bits).

    The gap numerator is over the parent weight denominator, so gaps are
    comparable across vertices.
    """
    i = alpha.dim
    lv = vertex_link(x, v)
    lc = lv.link_complex
    av = restrict(x, alpha, v)
    wt = weight_table(lc, i - 1)
    space = coboundary_space(lc, i - 1)
    if space.dim > threshold:
        raise ThresholdExceeded(
            f"link of {v} needs 2^{space.dim} candidates (threshold 2^{threshold})")
    cur = 0
    b = av.bits
    while b:
        j = (b & -b).bit_length() - 1
        cur += wt.c_values[j]
        b &= b - 1
    best, best_bits = _sweep_min(wt.c_values, av.bits, space.basis)
    return cur - best, best_bits, av


def _lift_eta(x: Complex, v: int, lc_eta_bits: int, i: int) -> Cochain:
    """Lift a (i-2)-cochain of the link of v to an (i-1)-cochain of x."""
    n = x.num_cells(i - 1)
    if i == 1:
        bits = (1 << x.cell_index((v,))) if lc_eta_bits else 0
        return Cochain(0, bits, n)
    lv = vertex_link(x, v)
    bits = 0
    for k, pidx in enumerate(lv.to_parent[i - 2]):
        if (lc_eta_bits >> k) & 1:
            bits |= 1 << pidx
    return Cochain(i - 1, bits, n)


def is_minimal(x: Complex, alpha: Cochain, mode: str = "exact",
               threshold: int = EXACT_THRESHOLD_BITS) -> bool | None:
    """True iff alpha has minimal norm in its class modulo B^i.

    Heuristic mode can only certify non-minimality; it returns None when
    the greedy search finds nothing smaller.
    """
    res = coset_min_norm(x, alpha, mode=mode, threshold=threshold)
    if res.value == norm(x, alpha):
        return True if res.exact else None
    return False


def is_locally_minimal(x: Complex, alpha: Cochain,
                       threshold: int = EXACT_THRESHOLD_BITS) -> bool:
    """Every vertex restriction is a minimal cochain in its link."""
    if alpha.dim == 0:
        return bool(is_minimal(x, alpha, mode="exact", threshold=threshold))
    for v in x.vertices:
        gap, _, _ = _link_gap(x, alpha, v, threshold)
        if gap > 0:
            return False
    return True


def locally_minimize(x: Complex, alpha: Cochain,
                     threshold: int = EXACT_THRESHOLD_BITS) -> tuple[Cochain, DescentTrace]:
    """Descend to a locally minimal representative of alpha's class.

    Each step picks the vertex with the largest available norm decrease and
    replaces the restriction there by its minimal link representative; the
    accumulated gamma satisfies delta(gamma) = alpha - alpha' and is itself
    reduced to the minimum of its coset modulo Z^{i-1} when that space is
    small enough to sweep.
    """
    i = alpha.dim
    if i < 1:
        raise BadDimension("local minimization needs dim >= 1")
    if alpha.length != x.num_cells(i):
        raise DimensionMismatch("cochain is indexed against a different complex")
    d = x.d
    step_bound_den = comb(d + 1, i + 1) * len(x.facets)
    initial_norm = norm(x, alpha)
    step_bound = int(initial_norm * step_bound_den)
    gamma_bound = certified_bound = None
    if x.is_homogeneous:
        gamma_bound = Fraction(d + 1 - i, i + 1) * x.m_table[i - 1] * initial_norm
        c_max = max(weight_table(x, i - 1).c_values)
        certified_bound = gamma_bound * c_max
    else:
        warnings.warn(
            "complex is not homogeneous; the gamma norm bound is not certified",
            NonHomogeneousWarning,
        )
    current = alpha
    gamma_bits = 0
    steps: list[DescentStep] = []
    dmat = coboundary_matrix(x, i - 1)
    while True:
        best_gap = 0
        best_vertex = None
        best_link_bits = None
        best_av = None
        for v in x.vertices:
            gap, link_bits, av = _link_gap(x, current, v, threshold)
            if gap > best_gap:
                best_gap, best_vertex, best_link_bits, best_av = gap, v, link_bits, av
        if best_vertex is None:
            break
        lc = vertex_link(x, best_vertex).link_complex
        gamma_link = best_av.bits ^ best_link_bits
        link_dmat = coboundary_matrix(lc, i - 2)
        eta_link = gf2.solve(link_dmat.bits, gamma_link, link_dmat.cols)
        assert eta_link is not None, "improving link cochain must be a link coboundary"
        eta = _lift_eta(x, best_vertex, eta_link, i)
        before = norm(x, current)
        change = 0
        for k, row in enumerate(dmat.bits):
            if (row & eta.bits).bit_count() & 1:
                change |= 1 << k
        current = Cochain(i, current.bits ^ change, current.length)
        after = norm(x, current)
        assert after < before, "descent step must strictly decrease the norm"
        gamma_bits ^= eta.bits
        steps.append(DescentStep(best_vertex, tuple(x.support(eta)), before, after))
        if len(steps) > step_bound:
            raise AssertionError("descent exceeded the certified step bound")
    # Reduce gamma to the minimum of gamma + Z^{i-1}: any element of that
    # coset has the same coboundary, so it is an equally valid witness.
    zspace = cocycle_space(x, i - 1)
    if zspace.dim <= min(threshold, 20):
        wt = weight_table(x, i - 1)
        _, gamma_bits = _sweep_min(wt.c_values, gamma_bits, zspace.basis)
    gamma = Cochain(i - 1, gamma_bits, x.num_cells(i - 1))
    if certified_bound is not None:
        assert norm(x, gamma) <= certified_bound, "certified gamma bound violated"
    trace = DescentTrace(tuple(steps), gamma, len(steps), step_bound,
                         gamma_bound, certified_bound)
    return current, trace


def half_link_property_holds(x: Complex, alpha: Cochain) -> bool:
    """|alpha_v| <= |X_v(i-1)| / 2 at every vertex (constant-c complexes)."""
    for v in x.vertices:
        av = restrict(x, alpha, v)
        if 2 * av.size > av.length:
            return False
    return True


# -- colored norms for r=4 building-typed complexes ------------------------


@dataclass(frozen=True)
class ColoredNorm:
    theta: Fraction
    black_count: int
    white_count: int
    up_norm: Fraction
    budget_q: Fraction  # the colored degree budget 2*Theta*(4 1)_q + (4 2)_q
    weighted_norm_matches: bool | None


def _edge_colors(x: Complex, colors: Mapping[int, str] | None) -> Mapping[int, str]:
    if colors is not None:
        return colors
    if x.labels and "edge_colors" in x.labels:
        return x.labels["edge_colors"]
    raise NotAnnotated("no edge coloring available")


def colored_norms(x: Complex, alpha: Cochain, q: int | None = None,
                  colors: Mapping[int, str] | None = None) -> ColoredNorm:
    """The two-weight norm of an edge cochain on an r=4 building-typed complex."""
    if alpha.dim != 1:
        raise DimensionMismatch("colored norms are defined for edge cochains")
    colors = _edge_colors(x, colors)
    if q is None:
        if not x.labels or "q" not in x.labels:
            raise NotAnnotated("field order q is needed for Theta")
        q = x.labels["q"]
    theta = Fraction(q * q + q + 1, q + 1)
    black = white = 0
    for j in alpha.indices():
        c = colors.get(j)
        if c is None:
            raise NotAnnotated(f"edge {j} carries no color")
        if c == "b":
            black += 1
        elif c == "w":
            white += 1
        else:
            raise BadParameter(f"bad color {c!r}")
    up = theta * black + white
    budget = 2 * theta * gaussian_binomial(4, 1, q) + gaussian_binomial(4, 2, q)
    matches = None
    if x.d == 3:
        expected = Fraction((q + 1) ** 2, comb(4, 2) * len(x.facets)) * up
        matches = norm(x, alpha) == expected
    return ColoredNorm(theta, black, white, up, budget, matches)


# -- thin/thick classification ---------------------------------------------


@dataclass(frozen=True)
class ThinThickParams:
    epsilon: float = 0.1
    edge_exponent: float = 0.9
    black_exponent: float = 2.75
    white_exponent: float = 3.7
    vertex_exponent: float = 4.55
    q: int | None = None
    degree_budget: Fraction | None = None
    colors: Mapping[int, str] | None = None


@dataclass(frozen=True)
class ThinThickReport:
    level: str
    thin: tuple[int, ...]
    thick: tuple[int, ...]
    r: Fraction
    s: Fraction
    expected_total: Fraction
    threshold_note: str


def _alpha_v_counts(x: Complex, alpha: Cochain) -> dict[int, int]:
    counts = {v: 0 for v in x.vertices}
    cells = x.cells(alpha.dim)
    for j in alpha.indices():
        for v in cells[j]:
            counts[v] += 1
    return counts


def classify_thin_thick(x: Complex, alpha: Cochain, level: str,
                        params: ThinThickParams = ThinThickParams()) -> ThinThickReport:
    """Partition vertices or edges into thin and thick parts.

    Levels: 'vertex2d' (edge cochain, plain degree budget), 'vertex3d'
    (edge cochain, colored budget), 'edge3d' (triangle cochain, per-edge
    power threshold), 'vertex3d_colored' (triangle cochain, thick-edge
    counts per link).  Thresholds come from `params`; the partition totals
    are exact regardless of them.
    """
    if level == "vertex2d":
        if alpha.dim != 1:
            raise DimensionMismatch("vertex2d classifies an edge cochain")
        counts = _alpha_v_counts(x, alpha)
        budget = params.degree_budget
        if budget is None:
            from .spectral import one_skeleton

            k = one_skeleton(x).regular_degree
            if k is None:
                raise BadParameter("irregular 1-skeleton: pass degree_budget")
            budget = Fraction(k)
        cutoff = (1 - Fraction(params.epsilon).limit_denominator(10**6)) * budget / 2
        thin = tuple(v for v in x.vertices if counts[v] < cutoff)
        thick = tuple(v for v in x.vertices if counts[v] >= cutoff)
        r = Fraction(sum(counts[v] for v in thin))
        s = Fraction(sum(counts[v] for v in thick))
        return ThinThickReport(level, thin, thick, r, s,
                               Fraction(2 * alpha.size), f"(1-eps)Q/2 = {cutoff}")
    if level == "vertex3d":
        if alpha.dim != 1:
            raise DimensionMismatch("vertex3d classifies an edge cochain")
        colors = _edge_colors(x, params.colors)
        q = params.q or (x.labels or {}).get("q")
        if q is None:
            raise NotAnnotated("field order q is needed for the colored budget")
        theta = Fraction(q * q + q + 1, q + 1)
        budget = 2 * theta * gaussian_binomial(4, 1, q) + gaussian_binomial(4, 2, q)
        cells = x.cells(1)
        up_v = {v: Fraction(0) for v in x.vertices}
        for j in alpha.indices():
            w = theta if colors[j] == "b" else Fraction(1)
            for v in cells[j]:
                up_v[v] += w
        cutoff = (1 - Fraction(params.epsilon).limit_denominator(10**6)) * budget / 2
        thin = tuple(v for v in x.vertices if up_v[v] < cutoff)
        thick = tuple(v for v in x.vertices if up_v[v] >= cutoff)
        r = sum((up_v[v] for v in thin), Fraction(0))
        s = sum((up_v[v] for v in thick), Fraction(0))
        up_alpha = colored_norms(x, alpha, q=q, colors=colors).up_norm
        return ThinThickReport(level, thin, thick, r, s, 2 * up_alpha,
                               f"(1-eps)Q/2 = {cutoff}")
    if level == "edge3d":
        if x.d != 3 or alpha.dim != 2:
            raise DimensionMismatch("edge3d classifies a triangle cochain on a 3-complex")
        in_alpha, total = _edge_triangle_counts(x, alpha)
        thin = []
        thick = []
        for j in range(x.num_cells(1)):
            if in_alpha[j] <= total[j] ** params.edge_exponent:
                thin.append(j)
            else:
                thick.append(j)
        r = Fraction(sum(in_alpha[j] for j in thin))
        s = Fraction(sum(in_alpha[j] for j in thick))
        return ThinThickReport(level, tuple(thin), tuple(thick), r, s,
                               Fraction(3 * alpha.size),
                               f"|alpha_e| <= |X_e(0)|^{params.edge_exponent}")
    if level == "vertex3d_colored":
        if x.d != 3 or alpha.dim != 2:
            raise DimensionMismatch("vertex3d_colored classifies a triangle cochain")
        colors = _edge_colors(x, params.colors)
        q = params.q or (x.labels or {}).get("q")
        if q is None:
            raise NotAnnotated("field order q is needed for the thresholds")
        in_alpha, total = _edge_triangle_counts(x, alpha)
        thick_edges = [j for j in range(x.num_cells(1))
                       if in_alpha[j] > total[j] ** params.edge_exponent]
        per_vertex = {v: {"b": 0, "w": 0} for v in x.vertices}
        edges = x.cells(1)
        for j in thick_edges:
            c = colors.get(j)
            if c is None:
                raise NotAnnotated(f"edge {j} carries no color")
            for v in edges[j]:
                per_vertex[v][c] += 1
        tri_at = _alpha_v_counts(x, alpha)
        thin = tuple(v for v in x.vertices
                     if per_vertex[v]["b"] < q ** params.black_exponent
                     and per_vertex[v]["w"] < q ** params.white_exponent)
        thick = tuple(v for v in x.vertices if v not in set(thin))
        r = Fraction(sum(tri_at[v] for v in thin))
        s = Fraction(sum(tri_at[v] for v in thick))
        return ThinThickReport(level, thin, thick, r, s, Fraction(3 * alpha.size),
                               f"thick-edge counts vs q^{params.black_exponent}, "
                               f"q^{params.white_exponent}")
    raise BadParameter(f"unknown level {level!r}")


def _edge_triangle_counts(x: Complex, alpha: Cochain) -> tuple[list[int], list[int]]:
    """Per-edge: number of alpha-triangles containing it, and total triangles."""
    from itertools import combinations

    in_alpha = [0] * x.num_cells(1)
    total = [0] * x.num_cells(1)
    idx1 = x.index[1]
    for k, tri in enumerate(x.cells_by_dim[2]):
        hit = (alpha.bits >> k) & 1
        for e in combinations(tri, 2):
            j = idx1[e]
            total[j] += 1
            if hit:
                in_alpha[j] += 1
    return in_alpha, total
