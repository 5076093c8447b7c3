"""Core complex construction, weights, links, restriction, generators."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from hdx.buildings import gaussian_binomial, spherical_building
from hdx.complexes import (
    Cochain,
    complete_complex,
    cone,
    from_facets,
    link,
    linial_meshulam,
    norm,
    random_cochain,
    restrict,
    rp2_six_vertex,
    skeleton,
    sphere_boundary,
    vertex_link,
    weight_table,
)
from hdx.errors import (
    BadDimension,
    DimensionMismatch,
    EmptyInput,
    MixedDimensions,
    NotACell,
)


def test_single_triangle():
    x = from_facets([(0, 1, 2)])
    assert x.num_cells(0) == 3 and x.num_cells(1) == 3 and x.num_cells(2) == 1


def test_tetrahedron_boundary_counts(dd3):
    assert dd3.num_cells(1) == 6 and dd3.num_cells(2) == 4


def test_rp2_euler_characteristic(rp2):
    assert (rp2.num_cells(0), rp2.num_cells(1), rp2.num_cells(2)) == (6, 15, 10)
    assert rp2.num_cells(0) - rp2.num_cells(1) + rp2.num_cells(2) == 1
    # minimal triangulation: every edge in exactly two triangles
    assert set(weight_table(rp2, 1).c_values) == {2}


def test_from_facets_rejections():
    with pytest.raises(MixedDimensions):
        from_facets([(0, 1, 2), (3, 4)])
    with pytest.raises(EmptyInput):
        from_facets([])


def test_complete_complex_counts():
    assert complete_complex(4, 2).num_cells(2) == 4
    assert complete_complex(6, 2).num_cells(2) == 20
    assert complete_complex(5, 3).num_cells(3) == 5
    for i in range(3):
        assert complete_complex(7, 2).num_cells(i) == comb(7, i + 1)
    with pytest.raises(BadDimension):
        complete_complex(3, 3)


def test_downward_closure_everywhere(complex_zoo):
    for x in complex_zoo.values():
        for i in range(1, x.d + 1):
            for c in x.cells_by_dim[i]:
                for face in combinations(c, i):
                    assert x.has_cell(face)


def test_cell_lists_sorted_and_duplicate_free(complex_zoo):
    for x in complex_zoo.values():
        for i in range(x.d + 1):
            cells = x.cells_by_dim[i]
            assert list(cells) == sorted(set(cells))


def test_link_of_vertex_in_sphere_is_cycle(dd3):
    lv = link(dd3, (0,))
    assert lv.link_complex.d == 1
    assert lv.link_complex.num_cells(0) == 3 and lv.link_complex.num_cells(1) == 3


def test_link_of_edge_in_complete_complex():
    x = complete_complex(6, 2)
    lv = link(x, (0, 1))
    assert lv.link_complex.d == 0
    assert lv.link_complex.num_cells(0) == 4


def test_link_rejects_non_cells(k62):
    with pytest.raises(NotACell):
        link(k62, (0, 99))


def test_link_cell_map_round_trips(complex_zoo):
    for x in complex_zoo.values():
        if x.d < 1:
            continue
        v = x.vertices[0]
        lv = vertex_link(x, v)
        for j in range(lv.link_complex.d + 1):
            for k, pidx in enumerate(lv.to_parent[j]):
                assert lv.from_parent[j][pidx] == k
                parent_cell = x.cells_by_dim[j + 1][pidx]
                assert tuple(sorted(set(parent_cell) - {v})) == lv.link_complex.cells_by_dim[j][k]


def test_building_vertex_link_matches_rank3_building():
    # The link of a 1-dim or 3-dim subspace vertex of S(4,q) has the
    # vertex/edge counts of S(3,q); brute-force link extraction vs the
    # direct construction.
    q = 2
    s4 = spherical_building(4, q)
    dims = s4.labels["vertex_dims"]
    v = next(k for k in range(len(dims)) if dims[k] == 1)
    lv = link(s4, (v,))
    s3 = spherical_building(3, q)
    assert lv.link_complex.num_cells(0) == s3.num_cells(0) == 2 * (q * q + q + 1)
    assert lv.link_complex.num_cells(1) == s3.num_cells(1) == (q * q + q + 1) * (q + 1)
    # A 2-dim subspace vertex sees the complete bipartite graph instead.
    w = next(k for k in range(len(dims)) if dims[k] == 2)
    lw = link(s4, (w,))
    assert lw.link_complex.num_cells(0) == 2 * (q + 1)
    assert lw.link_complex.num_cells(1) == (q + 1) ** 2


def test_weight_tables(dd3, rp2, k52):
    wt = weight_table(dd3, 1)
    assert set(wt.w_values) == {Fraction(1, 6)}
    assert sum(wt.w_values) == 1
    assert set(weight_table(k52, 0).w_values) == {Fraction(1, 5)}
    assert set(weight_table(rp2, 1).w_values) == {Fraction(1, 15)}


def test_weight_normalization_all_dims(complex_zoo):
    for x in complex_zoo.values():
        for i in range(x.d + 1):
            assert sum(weight_table(x, i).w_values) == 1


def test_norm_examples(dd3):
    empty = dd3.cochain(1)
    assert norm(dd3, empty) == 0
    full = dd3.cochain(1, (1 << dd3.num_cells(1)) - 1)
    assert norm(dd3, full) == 1
    one_edge = dd3.cochain(1, 1)
    assert norm(dd3, one_edge) == Fraction(1, 6)


def test_norm_rejects_mismatched_cochains(dd3, rp2):
    with pytest.raises(DimensionMismatch):
        norm(dd3, rp2.cochain(1, 1))


def test_restrict_examples(dd3):
    u = dd3.vertices[0]
    star = dd3.cochain_from_cells(2, [c for c in dd3.cells_by_dim[2] if u in c])
    ru = restrict(dd3, star, u)
    assert ru.size == vertex_link(dd3, u).link_complex.num_cells(1)
    empty = dd3.cochain(2)
    for v in dd3.vertices:
        assert restrict(dd3, empty, v).size == 0


def test_restriction_decomposition_is_exact(complex_zoo):
    rng = random.Random(99)
    for x in complex_zoo.values():
        if not x.is_homogeneous:
            continue
        for i in range(1, x.d + 1):
            for _ in range(5):
                a = random_cochain(x, i, rng)
                total = sum(
                    norm(vertex_link(x, v).link_complex, restrict(x, a, v))
                    for v in x.vertices
                )
                assert total == x.n_vertices * norm(x, a)


def test_skeleton_and_cone(k63):
    y = skeleton(k63, 2)
    assert y.d == 2 and y.facets == k63.cells_by_dim[2]
    c = cone(y)
    assert c.d == 3 and c.num_cells(0) == y.num_cells(0) + 1


def test_generators():
    assert linial_meshulam(5, 2, 1.0, 3) == complete_complex(5, 2)
    low = linial_meshulam(5, 2, 0.0, 3)
    assert low.d == 1 and low.num_cells(1) == 10
    a = linial_meshulam(8, 2, 0.4, 123)
    b = linial_meshulam(8, 2, 0.4, 123)
    assert a == b
    assert a != linial_meshulam(8, 2, 0.4, 124)
    mid = linial_meshulam(6, 2, 0.5, 9)
    assert mid.num_cells(1) == 15  # full 1-skeleton survives regardless of p
    s3 = sphere_boundary(3)
    assert s3.num_cells(3) == 5


def test_linial_meshulam_keeps_isolated_vertices():
    x = linial_meshulam(12, 2, 0.02, 4)
    if x.d == 2:
        assert x.num_cells(0) == 12 and x.num_cells(1) == comb(12, 2)


def test_cochain_algebra(rp2):
    rng = random.Random(0)
    a = random_cochain(rp2, 1, rng)
    b = random_cochain(rp2, 1, rng)
    assert (a ^ b).size == (a.bits ^ b.bits).bit_count()
    assert rp2.support(a) == [rp2.cells_by_dim[1][j] for j in a.indices()]


def test_building_counts_match_gaussian_binomials():
    s42 = spherical_building(4, 2)
    assert s42.num_cells(0) == sum(gaussian_binomial(4, k, 2) for k in (1, 2, 3)) == 65
    s2 = spherical_building(2, 5)
    assert s2.d == 0 and s2.num_cells(0) == gaussian_binomial(2, 1, 5)
