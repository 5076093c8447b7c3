"""Finite fields, subspace enumeration, section graphs, coloring."""

from __future__ import annotations

import random
from itertools import product

import pytest

from hdx.buildings import (
    FqField,
    Subspace,
    color_cells,
    enumerate_subspaces,
    field,
    gaussian_binomial,
    rref_fq,
    section_graph,
    spherical_building,
)
from hdx.errors import BadParameter, NotAnnotated, ResourceLimit


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_field_axioms_spot_checks(q):
    f = field(q)
    elems = range(q)
    rng = random.Random(q)
    triples = [tuple(rng.randrange(q) for _ in range(3)) for _ in range(200)]
    if q <= 9:
        triples = list(product(elems, repeat=3))
    for a, b, c in triples:
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    for a in range(1, q):
        assert f.mul(a, f.inv(a)) == 1
    assert f.add(1, f.neg(1)) == 0


def test_unsupported_order_rejected():
    with pytest.raises(BadParameter):
        FqField(12)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 1, 2) == 15
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 0, 3) == 1
    assert gaussian_binomial(3, 1, 2) == 7
    # brute-force oracle at (4,2,2): distinct row spaces of all full-rank
    # 2x4 matrices over F_2
    seen = set()
    for rows in product(range(16), repeat=2):
        mat = [tuple((r >> j) & 1 for j in range(4)) for r in rows]
        basis = rref_fq(mat, field(2))
        if len(basis) == 2:
            seen.add(basis)
    assert len(seen) == 35


def test_enumeration_counts_and_canonicality():
    assert len(enumerate_subspaces(4, 2, 1)) == 15
    assert len(enumerate_subspaces(3, 2, 1)) == 7
    assert len(enumerate_subspaces(2, 2, 1)) == 3
    spaces = enumerate_subspaces(4, 3, 2)
    assert len(spaces) == gaussian_binomial(4, 2, 3) == 130
    assert sorted(set(spaces)) == list(spaces)


def test_canonical_form_survives_row_operations():
    rng = random.Random(8)
    f = field(3)
    for s in enumerate_subspaces(3, 3, 2)[:20]:
        rows = [list(r) for r in s.basis]
        for _ in range(6):
            i, j = rng.randrange(len(rows)), rng.randrange(len(rows))
            c = rng.randrange(1, 3)
            if i != j:
                rows[i] = [f.add(a, f.mul(c, b)) for a, b in zip(rows[i], rows[j])]
            else:
                rows[i] = [f.mul(c, a) for a in rows[i]]
        again = Subspace.from_vectors([tuple(r) for r in rows], 3, 3)
        assert again == s


@pytest.mark.parametrize("q", [2, 3])
def test_inclusion_matches_elementwise_membership(q):
    ones = enumerate_subspaces(3, q, 1)
    twos = enumerate_subspaces(3, q, 2)
    for u in ones:
        uvecs = set(u.vectors())
        for w in twos:
            assert w.contains_space(u) == (uvecs <= set(w.vectors()))


def test_section_graph_degrees_and_edge_count():
    z13 = section_graph(4, 2, 1, 3)
    assert (len(z13.left), len(z13.right)) == (15, 15)
    assert z13.left_degree == z13.right_degree == 7
    assert len(z13.edges) == 105
    z12 = section_graph(4, 2, 1, 2)
    assert (z12.left_degree, z12.right_degree) == (7, 3)
    assert (len(z12.left), len(z12.right)) == (15, 35)
    assert len(z12.edges) == 105
    # per-vertex degrees, not just totals
    from collections import Counter

    left_deg = Counter(a for a, _ in z12.edges)
    right_deg = Counter(b for _, b in z12.edges)
    assert set(left_deg.values()) == {7} and set(right_deg.values()) == {3}
    with pytest.raises(BadParameter):
        section_graph(4, 2, 2, 2)


def test_building_is_pure_flag_complex(s42):
    assert s42.d == 2 and s42.is_pure
    assert s42.num_cells(2) == 315  # maximal flags
    q = 3
    s43 = spherical_building(4, q)
    assert s43.num_cells(0) == 2 * gaussian_binomial(4, 1, q) + gaussian_binomial(4, 2, q)
    flags = gaussian_binomial(4, 1, q) * gaussian_binomial(3, 1, q) * gaussian_binomial(2, 1, q)
    assert s43.num_cells(2) == flags


def test_vertex_cap():
    with pytest.raises(ResourceLimit):
        spherical_building(4, 2, vertex_cap=10)


def test_color_cells(s42):
    colors = color_cells(s42)
    dims = s42.labels["vertex_dims"]
    assert all((c == "b") == (d in (1, 3)) for c, d in zip(colors, dims))
    assert colors.count("b") == 30 and colors.count("w") == 35
    with pytest.raises(NotAnnotated):
        color_cells(spherical_building(3, 2))
