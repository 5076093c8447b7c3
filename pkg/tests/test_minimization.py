"""Descent to local minimality, colored norms, thin/thick partitions."""

from __future__ import annotations

import random
import warnings
from fractions import Fraction

import pytest

from hdx.cohomology import coboundary, coboundary_space, coset_min_norm
from hdx.complexes import Cochain, norm, random_cochain, restrict, vertex_link
from hdx.errors import DimensionMismatch, NonHomogeneousWarning, NotAnnotated
from hdx.minimization import (
    ThinThickParams,
    classify_thin_thick,
    colored_norms,
    half_link_property_holds,
    is_locally_minimal,
    is_minimal,
    locally_minimize,
)


def test_empty_cochain_is_minimal(dd3):
    empty = dd3.cochain(1)
    assert is_minimal(dd3, empty)
    assert is_locally_minimal(dd3, empty)


def test_coboundary_of_vertex_is_not_minimal(dd3):
    a = coboundary(dd3, dd3.cochain_from_cells(0, [(2,)]))
    assert a.size > 0
    assert is_minimal(dd3, a) is False


def test_coset_leader_is_minimal(rp2):
    rng = random.Random(4)
    a = random_cochain(rp2, 1, rng)
    leader = coset_min_norm(rp2, a).witness
    assert is_minimal(rp2, leader)


def test_heuristic_is_minimal_returns_unknown_or_false(k62):
    rng = random.Random(6)
    a = random_cochain(k62, 1, rng)
    res = is_minimal(k62, a, mode="heuristic")
    assert res in (None, False)


def test_overfull_restriction_is_not_locally_minimal(k62):
    # more than half the link cells at a vertex violates local minimality
    star = [e for e in k62.cells_by_dim[1] if 0 in e]
    a = k62.cochain_from_cells(1, star[:4])
    av = restrict(k62, a, 0)
    assert 2 * av.size > av.length
    assert not is_locally_minimal(k62, a)


def test_descent_fixed_point(dd3):
    a = dd3.cochain(1)
    out, tr = locally_minimize(dd3, a)
    assert out == a and tr.step_count == 0 and tr.total_gamma.size == 0


@pytest.mark.parametrize("seeds", [range(25)])
def test_descent_contract(k62, k63, rp2, seeds):
    cases = [(k62, 1), (rp2, 1), (k63, 1), (k63, 2)]
    for x, i in cases:
        for s in seeds:
            rng = random.Random(7000 + 31 * i + s)
            a = random_cochain(x, i, rng)
            out, tr = locally_minimize(x, a)
            assert is_locally_minimal(x, out)
            assert norm(x, out) <= norm(x, a)
            assert tr.step_count <= tr.step_bound
            assert coboundary_space(x, i).contains(a.bits ^ out.bits)
            # gamma really maps onto the difference
            assert coboundary(x, tr.total_gamma) == a ^ out
            assert norm(x, tr.total_gamma) <= tr.gamma_norm_bound_certified
            for before, after in zip(
                [norm(x, a)] + [st.norm_after for st in tr.steps],
                [st.norm_after for st in tr.steps],
            ):
                assert after < before
            assert half_link_property_holds(x, out)


def test_descent_output_of_coboundary_lands_in_class(k62):
    rng = random.Random(12)
    for _ in range(10):
        beta = coboundary(k62, random_cochain(k62, 0, rng))
        out, tr = locally_minimize(k62, beta)
        assert coboundary_space(k62, 1).contains(out.bits)
        assert norm(k62, out) <= norm(k62, beta)


def test_non_homogeneous_descent_warns(s42):
    rng = random.Random(3)
    a = random_cochain(s42, 1, rng, density=0.1)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out, tr = locally_minimize(s42, a)
    assert any(issubclass(w.category, NonHomogeneousWarning) for w in caught)
    assert tr.gamma_norm_bound is None
    assert is_locally_minimal(s42, out)


# -- colored norms -----------------------------------------------------------


def test_colored_norm_examples(cone42):
    colors = cone42.labels["edge_colors"]
    blacks = [j for j, c in colors.items() if c == "b"]
    whites = [j for j, c in colors.items() if c == "w"]
    n1 = cone42.num_cells(1)
    empty = colored_norms(cone42, Cochain(1, 0, n1))
    assert empty.up_norm == 0
    one_black = colored_norms(cone42, Cochain(1, 1 << blacks[0], n1))
    assert one_black.theta == Fraction(7, 3)
    assert one_black.up_norm == Fraction(7, 3)
    both = colored_norms(cone42, Cochain(1, (1 << blacks[0]) | (1 << whites[0]), n1))
    assert both.up_norm == Fraction(10, 3)
    assert one_black.budget_q == 2 * Fraction(7, 3) * 15 + 35 == 105


def test_colored_norm_proportional_to_weighted(cone42):
    rng = random.Random(9)
    colors = cone42.labels["edge_colors"]
    for _ in range(20):
        bits = 0
        for j in colors:
            if rng.random() < 0.5:
                bits |= 1 << j
        a = Cochain(1, bits, cone42.num_cells(1))
        assert colored_norms(cone42, a).weighted_norm_matches


def test_colored_norm_requires_annotations(k63):
    with pytest.raises(NotAnnotated):
        colored_norms(k63, k63.cochain(1, 1))


# -- thin/thick --------------------------------------------------------------


def test_partition_totals_vertex2d(rp2, dd3):
    rng = random.Random(21)
    for x in (rp2, dd3):
        for _ in range(100):
            a = random_cochain(x, 1, rng)
            rep = classify_thin_thick(x, a, "vertex2d")
            assert rep.r + rep.s == rep.expected_total == 2 * a.size
            assert set(rep.thin) | set(rep.thick) == set(x.vertices)
            assert not set(rep.thin) & set(rep.thick)


def test_empty_cochain_all_thin(rp2):
    rep = classify_thin_thick(rp2, rp2.cochain(1), "vertex2d")
    assert rep.thick == () and rep.r == rep.s == 0


def test_partition_totals_vertex3d_colored_budget(cone42):
    rng = random.Random(22)
    colors = cone42.labels["edge_colors"]
    for _ in range(40):
        bits = 0
        for j in colors:
            if rng.random() < 0.5:
                bits |= 1 << j
        a = Cochain(1, bits, cone42.num_cells(1))
        rep = classify_thin_thick(cone42, a, "vertex3d", ThinThickParams(q=2))
        up = colored_norms(cone42, a).up_norm
        assert rep.r + rep.s == rep.expected_total == 2 * up


def test_partition_totals_edge3d(k63, cone42):
    rng = random.Random(23)
    for x in (k63, cone42):
        for _ in range(40):
            b = random_cochain(x, 2, rng)
            rep = classify_thin_thick(x, b, "edge3d")
            assert rep.r + rep.s == rep.expected_total == 3 * b.size


def test_saturated_edge_is_thick(k63):
    # an edge whose every triangle lies in the cochain is thick when it has
    # at least two triangles (x > x^0.9 for x >= 2)
    e = k63.cells_by_dim[1][0]
    tris = [t for t in k63.cells_by_dim[2] if set(e) <= set(t)]
    assert len(tris) >= 2
    b = k63.cochain_from_cells(2, tris)
    rep = classify_thin_thick(k63, b, "edge3d")
    assert k63.index[1][e] in rep.thick


def test_vertex3d_colored_partition(k63):
    rng = random.Random(24)
    colors = {j: ("b" if j % 3 else "w") for j in range(k63.num_cells(1))}
    for _ in range(40):
        b = random_cochain(k63, 2, rng)
        rep = classify_thin_thick(
            k63, b, "vertex3d_colored", ThinThickParams(q=2, colors=colors))
        assert rep.r + rep.s == rep.expected_total == 3 * b.size


def test_level_dimension_checks(k63):
    with pytest.raises(DimensionMismatch):
        classify_thin_thick(k63, k63.cochain(2), "vertex2d")
    with pytest.raises(DimensionMismatch):
        classify_thin_thick(k63, k63.cochain(1), "edge3d")
