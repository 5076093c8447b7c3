"""Properties of the bit-packed GF(2) kernel, checked against a dense oracle."""

from __future__ import annotations

import random

from hdx import gf2


def dense_rank(rows, n_cols):
    """Textbook elimination on 0/1 lists; the independent oracle."""
    mat = [[(r >> j) & 1 for j in range(n_cols)] for r in rows]
    rank = 0
    for col in range(n_cols):
        piv = next((k for k in range(rank, len(mat)) if mat[k][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for k in range(len(mat)):
            if k != rank and mat[k][col]:
                mat[k] = [a ^ b for a, b in zip(mat[k], mat[rank])]
        rank += 1
    return rank


def test_rank_matches_dense_oracle():
    rng = random.Random(42)
    for _ in range(50):
        n_cols = rng.randrange(1, 18)
        rows = [rng.getrandbits(n_cols) for _ in range(rng.randrange(1, 14))]
        assert gf2.rank(rows) == dense_rank(rows, n_cols)


def test_rref_is_canonical_under_row_shuffles():
    rng = random.Random(7)
    for _ in range(40):
        n_cols = rng.randrange(2, 16)
        rows = [rng.getrandbits(n_cols) for _ in range(6)]
        base = gf2.span_basis(rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        mixed = [shuffled[0]] + [v ^ shuffled[0] for v in shuffled[1:]]
        assert gf2.span_basis(mixed) == base


def test_reduce_gives_canonical_coset_representative():
    rng = random.Random(3)
    for _ in range(30):
        n_cols = 12
        space = gf2.Gf2Space(rng.getrandbits(n_cols) for _ in range(5))
        v = rng.getrandbits(n_cols)
        for row in space.basis:
            assert space.reduce(v) == space.reduce(v ^ row)
        assert space.contains(v ^ space.reduce(v))


def test_nullspace_vectors_annihilate_rows():
    rng = random.Random(11)
    for _ in range(30):
        n_cols = rng.randrange(2, 16)
        rows = [rng.getrandbits(n_cols) for _ in range(rng.randrange(1, 10))]
        null = gf2.nullspace(rows, n_cols)
        for v in null:
            assert all((row & v).bit_count() % 2 == 0 for row in rows)
        assert len(null) == n_cols - gf2.rank(rows)
        assert gf2.rank(null) == len(null)


def test_solve_round_trip_and_inconsistency():
    rng = random.Random(13)
    for _ in range(40):
        n_cols = rng.randrange(2, 14)
        rows = [rng.getrandbits(n_cols) for _ in range(rng.randrange(1, 12))]
        x = rng.getrandbits(n_cols)
        rhs = 0
        for k, row in enumerate(rows):
            rhs |= ((row & x).bit_count() & 1) << k
        sol = gf2.solve(rows, rhs, n_cols)
        assert sol is not None
        for k, row in enumerate(rows):
            assert (row & sol).bit_count() & 1 == (rhs >> k) & 1
    # x + y = 0 and x + y = 1 cannot both hold
    assert gf2.solve([0b11, 0b11], 0b10, 2) is None


def test_complement_basis_completes_the_space():
    rng = random.Random(17)
    for _ in range(20):
        n_cols = rng.randrange(1, 14)
        space = gf2.Gf2Space(rng.getrandbits(n_cols) for _ in range(4))
        comp = gf2.complement_basis(space, n_cols)
        assert space.dim + len(comp) == n_cols
        assert gf2.rank(space.basis + comp) == n_cols


def test_gray_code_sweep_hits_every_combination_once():
    basis = [0b0011, 0b0101, 0b1001]
    seen = {mask for mask, _ in gf2.gray_code_sweep(basis)}
    expected = set()
    for t in range(8):
        m = 0
        for j in range(3):
            if (t >> j) & 1:
                m ^= basis[j]
        expected.add(m)
    assert seen == expected
