"""Bit-packed GF(2) linear algebra on Python integers.

Vectors are ints (bit j = coordinate j); matrices are lists of row masks.
Everything is exact, and the representation keeps the exhaustive cochain
sweeps cheap at desk scale.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def lowest_bit(x: int) -> int:
    """Index of the least significant set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


class Gf2Space:
    """A subspace of F2^n kept in reduced row echelon form.

    Rows are stored sorted by pivot column; each pivot column is zero in
    every other row, so `reduce` yields a canonical coset representative.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: list[int] = []
        self._pivots: list[int] = []
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> list[int]:
        return list(self._rows)

    @property
    def pivots(self) -> list[int]:
        return list(self._pivots)

    def reduce(self, vec: int) -> int:
        """Canonical representative of vec modulo this subspace."""
        for row, piv in zip(self._rows, self._pivots):
            if (vec >> piv) & 1:
                vec ^= row
        return vec

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0

    def add(self, vec: int) -> bool:
        """Insert vec; returns True if it enlarged the space."""
        vec = self.reduce(vec)
        if vec == 0:
            return False
        piv = lowest_bit(vec)
        # Keep full reduction: clear the new pivot from existing rows.
        for i, row in enumerate(self._rows):
            if (row >> piv) & 1:
                self._rows[i] = row ^ vec
        pos = 0
        while pos < len(self._pivots) and self._pivots[pos] < piv:
            pos += 1
        self._rows.insert(pos, vec)
        self._pivots.insert(pos, piv)
        return True


def span_basis(vectors: Iterable[int]) -> list[int]:
    """Canonical (RREF) basis of the span of the given vectors."""
    return Gf2Space(vectors).basis


def rank(rows: Iterable[int]) -> int:
    return Gf2Space(rows).dim


def complement_basis(space: Gf2Space, n_cols: int) -> list[int]:
    """Standard basis vectors extending `space` to all of F2^n_cols."""
    pivots = set(space.pivots)
    return [1 << j for j in range(n_cols) if j not in pivots]


def nullspace(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of {x : parity(row & x) = 0 for every row}."""
    space = Gf2Space(rows)
    rref_rows = space.basis
    pivots = space.pivots
    pivot_set = set(pivots)
    out = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, piv in zip(rref_rows, pivots):
            if (row >> free) & 1:
                vec |= 1 << piv
        out.append(vec)
    return out


def solve(rows: Sequence[int], rhs: int, n_cols: int) -> int | None:
    """One solution x of the system parity(rows[k] & x) = bit k of rhs.

    Returns None when the system is inconsistent.
    """
    aug = []
    for k, row in enumerate(rows):
        aug.append(row | (((rhs >> k) & 1) << n_cols))
    space = Gf2Space()
    for row in aug:
        space.add(row)
    x = 0
    for row, piv in zip(space.basis, space.pivots):
        if piv == n_cols:
            return None  # 0 = 1 row
        if (row >> n_cols) & 1:
            x |= 1 << piv
    # Verify: free variables were set to zero, pivots to the rhs column.
    for k, row in enumerate(rows):
        if ((row & x).bit_count() & 1) != ((rhs >> k) & 1):
            return None
    return x


def gray_code_sweep(basis: Sequence[int]):
    """Yield (mask, flipped_basis_index) over all 2^k combinations.

    The first yielded mask is 0 (with index -1); each later step XORs a
    single basis vector, in the standard binary-reflected Gray order.
    """
    mask = 0
    yield mask, -1
    for t in range(1, 1 << len(basis)):
        j = lowest_bit(t)
        mask ^= basis[j]
        yield mask, j
