"""Coboundary maps, cohomology dimensions, and the expansion invariants.

All exact values are computed by exhaustive sweeps over the relevant
F2-spaces, guarded by a candidate threshold (log2 of the enumeration size).
Heuristic modes are seeded and deterministic, and every reported number is
flagged exact or not.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import gf2
from .complexes import Cochain, Complex, weight_table
from .errors import (
    BadDimension,
    BadParameter,
    BudgetExceeded,
    ThresholdExceeded,
    TopDimension,
)

EXACT_THRESHOLD_BITS = 26


@dataclass(frozen=True)
class CoboundaryMatrix:
    """Incidence matrix of delta_i: row sigma has ones at the i-faces of sigma."""

    i: int
    rows: int
    cols: int
    bits: tuple[int, ...]


def coboundary_matrix(x: Complex, i: int) -> CoboundaryMatrix:
    """The matrix of delta_i : C^i -> C^{i+1}, for i in -1..d-1.

    delta_{-1} maps the constants onto C^0 (the reduced convention), so its
    matrix is the all-ones column.
    """
    if not -1 <= i <= x.d - 1:
        raise BadDimension(f"no coboundary matrix for dimension {i}")
    key = ("delta", i)
    if key in x._cache:
        return x._cache[key]
    if i == -1:
        mat = CoboundaryMatrix(-1, x.num_cells(0), 1, tuple([1] * x.num_cells(0)))
    else:
        from itertools import combinations

        rows = []
        idx = x.index[i]
        for c in x.cells_by_dim[i + 1]:
            m = 0
            for face in combinations(c, i + 1):
                m |= 1 << idx[face]
            rows.append(m)
        mat = CoboundaryMatrix(i, x.num_cells(i + 1), x.num_cells(i), tuple(rows))
    x._cache[key] = mat
    return mat


def coboundary(x: Complex, alpha: Cochain) -> Cochain:
    """delta(alpha): the (i+1)-cells containing an odd number of alpha-faces."""
    if alpha.dim >= x.d:
        raise TopDimension("no coboundary above the top dimension")
    mat = coboundary_matrix(x, alpha.dim)
    out = 0
    for k, row in enumerate(mat.bits):
        if (row & alpha.bits).bit_count() & 1:
            out |= 1 << k
    return Cochain(alpha.dim + 1, out, mat.rows)


def _apply_delta(mat: CoboundaryMatrix, bits: int) -> int:
    out = 0
    for k, row in enumerate(mat.bits):
        if (row & bits).bit_count() & 1:
            out |= 1 << k
    return out


def cocycle_space(x: Complex, i: int) -> gf2.Gf2Space:
    """Z^i = ker delta_i (all of C^d at the top dimension)."""
    key = ("Z", i)
    if key in x._cache:
        return x._cache[key]
    if i == x.d:
        basis = [1 << j for j in range(x.num_cells(i))]
    else:
        mat = coboundary_matrix(x, i)
        basis = gf2.nullspace(mat.bits, mat.cols)
    space = gf2.Gf2Space(basis)
    x._cache[key] = space
    return space


def coboundary_space(x: Complex, i: int) -> gf2.Gf2Space:
    """B^i = im delta_{i-1}; B^0 is spanned by the all-ones cochain."""
    key = ("B", i)
    if key in x._cache:
        return x._cache[key]
    mat = coboundary_matrix(x, i - 1)
    cols = []
    for j in range(mat.cols):
        col = 0
        for k, row in enumerate(mat.bits):
            if (row >> j) & 1:
                col |= 1 << k
        cols.append(col)
    space = gf2.Gf2Space(cols)
    x._cache[key] = space
    return space


def cohomology_dim(x: Complex, i: int) -> int:
    """dim H^i = dim Z^i - dim B^i over F2 (reduced at i = 0)."""
    if not 0 <= i <= x.d:
        raise BadDimension(f"no cohomology in dimension {i}")
    return cocycle_space(x, i).dim - coboundary_space(x, i).dim


def chain_identity_holds(x: Complex) -> bool:
    """delta_{i+1} o delta_i = 0 as a matrix identity, for every i."""
    for i in range(-1, x.d - 1):
        lower = coboundary_matrix(x, i)
        upper = coboundary_matrix(x, i + 1)
        for row2 in upper.bits:
            acc = 0
            bits = row2
            while bits:
                k = (bits & -bits).bit_length() - 1
                acc ^= lower.bits[k]
                bits &= bits - 1
            if acc:
                return False
    return True


def rank_nullity_holds(x: Complex) -> bool:
    """dim Z^i + rank delta_i = |X(i)| in every dimension."""
    for i in range(0, x.d):
        mat = coboundary_matrix(x, i)
        if cocycle_space(x, i).dim + gf2.rank(mat.bits) != x.num_cells(i):
            return False
    return True


# -- minimization over cosets ---------------------------------------------


def _support_key(bits: int) -> tuple[int, ...]:
    return tuple(j for j in range(bits.bit_length()) if (bits >> j) & 1)


def _sweep_min(weights: Sequence[int], base: int, basis: Sequence[int]) -> tuple[int, int]:
    """Exact minimum weighted support over {base + span(basis)}.

    Returns (best_numerator, best_bits); ties go to the lexicographically
    smallest support (as a sorted index tuple).
    """
    num = 0
    bits = base
    while bits:
        j = (bits & -bits).bit_length() - 1
        num += weights[j]
        bits &= bits - 1
    best_num, best_bits = num, base
    mask = base
    for t in range(1, 1 << len(basis)):
        bv = basis[gf2.lowest_bit(t)]
        new_mask = mask ^ bv
        delta = 0
        b = bv
        while b:
            j = (b & -b).bit_length() - 1
            delta += weights[j] if (new_mask >> j) & 1 else -weights[j]
            b &= b - 1
        mask = new_mask
        num += delta
        if num < best_num or (num == best_num and _support_key(mask) < _support_key(best_bits)):
            best_num, best_bits = num, mask
    return best_num, best_bits


def _greedy_descent(weights: Sequence[int], start: int, basis: Sequence[int]) -> tuple[int, int]:
    def wsum(bits: int) -> int:
        total = 0
        while bits:
            j = (bits & -bits).bit_length() - 1
            total += weights[j]
            bits &= bits - 1
        return total

    cur = start
    cur_num = wsum(cur)
    improved = True
    while improved:
        improved = False
        best_delta, best_vec = 0, None
        for bv in basis:
            cand = cur ^ bv
            delta = wsum(cand & bv) - wsum(cur & bv)
            if delta < best_delta:
                best_delta, best_vec = delta, bv
        if best_vec is not None:
            cur ^= best_vec
            cur_num += best_delta
            improved = True
    return cur_num, cur


@dataclass(frozen=True)
class MinResult:
    value: Fraction
    witness: Cochain
    exact: bool


def coset_min_norm(
    x: Complex,
    alpha: Cochain,
    mode: str = "exact",
    budget: int = 32,
    threshold: int = EXACT_THRESHOLD_BITS,
) -> MinResult:
    """Minimum norm over the coset alpha + B^i, with a minimizing witness.

    Exact mode enumerates the full coset (guarded by `threshold` bits);
    heuristic mode runs a greedy single-generator descent with `budget`
    seeded restarts and returns an upper bound flagged inexact.
    """
    i = alpha.dim
    wt = weight_table(x, i)
    space = coboundary_space(x, i)
    basis = space.basis
    if mode == "exact":
        if space.dim > threshold:
            raise ThresholdExceeded(
                f"coset has 2^{space.dim} elements (threshold 2^{threshold})")
        num, bits = _sweep_min(wt.c_values, alpha.bits, basis)
        return MinResult(Fraction(num, wt.denominator), Cochain(i, bits, alpha.length), True)
    if mode != "heuristic":
        raise BadParameter(f"unknown mode {mode!r}")
    if budget < 1:
        raise BudgetExceeded("heuristic budget must allow at least one descent")
    rng = random.Random(budget * 0x9E3779B1 + space.dim)
    best_num, best_bits = _greedy_descent(wt.c_values, alpha.bits, basis)
    for _ in range(budget - 1):
        offset = 0
        for bv in basis:
            if rng.getrandbits(1):
                offset ^= bv
        num, bits = _greedy_descent(wt.c_values, alpha.bits ^ offset, basis)
        if num < best_num or (num == best_num and _support_key(bits) < _support_key(best_bits)):
            best_num, best_bits = num, bits
    return MinResult(Fraction(best_num, wt.denominator),
                     Cochain(i, best_bits, alpha.length), False)


# -- the four invariants ---------------------------------------------------


@dataclass(frozen=True)
class ExpansionValue:
    """One invariant value with exactness flag and minimizing witness.

    `value` is None when the quantity is infinite (systole with vanishing
    cohomology) or vacuous (the minimized set is empty).
    """

    name: str
    dim: int
    value: Fraction | None
    exact: bool
    infinite: bool = False
    vacuous: bool = False
    witness: Cochain | None = None

    def as_float(self) -> float:
        if self.infinite:
            return float("inf")
        if self.value is None:
            return float("nan")
        return float(self.value)


def _ratio(num_top: int, den_top: int, num_bot: int, den_bot: int) -> Fraction | None:
    """(num_top/den_top) / (num_bot/den_bot); None encodes +infinity."""
    if num_bot == 0:
        return None
    return Fraction(num_top * den_bot, num_bot * den_top)


def _guard(bits: int, threshold: int, what: str):
    if bits > threshold:
        raise ThresholdExceeded(f"{what} needs 2^{bits} candidates (threshold 2^{threshold})")


def epsilon_i(x: Complex, i: int, mode: str = "exact",
              threshold: int = EXACT_THRESHOLD_BITS,
              samples: int = 64, seed: int = 0) -> ExpansionValue:
    """Coboundary expansion: min ||delta a|| / ||[a]|| over a outside B^i."""
    if not 0 <= i <= x.d - 1:
        raise BadDimension("coboundary expansion needs 0 <= i <= d-1")
    wt_i = weight_table(x, i)
    wt_up = weight_table(x, i + 1)
    mat = coboundary_matrix(x, i)
    bspace = coboundary_space(x, i)
    comp = gf2.complement_basis(bspace, x.num_cells(i))
    if not comp:
        return ExpansionValue("epsilon", i, None, True, vacuous=True)
    _guard(bspace.dim, threshold, "coset minimization")
    comp_delta = [_apply_delta(mat, v) for v in comp]

    def coset_value(rep_bits: int, delta_bits: int):
        num_top = 0
        b = delta_bits
        while b:
            j = (b & -b).bit_length() - 1
            num_top += wt_up.c_values[j]
            b &= b - 1
        num_bot, best_bits = _sweep_min(wt_i.c_values, rep_bits, bspace.basis)
        return _ratio(num_top, wt_up.denominator, num_bot, wt_i.denominator), best_bits

    if mode == "exact":
        _guard(len(comp) + bspace.dim, threshold, "full quotient enumeration")
        best = None
        best_witness = None
        rep, db = 0, 0
        for t in range(1, 1 << len(comp)):
            j = gf2.lowest_bit(t)
            rep ^= comp[j]
            db ^= comp_delta[j]
            val, wbits = coset_value(rep, db)
            if val is None:
                continue  # norm-zero class minimum; cannot realize the min
            if best is None or val < best:
                best, best_witness = val, wbits
        if best is None:
            return ExpansionValue("epsilon", i, None, True, infinite=True)
        return ExpansionValue("epsilon", i, best, True,
                              witness=Cochain(i, best_witness, x.num_cells(i)))
    if mode != "heuristic":
        raise BadParameter(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    best = None
    best_witness = None
    for _ in range(samples):
        rep = 0
        for v in comp:
            if rng.getrandbits(1):
                rep ^= v
        if rep == 0:
            continue
        val, wbits = coset_value(rep, _apply_delta(mat, rep))
        if val is None:
            continue
        if best is None or val < best:
            best, best_witness = val, wbits
    if best is None:
        return ExpansionValue("epsilon", i, None, False, vacuous=True)
    return ExpansionValue("epsilon", i, best, False,
                          witness=Cochain(i, best_witness, x.num_cells(i)))


def epsilon_is_positive(x: Complex, i: int) -> bool:
    """Exact positivity of epsilon_i, certified without enumeration.

    For a finite complex the minimum runs over finitely many classes, each
    with positive coset norm, so epsilon_i > 0 iff no ratio has a zero
    numerator, i.e. iff H^i vanishes.
    """
    if not 0 <= i <= x.d - 1:
        raise BadDimension("coboundary expansion needs 0 <= i <= d-1")
    return cohomology_dim(x, i) == 0


def epsilon_tilde_i(x: Complex, i: int, mode: str = "exact",
                    threshold: int = EXACT_THRESHOLD_BITS,
                    samples: int = 64, seed: int = 0) -> ExpansionValue:
    """Cocycle expansion: min ||delta a|| / ||{a}|| over a outside Z^i."""
    if not 0 <= i <= x.d - 1:
        raise BadDimension("cocycle expansion needs 0 <= i <= d-1")
    wt_i = weight_table(x, i)
    wt_up = weight_table(x, i + 1)
    mat = coboundary_matrix(x, i)
    zspace = cocycle_space(x, i)
    comp = gf2.complement_basis(zspace, x.num_cells(i))
    if not comp:
        return ExpansionValue("epsilon_tilde", i, None, True, vacuous=True)
    _guard(zspace.dim, threshold, "cocycle-coset minimization")
    comp_delta = [_apply_delta(mat, v) for v in comp]

    def coset_value(rep_bits: int, delta_bits: int):
        num_top = 0
        b = delta_bits
        while b:
            j = (b & -b).bit_length() - 1
            num_top += wt_up.c_values[j]
            b &= b - 1
        num_bot, best_bits = _sweep_min(wt_i.c_values, rep_bits, zspace.basis)
        return _ratio(num_top, wt_up.denominator, num_bot, wt_i.denominator), best_bits

    if mode == "exact":
        _guard(len(comp) + zspace.dim, threshold, "full quotient enumeration")
        best = None
        best_witness = None
        rep, db = 0, 0
        for t in range(1, 1 << len(comp)):
            j = gf2.lowest_bit(t)
            rep ^= comp[j]
            db ^= comp_delta[j]
            val, wbits = coset_value(rep, db)
            if val is None:
                continue
            if best is None or val < best:
                best, best_witness = val, wbits
        if best is None:
            return ExpansionValue("epsilon_tilde", i, None, True, infinite=True)
        return ExpansionValue("epsilon_tilde", i, best, True,
                              witness=Cochain(i, best_witness, x.num_cells(i)))
    if mode != "heuristic":
        raise BadParameter(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    best = None
    best_witness = None
    for _ in range(samples):
        rep = 0
        for v in comp:
            if rng.getrandbits(1):
                rep ^= v
        if rep == 0:
            continue
        val, wbits = coset_value(rep, _apply_delta(mat, rep))
        if val is None:
            continue
        if best is None or val < best:
            best, best_witness = val, wbits
    if best is None:
        return ExpansionValue("epsilon_tilde", i, None, False, vacuous=True)
    return ExpansionValue("epsilon_tilde", i, best, False,
                          witness=Cochain(i, best_witness, x.num_cells(i)))


def mu_i(x: Complex, i: int, mode: str = "exact",
         threshold: int = EXACT_THRESHOLD_BITS,
         samples: int = 64, seed: int = 0) -> ExpansionValue:
    """Cofilling: max over nonzero coboundaries b of min{||a|| : delta a = b} / ||b||."""
    if not 0 <= i <= x.d - 1:
        raise BadDimension("cofilling needs 0 <= i <= d-1")
    wt_i = weight_table(x, i)
    wt_up = weight_table(x, i + 1)
    mat = coboundary_matrix(x, i)
    up_space = coboundary_space(x, i + 1)
    zspace = cocycle_space(x, i)
    if up_space.dim == 0:
        return ExpansionValue("mu", i, None, True, vacuous=True)
    _guard(zspace.dim, threshold, "fill minimization")

    def fill_value(beta_bits: int):
        part = gf2.solve(mat.bits, beta_bits, mat.cols)
        assert part is not None, "beta must be a coboundary"
        num_fill, best_bits = _sweep_min(wt_i.c_values, part, zspace.basis)
        num_beta = 0
        b = beta_bits
        while b:
            j = (b & -b).bit_length() - 1
            num_beta += wt_up.c_values[j]
            b &= b - 1
        return _ratio(num_fill, wt_i.denominator, num_beta, wt_up.denominator), best_bits

    if mode == "exact":
        _guard(up_space.dim + zspace.dim, threshold, "coboundary enumeration")
        best = None
        best_witness = None
        beta = 0
        for t in range(1, 1 << up_space.dim):
            beta ^= up_space.basis[gf2.lowest_bit(t)]
            val, wbits = fill_value(beta)
            if val is None:
                return ExpansionValue("mu", i, None, True, infinite=True,
                                      witness=Cochain(i + 1, beta, x.num_cells(i + 1)))
            if best is None or val > best:
                best, best_witness = val, wbits
        return ExpansionValue("mu", i, best, True,
                              witness=Cochain(i, best_witness, x.num_cells(i)))
    if mode != "heuristic":
        raise BadParameter(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    best = None
    best_witness = None
    for _ in range(samples):
        beta = 0
        for v in up_space.basis:
            if rng.getrandbits(1):
                beta ^= v
        if beta == 0:
            continue
        val, wbits = fill_value(beta)
        if val is None:
            return ExpansionValue("mu", i, None, False, infinite=True)
        if best is None or val > best:
            best, best_witness = val, wbits
    if best is None:
        return ExpansionValue("mu", i, None, False, vacuous=True)
    return ExpansionValue("mu", i, best, False,
                          witness=Cochain(i, best_witness, x.num_cells(i)))


def systole(x: Complex, i: int, mode: str = "exact",
            threshold: int = EXACT_THRESHOLD_BITS,
            samples: int = 256, seed: int = 0) -> ExpansionValue:
    """Minimum norm of a cocycle outside B^i; infinite when H^i vanishes."""
    if not 0 <= i <= x.d:
        raise BadDimension("systole needs 0 <= i <= d")
    if cohomology_dim(x, i) == 0:
        return ExpansionValue("systole", i, None, True, infinite=True)
    wt = weight_table(x, i)
    zspace = cocycle_space(x, i)
    bspace = coboundary_space(x, i)
    if mode == "exact":
        _guard(zspace.dim, threshold, "cocycle enumeration")
        best = None
        best_bits = None
        mask = 0
        num = 0
        for t in range(1, 1 << zspace.dim):
            bv = zspace.basis[gf2.lowest_bit(t)]
            new_mask = mask ^ bv
            b = bv
            while b:
                j = (b & -b).bit_length() - 1
                num += wt.c_values[j] if (new_mask >> j) & 1 else -wt.c_values[j]
                b &= b - 1
            mask = new_mask
            if bspace.contains(mask):
                continue
            if best is None or num < best or (
                num == best and _support_key(mask) < _support_key(best_bits)
            ):
                best, best_bits = num, mask
        return ExpansionValue("systole", i, Fraction(best, wt.denominator), True,
                              witness=Cochain(i, best_bits, x.num_cells(i)))
    if mode != "heuristic":
        raise BadParameter(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    best = None
    best_bits = None
    for _ in range(samples):
        mask = 0
        for v in zspace.basis:
            if rng.getrandbits(1):
                mask ^= v
        if bspace.contains(mask):
            continue
        num = 0
        b = mask
        while b:
            j = (b & -b).bit_length() - 1
            num += wt.c_values[j]
            b &= b - 1
        if best is None or num < best:
            best, best_bits = num, mask
    if best is None:
        return ExpansionValue("systole", i, None, False, vacuous=True)
    return ExpansionValue("systole", i, Fraction(best, wt.denominator), False,
                          witness=Cochain(i, best_bits, x.num_cells(i)))


@dataclass(frozen=True)
class ExpansionReport:
    """All requested invariants for one complex, dim by dim."""

    entries: tuple[ExpansionValue, ...]

    def get(self, name: str, dim: int) -> ExpansionValue:
        for e in self.entries:
            if e.name == name and e.dim == dim:
                return e
        raise KeyError((name, dim))


_INVARIANT_FNS = {
    "epsilon": epsilon_i,
    "epsilon_tilde": epsilon_tilde_i,
    "mu": mu_i,
    "systole": systole,
}


def expansion_report(x: Complex, dims: Sequence[int],
                     invariants: Sequence[str] = ("epsilon", "epsilon_tilde", "mu", "systole"),
                     mode: str = "exact",
                     threshold: int = EXACT_THRESHOLD_BITS,
                     seed: int = 0) -> ExpansionReport:
    entries = []
    for name in invariants:
        fn = _INVARIANT_FNS.get(name)
        if fn is None:
            raise BadParameter(f"unknown invariant {name!r}")
        for i in dims:
            entries.append(fn(x, i, mode=mode, threshold=threshold, seed=seed))
    report = ExpansionReport(tuple(entries))
    _check_report_identities(x, report)
    return report


def _check_report_identities(x: Complex, report: ExpansionReport):
    """Assert the paper-level identities on every exact report."""
    by_key = {(e.name, e.dim): e for e in report.entries}
    for (name, i), e in by_key.items():
        if name == "epsilon" and e.exact and e.value is not None and e.value > 0:
            assert cohomology_dim(x, i) == 0, "epsilon > 0 forces vanishing cohomology"
        if name == "mu" and e.exact and e.value is not None:
            tilde = by_key.get(("epsilon_tilde", i))
            if tilde is not None and tilde.exact and tilde.value is not None:
                assert e.value * tilde.value == 1, "mu must be the reciprocal of epsilon-tilde"
