"""Difference distribution tables, uniformity, and fourth-moment identities.

A DDT row for the input difference c counts solutions of F(x+c) - F(x) = d.
Rows are produced lazily so summaries never hold more than O(p^m) counts at
once.  The fourth moment of the Walsh spectrum is computed on the differential
side, p^(n+m) * sum of squared difference-map fiber sizes, which equals the
spectral sum over all (b, a); the spectral side is recomputed directly as a
cross-check whenever the table is small enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from ._util import exact_sum
from .domain import FuncTable, vec_add_array, vec_sub_arrays
from .errors import InternalCheckError
from .walsh import WalshRow, walsh_row, walsh_rows_signs_p2

# chunk of input differences processed per batch; the scratch matrix is
# chunk * p^n entries, kept near 4M
_SCRATCH = 1 << 22


def ddt_row(table: FuncTable, c: int) -> np.ndarray:
    """Counts of F(x+c) - F(x) = d over all x, indexed by d."""
    pr = table.params
    if not 0 <= c < pr.domain_size:
        raise ValueError(f"difference {c} outside [0, {pr.domain_size})")
    xs = np.arange(pr.domain_size, dtype=np.int64)
    shifted = table.values[vec_add_array(xs, c, pr.p, pr.n)]
    diffs = vec_sub_arrays(shifted, table.values, pr.p, pr.m)
    return np.bincount(diffs, minlength=pr.codomain_size)


def ddt_rows(table: FuncTable, include_zero: bool = False) -> Iterator[tuple[int, np.ndarray]]:
    """(c, row) pairs in ascending c order, skipping c = 0 unless asked.

    Rows are emitted from a shared scratch buffer in chunks; callers must not
    hold references across iterations (copy if needed).
    """
    pr = table.params
    pn, pm = pr.domain_size, pr.codomain_size
    start = 0 if include_zero else 1
    chunk = max(1, _SCRATCH // pn)
    xs = np.arange(pn, dtype=np.int64)
    for lo in range(start, pn, chunk):
        cs = np.arange(lo, min(lo + chunk, pn), dtype=np.int64)
        if pr.p == 2:
            shifted = table.values[xs[None, :] ^ cs[:, None]]
            diffs = shifted ^ table.values[None, :]
        else:
            idx = np.empty((cs.shape[0], pn), dtype=np.int64)
            for k, c in enumerate(cs.tolist()):
                idx[k] = vec_add_array(xs, c, pr.p, pr.n)
            diffs = vec_sub_arrays(table.values[idx], table.values[None, :], pr.p, pr.m)
        flat = diffs + (np.arange(cs.shape[0], dtype=np.int64) * pm)[:, None]
        rows = np.bincount(flat.reshape(-1), minlength=cs.shape[0] * pm)
        rows = rows.reshape(cs.shape[0], pm)
        for k, c in enumerate(cs.tolist()):
            yield c, rows[k]


def ddt(table: FuncTable) -> np.ndarray:
    """The full (p^n - 1) x p^m table; row index c - 1."""
    pr = table.params
    out = np.empty((pr.domain_size - 1, pr.codomain_size), dtype=np.int64)
    for c, row in ddt_rows(table):
        out[c - 1] = row
    return out


@dataclass(frozen=True)
class DiffSummary:
    """Differential uniformity and shape of the nonzero DDT entries."""

    delta: int
    two_valued_at: Optional[int]
    apn: Optional[bool]

    def as_dict(self) -> dict:
        return {"delta": self.delta, "two_valued_at": self.two_valued_at, "apn": self.apn}


def diff_summary(table: FuncTable) -> DiffSummary:
    """Streams DDT rows once; never materializes the full table."""
    pr = table.params
    pn = pr.domain_size
    delta = 0
    nonzero_values: set[int] = set()
    for c, row in ddt_rows(table):
        # nonnegative entries totalling p^n < 2^62, so int64 cannot overflow
        total = int(row.sum(dtype=np.int64))
        if total != pn:
            raise InternalCheckError(f"DDT row {c} sums to {total}, expected {pn}")
        if pr.p == 2 and bool(np.any(row & 1)):
            raise InternalCheckError(f"DDT row {c} has an odd entry at p = 2")
        m = int(row.max())
        if m > delta:
            delta = m
        if len(nonzero_values) <= 2:
            nonzero_values.update(int(v) for v in np.unique(row[row > 0]).tolist())
    two_valued = nonzero_values.pop() if len(nonzero_values) == 1 else None
    apn = (delta <= 2) if (pr.p == 2 and pr.n == pr.m) else None
    return DiffSummary(delta, two_valued, apn)


@dataclass(frozen=True)
class FourthMoment:
    """Exact fourth-moment sums of the Walsh spectrum.

    `restricted` excludes the b = 0 row, matching the sum whose value
    p^(3n+t)(p^n - 1) characterizes t-plateaued single-amplitude functions
    and whose APN threshold is (2^n - 1) 2^(3n+1).
    """

    all_masks: int
    restricted: int
    apn_by_moment: Optional[bool]

    def as_dict(self) -> dict:
        return {
            "all_masks": self.all_masks,
            "restricted": self.restricted,
            "apn_by_moment": self.apn_by_moment,
        }


def _diff_sq_sum_all(table: FuncTable) -> int:
    """Sum over every c (including 0) and d of squared DDT entries."""
    pr = table.params
    bits = (pr.domain_size ** 2).bit_length()
    total = pr.domain_size ** 2  # c = 0 row: single spike of p^n
    for _, row in ddt_rows(table):
        total += exact_sum(row * row, bits)
    return total


def _walsh_fourth_sum_all(table: FuncTable) -> int:
    """Direct spectral sum of |W(b,a)|^4 over every (b, a); cross-check path."""
    pr = table.params
    p, n = pr.p, pr.n
    if p == 2:
        if 4 * n + 1 <= 62:
            total = 0
            step = max(1, _SCRATCH // pr.domain_size)
            for lo in range(0, pr.codomain_size, step):
                bs = np.arange(lo, min(lo + step, pr.codomain_size), dtype=np.int64)
                rows = walsh_rows_signs_p2(table, bs).astype(np.int64)
                sq = rows * rows
                total += exact_sum(sq * sq, 4 * n + 1)
            return total
        total = 0
        for b in range(pr.codomain_size):
            row = walsh_row(table, b)
            total += sum(int(v) ** 4 for v in row.data.tolist())
        return total
    if p ** (4 * n + 3) < 1 << 62:
        sums = [0] * p
        for b in range(pr.codomain_size):
            row = walsh_row(table, b)
            sq = _sq_mod_matrix(row)
            quad = _ring_sq_matrix(sq)
            bits = (p ** (4 * n + 3)).bit_length()
            for k in range(p):
                sums[k] += exact_sum(quad[:, k], bits)
        if any(sums[k] != sums[1] for k in range(2, p)):
            raise InternalCheckError(f"fourth-moment sum is not rational: {sums}")
        return sums[0] - sums[1]
    total = 0
    for b in range(pr.codomain_size):
        for w in walsh_row(table, b).values():
            m2 = w.sq_modulus()
            total += (m2 * m2).as_integer()
    return total


def _sq_mod_matrix(row: WalshRow) -> np.ndarray:
    p = row.p
    mat = row.data
    out = np.empty_like(mat)
    for k in range(p):
        out[:, k] = (mat * np.roll(mat, k, axis=1)).sum(axis=1)
    return out


def _ring_sq_matrix(mat: np.ndarray) -> np.ndarray:
    """Exponent coefficients of the ring square of each row."""
    p = mat.shape[1]
    rev = mat[:, ::-1]
    out = np.empty_like(mat)
    for k in range(p):
        out[:, k] = (mat * np.roll(rev, k + 1, axis=1)).sum(axis=1)
    return out


def fourth_moment(table: FuncTable, verify_walsh_side: Optional[bool] = None) -> FourthMoment:
    """Fourth moment via the differential side, optionally cross-checked.

    verify_walsh_side defaults to on for tables with p^(n+m) <= 2^20; the two
    sides must agree exactly or an internal error is raised.
    """
    pr = table.params
    diff_side = _diff_sq_sum_all(table)
    all_masks = pr.p ** (pr.n + pr.m) * diff_side
    if verify_walsh_side is None:
        verify_walsh_side = pr.p ** (pr.n + pr.m) <= 1 << 20
    if verify_walsh_side:
        walsh_side = _walsh_fourth_sum_all(table)
        if walsh_side != all_masks:
            raise InternalCheckError(
                f"fourth moment mismatch: spectral side {walsh_side}, "
                f"differential side {all_masks}"
            )
    restricted = all_masks - pr.p ** (4 * pr.n)
    apn_by_moment = None
    if pr.p == 2 and pr.n == pr.m:
        apn_by_moment = restricted == (2 ** pr.n - 1) * 2 ** (3 * pr.n + 1)
    return FourthMoment(all_masks, restricted, apn_by_moment)
