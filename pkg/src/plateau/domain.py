"""Integer encodings for vectors over F_p and value tables of F: F_p^n -> F_p^m.

A vector (x_0, ..., x_{k-1}) over F_p is encoded as the index sum x_i * p**i,
so digit 0 is the least significant; for p = 2 the index is the familiar bit
mask and vector addition is XOR.  A function is stored as the array of output
indices in input-index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

_MAX_INDEX = 1 << 62


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def digits(i: int, p: int, length: int) -> tuple[int, ...]:
    """Little-endian base-p digit vector of the index i."""
    out = []
    for _ in range(length):
        out.append(i % p)
        i //= p
    return tuple(out)


def from_digits(ds: Sequence[int], p: int) -> int:
    i = 0
    for d in reversed(ds):
        i = i * p + d
    return i


def vec_add(i: int, j: int, p: int, length: int) -> int:
    if p == 2:
        return i ^ j
    out = 0
    pk = 1
    for _ in range(length):
        out += ((i + j) % p) * pk
        i //= p
        j //= p
        pk *= p
    return out


def vec_neg(i: int, p: int, length: int) -> int:
    if p == 2:
        return i
    out = 0
    pk = 1
    for _ in range(length):
        out += ((p - i) % p) * pk
        i //= p
        pk *= p
    return out


def vec_sub(i: int, j: int, p: int, length: int) -> int:
    return vec_add(i, vec_neg(j, p, length), p, length)


def dot(i: int, j: int, p: int, length: int) -> int:
    """Coordinatewise scalar product <i, j> in F_p."""
    if p == 2:
        return (i & j).bit_count() & 1
    acc = 0
    for _ in range(length):
        acc += (i % p) * (j % p)
        i //= p
        j //= p
    return acc % p


# ---------------------------------------------------------------------------
# vectorized variants over numpy index arrays (exact int64 arithmetic)

def vec_add_array(xs: np.ndarray, a: int, p: int, length: int) -> np.ndarray:
    if p == 2:
        return xs ^ a
    out = np.zeros_like(xs)
    pk = 1
    aa = a
    for _ in range(length):
        out += ((xs // pk) % p + aa % p) % p * pk
        aa //= p
        pk *= p
    return out


def vec_sub_arrays(us: np.ndarray, vs: np.ndarray, p: int, length: int) -> np.ndarray:
    if p == 2:
        return us ^ vs
    out = np.zeros_like(us)
    pk = 1
    for _ in range(length):
        out += ((us // pk) % p - (vs // pk) % p) % p * pk
        pk *= p
    return out


def vec_add_arrays(us: np.ndarray, vs: np.ndarray, p: int, length: int) -> np.ndarray:
    if p == 2:
        return us ^ vs
    out = np.zeros_like(us)
    pk = 1
    for _ in range(length):
        out += ((us // pk) % p + (vs // pk) % p) % p * pk
        pk *= p
    return out


def dot_array(b: int, vals: np.ndarray, p: int, length: int) -> np.ndarray:
    """<b, vals[i]> for every entry, values in [0, p)."""
    if p == 2:
        return (np.bitwise_count(vals & b) & 1).astype(np.int64)
    acc = np.zeros_like(vals)
    bb = b
    pk = 1
    for _ in range(length):
        bd = bb % p
        if bd:
            acc += bd * ((vals // pk) % p)
        bb //= p
        pk *= p
    return acc % p


def matrix_apply(
    matrix: Sequence[Sequence[int]], vals: np.ndarray, p: int, in_len: int
) -> np.ndarray:
    """Encoded L*v for every entry of vals; matrix rows index output digits."""
    if any(len(row) != in_len for row in matrix):
        raise ValueError(f"matrix rows must have {in_len} entries")
    if p == 2:
        out = np.zeros_like(vals)
        for j, row in enumerate(matrix):
            mask = 0
            for k, c in enumerate(row):
                if c % 2:
                    mask |= 1 << k
            out |= ((np.bitwise_count(vals & mask) & 1).astype(np.int64)) << j
        return out
    out = np.zeros_like(vals)
    pj = 1
    for row in matrix:
        acc = np.zeros_like(vals)
        pk = 1
        for c in row:
            if c % p:
                acc += (c % p) * ((vals // pk) % p)
            pk *= p
        out += (acc % p) * pj
        pj *= p
    return out


def matrix_rank(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p by Gaussian elimination on a copy."""
    rows = [[c % p for c in row] for row in matrix]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p) if p > 2 else 1
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainParams:
    """Shape (p, n, m) of a function F_p^n -> F_p^m."""

    p: int
    n: int
    m: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.n < 1 or self.m < 1:
            raise ValueError(f"dimensions must be >= 1, got n={self.n} m={self.m}")
        if self.p ** self.n >= _MAX_INDEX or self.p ** self.m >= _MAX_INDEX:
            raise ValueError(
                f"p^n and p^m must stay below 2^62; got p={self.p} n={self.n} m={self.m}"
            )

    @property
    def domain_size(self) -> int:
        return self.p ** self.n

    @property
    def codomain_size(self) -> int:
        return self.p ** self.m


class FuncTable:
    """A function F_p^n -> F_p^m as the int64 array of output indices.

    The array is held read-only; equality compares shape parameters and the
    full table.
    """

    __slots__ = ("params", "values")

    def __init__(self, params: DomainParams, values: Iterable[int] | np.ndarray):
        arr = np.asarray(values, dtype=np.int64)
        if arr.shape != (params.domain_size,):
            raise ValueError(
                f"expected {params.domain_size} values for p={params.p} n={params.n}, "
                f"got shape {arr.shape}"
            )
        if arr.size and (int(arr.min()) < 0 or int(arr.max()) >= params.codomain_size):
            bad = int(np.argmax((arr < 0) | (arr >= params.codomain_size)))
            raise ValueError(
                f"value {int(arr[bad])} at input {bad} is outside [0, {params.codomain_size})"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("FuncTable is immutable")

    @classmethod
    def from_callable(cls, params: DomainParams, fn: Callable[[int], int]) -> "FuncTable":
        return cls(params, [fn(x) for x in range(params.domain_size)])

    def value(self, x: int) -> int:
        return int(self.values[x])

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __iter__(self) -> Iterator[int]:
        return iter(self.values.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FuncTable):
            return NotImplemented
        return self.params == other.params and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.params, self.values.tobytes()))

    def __repr__(self) -> str:
        pr = self.params
        return f"FuncTable(p={pr.p}, n={pr.n}, m={pr.m})"

    def shifted_output(self, beta: int) -> "FuncTable":
        """The table of x -> F(x) - beta."""
        pr = self.params
        if not 0 <= beta < pr.codomain_size:
            raise ValueError(f"beta {beta} outside [0, {pr.codomain_size})")
        nb = vec_neg(beta, pr.p, pr.m)
        return FuncTable(pr, vec_add_array(self.values, nb, pr.p, pr.m))

    def shifted_input(self, x0: int) -> "FuncTable":
        """The table of x -> F(x + x0)."""
        pr = self.params
        if not 0 <= x0 < pr.domain_size:
            raise ValueError(f"x0 {x0} outside [0, {pr.domain_size})")
        xs = vec_add_array(np.arange(pr.domain_size, dtype=np.int64), x0, pr.p, pr.n)
        return FuncTable(pr, self.values[xs])
