"""Exact arithmetic in Z[zeta_p], zeta_p a primitive p-th root of unity, p prime.

Values are stored on the integral basis {1, zeta, ..., zeta^(p-2)}.  The
relation 1 + zeta + ... + zeta^(p-1) = 0 eliminates the top power, and the
stored coordinate tuple is the unique representation on that basis, so
equality of coordinates is equality in the ring.  For p = 2 the basis is {1}
and the type degenerates to a plain integer.
"""

from __future__ import annotations

from typing import Sequence

from .domain import is_prime


class CycInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        cs = tuple(int(c) for c in coeffs)
        if len(cs) != p - 1:
            raise ValueError(f"need {p - 1} basis coordinates for p={p}, got {len(cs)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value) -> None:
        raise AttributeError("CycInt is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_int(cls, p: int, v: int) -> "CycInt":
        return cls(p, (v,) + (0,) * (p - 2))

    @classmethod
    def from_exponent_coeffs(cls, p: int, counts: Sequence[int]) -> "CycInt":
        """Canonicalize sum_k counts[k] * zeta^k, 0 <= k <= p-1."""
        cs = [int(c) for c in counts]
        if len(cs) > p:
            raise ValueError(f"at most {p} exponent coefficients for p={p}")
        cs += [0] * (p - len(cs))
        top = cs[p - 1]
        return cls(p, tuple(cs[k] - top for k in range(p - 1)))

    @classmethod
    def root_power(cls, p: int, k: int) -> "CycInt":
        """zeta^k as a ring element."""
        counts = [0] * p
        counts[k % p] = 1
        return cls.from_exponent_coeffs(p, counts)

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError(f"mixed p: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return CycInt.from_int(self.p, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "CycInt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other) -> "CycInt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CycInt(self.p, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other) -> "CycInt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.p, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        acc[(i + j) % p] += a * b
        return CycInt.from_exponent_coeffs(p, acc)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        """Complex conjugation zeta -> zeta^(p-1)."""
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            acc[(p - i) % p] = a
        return CycInt.from_exponent_coeffs(p, acc)

    def sq_modulus(self) -> "CycInt":
        """self * conj(self); a rational integer only when self is real-normed."""
        return self * self.conj()

    # -- predicates / conversions -------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_integer(self) -> int:
        if not self.is_rational():
            raise ValueError(f"not a rational integer: {self!r}")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycInt):
            return self.p == other.p and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CycInt(p={self.p}, {list(self.coeffs)})"
