"""Arithmetic in the two fixed fields used by the randomized tests.

``P61`` is the prime field modulo the Mersenne prime 2**61 - 1.
``GF2_64`` is GF(2)[x] / (x^64 + x^4 + x^3 + x + 1); elements are 64-bit
coefficient masks, bit ``i`` holding the coefficient of ``x^i``.

Scalars are wrapped in :class:`FieldElement`.  The DP engine works on whole
``uint64`` numpy arrays through the vector kernels of :class:`PrimeField61`
and :class:`BinaryField64`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

P = (1 << 61) - 1
MASK64 = (1 << 64) - 1
# x^64 = x^4 + x^3 + x + 1 in the quotient ring
GF2_64_TAIL = 0b11011


class FieldTag(enum.Enum):
    P61 = "P61"
    GF2_64 = "GF2_64"


class FieldMismatchError(TypeError):
    pass


def _p61_mul(a: int, b: int) -> int:
    t = a * b
    t = (t & P) + (t >> 61)
    t = (t & P) + (t >> 61)
    return t - P if t >= P else t


def clmul(a: int, b: int) -> int:
    """Carry-less product of two integers, unreduced."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def gf2_64_reduce(t: int) -> int:
    # each fold shrinks the spill by 60 bits
    while t >> 64:
        hi = t >> 64
        t = (t & MASK64) ^ clmul(hi, GF2_64_TAIL)
    return t


def _gf2_mul(a: int, b: int) -> int:
    return gf2_64_reduce(clmul(a, b))


@dataclass(frozen=True)
class FieldElement:
    which: FieldTag
    value: int

    def __post_init__(self):
        if self.which is FieldTag.P61:
            if not 0 <= self.value < P:
                raise ValueError(f"P61 value out of canonical range: {self.value}")
        elif not 0 <= self.value <= MASK64:
            raise ValueError(f"GF2_64 value is not a 64-bit mask: {self.value}")

    @classmethod
    def of(cls, which: FieldTag, value: int) -> FieldElement:
        """Build an element from any integer, reducing it into canonical form."""
        if which is FieldTag.P61:
            return cls(which, value % P)
        if value < 0:
            raise ValueError("GF2_64 masks are non-negative")
        return cls(which, gf2_64_reduce(value))

    @classmethod
    def zero(cls, which: FieldTag) -> FieldElement:
        return cls(which, 0)

    @classmethod
    def one(cls, which: FieldTag) -> FieldElement:
        return cls(which, 1)

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            raise ValueError("negative exponents are not supported")
        result = FieldElement.one(self.which)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        if self.which is FieldTag.GF2_64:
            return f"GF2_64(0x{self.value:016x})"
        return f"P61({self.value})"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    if x.which is not y.which:
        raise FieldMismatchError(f"cannot add {x.which.value} and {y.which.value}")
    if x.which is FieldTag.P61:
        s = x.value + y.value
        return FieldElement(x.which, s - P if s >= P else s)
    return FieldElement(x.which, x.value ^ y.value)


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    if x.which is not y.which:
        raise FieldMismatchError(f"cannot multiply {x.which.value} and {y.which.value}")
    if x.which is FieldTag.P61:
        return FieldElement(x.which, _p61_mul(x.value, y.value))
    return FieldElement(x.which, _gf2_mul(x.value, y.value))


def sample_uniform(rng: np.random.Generator, which: FieldTag) -> FieldElement:
    """Draw one uniform element; deterministic given the generator state."""
    return FieldElement(which, int(arithmetic(which).sample(rng, 1)[0]))


def field_size(which: FieldTag) -> int:
    return P if which is FieldTag.P61 else 1 << 64


# ---------------------------------------------------------------------------
# vector kernels over uint64 arrays

_U32 = np.uint64(0xFFFFFFFF)
_U29 = np.uint64((1 << 29) - 1)
_P = np.uint64(P)


_SHIFT = [np.uint64(k) for k in range(65)]


def _u(k: int) -> np.uint64:
    return _SHIFT[k]


class PrimeField61:
    """Element-wise arithmetic modulo 2**61 - 1 on canonical uint64 arrays."""

    tag = FieldTag.P61
    size = P

    @staticmethod
    def reduce(t: np.ndarray) -> np.ndarray:
        # valid for t < 2**64; leaves a value in [0, p)
        t = (t & _P) + (t >> _u(61))
        # t - p wraps around to a huge value when t < p
        return np.minimum(t, t - _P)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        s = a + b
        return np.minimum(s, s - _P)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # 32-bit limbs: a = a1*2^32 + a0 with a1 < 2^29
        a0, a1 = a & _U32, a >> _u(32)
        b0, b1 = b & _U32, b >> _u(32)
        lo = a0 * b0  # < 2^64
        mid = a1 * b0
        mid += a0 * b1  # < 2^62
        hi = a1 * b1  # < 2^58
        # hi * 2^64 = hi * 8 (mod p); mid * 2^32 = (mid >> 29) + (mid & (2^29-1)) * 2^32
        acc = lo & _P
        acc += lo >> _u(61)
        acc += hi << _u(3)
        acc += mid >> _u(29)
        mid &= _U29
        mid <<= _u(32)
        acc += mid  # < 3 * 2^61 + 2^33
        return self.reduce(acc)

    def _fold(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        # lo + hi * 2^32 (mod p) for plain sums of 32-bit halves
        lo = self.reduce(lo)
        hi = self.reduce(hi)  # hi < p, so hi * 2^32 needs the same fold as in mul
        t_hi = (hi >> _u(29)) + ((hi & _U29) << _u(32))
        return self.reduce(lo + self.reduce(t_hi))

    def sum(self, a: np.ndarray, axis: int) -> np.ndarray:
        # split into 32-bit halves so the plain sums cannot overflow;
        # keepdims avoids numpy scalars, whose wrap-around would warn
        lo = (a & _U32).sum(axis=axis, dtype=np.uint64, keepdims=True)
        hi = (a >> _u(32)).sum(axis=axis, dtype=np.uint64, keepdims=True)
        return np.squeeze(self._fold(lo, hi), axis=axis)

    def segment_sum(self, a: np.ndarray, starts: np.ndarray) -> np.ndarray:
        """Sum a 3-d array over axis 1 and over runs of axis 2 beginning at ``starts``.

        Needs fewer than 2^32 terms per output.
        """
        lo = np.add.reduceat((a & _U32).sum(axis=1, dtype=np.uint64), starts, axis=1)
        hi = np.add.reduceat((a >> _u(32)).sum(axis=1, dtype=np.uint64), starts, axis=1)
        return self._fold(lo, hi)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        out = rng.bit_generator.random_raw(size) >> _u(3)
        bad = out == _P
        while bad.any():
            out[bad] = rng.bit_generator.random_raw(int(bad.sum())) >> _u(3)
            bad = out == _P
        return out


class BinaryField64:
    """Element-wise arithmetic in GF(2^64) on uint64 coefficient masks."""

    tag = FieldTag.GF2_64
    size = 1 << 64

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a ^ b

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape
        a = a.ravel()
        b = b.ravel()
        cols = np.arange(a.size)
        # products of a with every 4-bit polynomial t, split into low word and 3 spill bits
        tlo = np.zeros((16, a.size), dtype=np.uint64)
        thi = np.zeros((16, a.size), dtype=np.uint64)
        for t in range(1, 16):
            if t & 1:
                tlo[t] = tlo[t - 1] ^ a
                thi[t] = thi[t - 1]
            else:
                tlo[t] = tlo[t >> 1] << _u(1)
                thi[t] = (thi[t >> 1] << _u(1)) | (tlo[t >> 1] >> _u(63))
        lo = np.zeros(a.size, dtype=np.uint64)
        hi = np.zeros(a.size, dtype=np.uint64)
        for j in range(16):
            nib = ((b >> _u(4 * j)) & _u(15)).astype(np.intp)
            pl = tlo[nib, cols]
            ph = thi[nib, cols]
            lo ^= pl << _u(4 * j)
            if j:
                hi ^= (pl >> _u(64 - 4 * j)) ^ (ph << _u(4 * j))
            else:
                hi ^= ph
        spill = (hi >> _u(63)) ^ (hi >> _u(61)) ^ (hi >> _u(60))
        lo ^= hi ^ (hi << _u(1)) ^ (hi << _u(3)) ^ (hi << _u(4))
        lo ^= spill ^ (spill << _u(1)) ^ (spill << _u(3)) ^ (spill << _u(4))
        return lo.reshape(shape)

    def sum(self, a: np.ndarray, axis: int) -> np.ndarray:
        return np.bitwise_xor.reduce(a, axis=axis)

    def segment_sum(self, a: np.ndarray, starts: np.ndarray) -> np.ndarray:
        return np.bitwise_xor.reduceat(np.bitwise_xor.reduce(a, axis=1), starts, axis=1)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.bit_generator.random_raw(size).astype(np.uint64)


_ARITHMETIC = {FieldTag.P61: PrimeField61(), FieldTag.GF2_64: BinaryField64()}


def arithmetic(which: FieldTag):
    return _ARITHMETIC[which]
