"""Generalized Thue-Morse sign sequences.

The sequence attached to a pattern ``(+1, d1, ..., dm)`` is the fixed point
beginning with +1 of the block substitution ``s -> (s*d0, s*d1, ..., s*dm)``.
Two independent routes compute it: a digit-product formula in base ``m+1``
(fast, used everywhere) and literal block substitution (slow, kept as an
oracle).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import PatternError, VertexCapExceeded

MAX_PREFIX = 2**24


@dataclass(frozen=True)
class SignPattern:
    """Parameters ``m`` and ``deltas = (d0=+1, d1, ..., dm)``."""

    m: int
    deltas: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise PatternError(f"m must be a positive integer, got {self.m!r}")
        if len(self.deltas) != self.m + 1:
            raise PatternError(
                f"expected {self.m + 1} deltas for m={self.m}, got {len(self.deltas)}"
            )
        if any(d not in (1, -1) for d in self.deltas):
            raise PatternError(f"deltas must be +1 or -1, got {self.deltas}")
        if self.deltas[0] != 1:
            raise PatternError("deltas[0] must be +1")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "deltas", tuple(int(d) for d in self.deltas))

    @property
    def base(self) -> int:
        return self.m + 1

    def label(self) -> str:
        return "(" + ",".join("+1" if d > 0 else "-1" for d in self.deltas) + ")"


def make_pattern(m: int, signs: Sequence[int]) -> SignPattern:
    """Build a pattern from ``m`` and the free signs ``d1..dm``."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise PatternError(f"m must be a positive integer, got {m!r}")
    signs = list(signs)
    if len(signs) != m:
        raise PatternError(f"expected {m} signs, got {len(signs)}")
    for s in signs:
        if isinstance(s, bool) or s not in (1, -1):
            raise PatternError(f"sign must be +1 or -1, got {s!r}")
    return SignPattern(int(m), (1, *(int(s) for s in signs)))


def delta_at(pattern: SignPattern, n: int) -> int:
    """Return the n-th term as the product of deltas over base-(m+1) digits of n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    base = pattern.base
    deltas = pattern.deltas
    sign = 1
    while n:
        n, digit = divmod(n, base)
        sign *= deltas[digit]
    return sign


def delta_array(pattern: SignPattern, count: int) -> np.ndarray:
    """Vectorized digit-product formula for indices ``0..count-1`` (int8 array)."""
    base = pattern.base
    deltas = np.asarray(pattern.deltas, dtype=np.int8)
    idx = np.arange(count, dtype=np.int64)
    out = np.ones(count, dtype=np.int8)
    while idx.any():
        out *= deltas[idx % base]
        idx //= base
    return out


def sequence_prefix(pattern: SignPattern, count: int) -> list[int]:
    """First ``count`` terms by repeated block substitution starting from +1."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if count > MAX_PREFIX:
        raise VertexCapExceeded(f"count {count} exceeds cap {MAX_PREFIX}")
    block = np.asarray(pattern.deltas, dtype=np.int8)
    word = np.ones(1, dtype=np.int8)
    while word.size < count:
        # each sign s becomes (s*d0, ..., s*dm)
        word = np.outer(word, block).ravel()
    return [int(s) for s in word[:count]]


def classical_tm_oracle(n: int) -> int:
    """Classical Thue-Morse term (-1)**s(n), s(n) the binary digit sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return -1 if bin(n).count("1") % 2 else 1
