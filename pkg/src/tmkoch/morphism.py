"""Symbolic substitution whose iterates trace the partial-sum path.

For odd ``m`` the alphabet is ``{0, ..., 2m-1}`` and letter ``a`` stands for
the step ``exp(a*pi*i/m)``; for even ``m`` it is ``{0, ..., m-1}`` with step
``exp(2*a*pi*i/m)``. In both cases ``phi(a)`` lists the ``m+1`` signed steps
of the first block, rotated by ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import VertexCapExceeded
from .geometry import partial_sum, partial_sums, root_of_unity
from .report import CheckReport
from .sequence import SignPattern

WORD_CAP = 2**24


@dataclass(frozen=True, eq=False)
class Morphism:
    pattern: SignPattern
    alphabet_size: int
    parity: str  # "odd" or "even"
    images: np.ndarray  # (alphabet_size, m+1) int64

    @property
    def m(self) -> int:
        return self.pattern.m


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    entries: np.ndarray  # entries[a, b] = number of b in phi(a)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def is_circulant(self) -> bool:
        e = self.entries
        return bool(np.array_equal(np.roll(np.roll(e, 1, axis=0), 1, axis=1), e))


def build_morphism(pattern: SignPattern) -> Morphism:
    m = pattern.m
    k = np.arange(m + 1)
    flipped = np.asarray(pattern.deltas) == -1
    if m % 2:
        size, parity = 2 * m, "odd"
        first = 2 * k + np.where(flipped, m, 0)
    else:
        size, parity = m, "even"
        first = k + np.where(flipped, m // 2, 0)
    images = (np.arange(size)[:, None] + first[None, :]) % size
    images.setflags(write=False)
    assert np.all(images[:, 0] == np.arange(size))
    return Morphism(pattern, size, parity, images)


def _check_word(phi: Morphism, word) -> np.ndarray:
    w = np.asarray(word, dtype=np.int64).reshape(-1)
    if w.size and (w.min() < 0 or w.max() >= phi.alphabet_size):
        raise ValueError(f"symbol out of range 0..{phi.alphabet_size - 1}")
    return w


def apply_morphism(phi: Morphism, word: Sequence[int]) -> np.ndarray:
    w = _check_word(phi, word)
    if w.size * (phi.m + 1) > WORD_CAP:
        raise VertexCapExceeded(f"image length exceeds cap {WORD_CAP}")
    return phi.images[w].reshape(-1)


def iterate_symbol(phi: Morphism, a: int, n: int) -> np.ndarray:
    """phi**n applied to the one-letter word ``a``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if (phi.m + 1) ** n > WORD_CAP:
        raise VertexCapExceeded(f"phi^{n} has length above {WORD_CAP}")
    word = _check_word(phi, [a])
    for _ in range(n):
        word = phi.images[word].reshape(-1)
    return word


def letter_steps(phi: Morphism) -> np.ndarray:
    """f of each single letter."""
    if phi.parity == "odd":
        # exp(a*pi*i/m) is a 2m-th root of unity
        return np.array([root_of_unity(2 * phi.m, a) for a in range(phi.alphabet_size)])
    return np.array([root_of_unity(phi.m, a) for a in range(phi.alphabet_size)])


def embedding_f(phi: Morphism, word: Sequence[int]) -> complex:
    """Additive map sending each letter to its unit step; empty word -> 0."""
    w = _check_word(phi, word)
    return complex(letter_steps(phi)[w].sum()) if w.size else 0j


def word_path(phi: Morphism, word: Sequence[int]) -> np.ndarray:
    """Vertices 0, f(w1), f(w1 w2), ... of the path traced by a word."""
    w = _check_word(phi, word)
    out = np.zeros(w.size + 1, dtype=np.complex128)
    np.cumsum(letter_steps(phi)[w], out=out[1:])
    return out


def conjugacy_check(pattern: SignPattern, word: Sequence[int], tol: float = 1e-9,
                    spot_tol: float = 1e-8, spot_depth: int = 3) -> CheckReport:
    """Check f(phi(w)) = p(m+1) f(w), plus f(phi^n(prefix_j)) = p(j (m+1)^n).

    ``prefix_j`` is the first ``j`` letters of phi(0); the second identity is
    spot-checked for every j in 1..m and n up to ``spot_depth``.
    """
    phi = build_morphism(pattern)
    factor = partial_sum(pattern, pattern.m + 1)
    w = _check_word(phi, word)
    deviation = abs(embedding_f(phi, apply_morphism(phi, w)) - factor * embedding_f(phi, w))

    m = pattern.m
    spot = 0.0
    sums = partial_sums(pattern, m * (m + 1) ** spot_depth)
    for j in range(1, m + 1):
        prefix = phi.images[0][:j]
        for n in range(spot_depth + 1):
            spot = max(spot, abs(embedding_f(phi, prefix) - sums[j * (m + 1) ** n]))
            prefix = apply_morphism(phi, prefix)
    return CheckReport(
        "conjugacy",
        deviation <= tol and spot <= spot_tol,
        {"deviation": float(deviation), "spot_deviation": float(spot),
         "tol": tol, "spot_tol": spot_tol},
    )


def incidence_matrix(phi: Morphism) -> IncidenceMatrix:
    size = phi.alphabet_size
    entries = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        entries[a] = np.bincount(phi.images[a], minlength=size)
    mat = IncidenceMatrix(entries)
    assert np.all(entries.sum(axis=1) == phi.m + 1)
    assert mat.is_circulant()
    return mat


def dominant_eigenvalue(matrix, iterations: int = 100) -> float:
    """Power-iteration estimate of the spectral radius of a non-negative matrix.

    Starts from the all-ones vector, which is already an eigenvector when
    every row has the same sum.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    a = np.asarray(getattr(matrix, "entries", matrix), dtype=np.float64)
    x = np.ones(a.shape[0])
    lam = 0.0
    for _ in range(iterations):
        y = a @ x
        top = float(np.max(np.abs(y)))
        if top == 0:
            return 0.0
        lam = top / float(np.max(np.abs(x)))
        x = y / top
    return lam


def _proof_bound(pattern: SignPattern) -> int:
    m, d1 = pattern.m, pattern.deltas[1]
    if m % 2:
        return m if d1 == 1 else 2 * m - 1
    return m - 1


def primitivity_index(phi: Morphism, bound: Optional[int] = None) -> tuple[Optional[int], CheckReport]:
    """Smallest n <= bound such that phi**n(0) contains every letter.

    By translation covariance (phi**n(a) = phi**n(0) + a) this is enough for
    primitivity. Letter presence is propagated through the zero pattern of
    the incidence matrix, so no word is ever expanded.
    """
    m = phi.m
    if bound is None:
        bound = max(2 * m - 1, m)
    if bound < 1:
        raise ValueError("bound must be at least 1")
    reach_step = incidence_matrix(phi).entries > 0
    present = reach_step[0].copy()
    index = None
    for n in range(1, bound + 1):
        if present.all():
            index = n
            break
        present = (present.astype(np.int64) @ reach_step.astype(np.int64)) > 0
    proof_bound = _proof_bound(phi.pattern)
    metrics = {"bound": float(bound), "proof_bound": float(proof_bound)}
    notes = ""
    if index is not None:
        metrics["index"] = float(index)
    else:
        notes = f"no n <= {bound} with every letter in phi^n(0)"
        factor = abs(partial_sum(phi.pattern, m + 1))
        if phi.parity == "even" and phi.pattern.deltas[1] == -1 and factor > 1:
            notes += ("; degenerate even case with d1=-1: phi(0) holds no odd letter "
                      "although |p(m+1)| > 1, so the primitivity argument does not apply")
    return index, CheckReport("primitivity", index is not None, metrics, notes)
