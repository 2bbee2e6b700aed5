"""Linear algebra over prime fields, CRT and rational reconstruction.

The elimination is a right-looking blocked LU.  Panels are factored by the
int64 kernels in :mod:`qvf._kernels`; the trailing update is a float64 GEMM,
which is exact as long as every partial sum stays below ``2**53``.  With
centred residues ``|x| < p/2`` and ``p < 2**23`` a 128-wide block keeps the
worst case under ``2**51``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "PRIMES",
    "PrimeField",
    "row_echelon",
    "modular_nullspace",
    "crt",
    "rational_reconstruct",
]

# Largest primes below 2**23, in decreasing order.
PRIMES: tuple[int, ...] = (8388593, 8388587, 8388581, 8388571, 8388547, 8388539)

BLAS_EXACT_LIMIT = 1 << 23
BLOCK = 128
_ROW_CHUNK = 1024


@dataclass(frozen=True)
class PrimeField:
    """The field ``Z/pZ``; calling it reduces an int or Fraction to a residue."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2 or not _is_probable_prime(self.modulus):
            raise ValueError(f"{self.modulus} is not prime")

    def __call__(self, x) -> int:
        p = self.modulus
        if isinstance(x, Fraction):
            den = x.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(den, -1, p) % p
        return int(x) % p

    def inv(self, x: int) -> int:
        return pow(int(x), -1, self.modulus)

    def vector(self, values: Iterable) -> np.ndarray:
        return np.array([self(v) for v in values], dtype=np.int64)


def _is_probable_prime(n: int) -> bool:
    if n < 4:
        return n in (2, 3)
    if n % 2 == 0:
        return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _centred(x: np.ndarray, p: int) -> np.ndarray:
    y = np.asarray(x, dtype=np.float64)
    return y - p * np.rint(y * (1.0 / p))


def _reduce_inplace(blk: np.ndarray, p: int) -> None:
    # np.remainder is an order of magnitude slower; the floor quotient can be
    # off by one, leaving values in (-p, 2p), which _centred tolerates
    blk -= np.floor(blk * (1.0 / p)) * p


def _unit_lower_inverse(L: np.ndarray, p: int) -> np.ndarray:
    k = L.shape[0]
    X = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        if i:
            X[i, :i] = (-(L[i, :i] @ X[:i, :i])) % p
        X[i, i] = 1
    return X


def row_echelon(A, p: int, block: int = BLOCK):
    """Row echelon form of ``A`` mod ``p``.

    ``A`` may be an int array with entries in ``[0, p)`` or a float64 array
    (it is then reduced in place, saving a copy of large matrices).
    Pivoting takes the first row with a nonzero entry in the leftmost
    remaining column.  Returns ``(U, pivots)`` with ``U`` of shape
    ``(rank, n)`` as int64.
    """
    if p >= 1 << 31:
        raise ValueError("modulus must be below 2**31 for the int64 kernels")
    if isinstance(A, np.ndarray) and A.dtype == np.float64:
        W = A
    else:
        W = np.array(A, dtype=np.int64) % p
        W = W.astype(np.float64) if p < BLAS_EXACT_LIMIT else W
    m, n = W.shape
    if p >= BLAS_EXACT_LIMIT:
        # no exact GEMM available: one panel spanning the whole matrix
        panel = W.astype(np.int64)
        pc, _ = _kernels.panel_eliminate(panel, p)
        k = len(pc)
        U = panel[:k].copy()
        for i in range(k):
            U[i, pc[:i]] = 0
        return U, pc

    pivots: list[int] = []
    r0 = 0
    for c0 in range(0, n, block):
        if r0 >= m:
            break
        c1 = min(c0 + block, n)
        panel = W[r0:, c0:c1].astype(np.int64) % p
        pc, swaps = _kernels.panel_eliminate(panel, p)
        k = len(pc)
        if c1 < n:
            for i, s in enumerate(swaps):
                if s != i:
                    W[[r0 + i, r0 + s], c1:] = W[[r0 + s, r0 + i], c1:]
        L11 = np.zeros((k, k), dtype=np.int64)
        for i in range(1, k):
            L11[i, :i] = panel[i, pc[:i]]
            panel[i, pc[:i]] = 0
        L21 = panel[k:, pc].copy() if k else None
        panel[k:] = 0
        W[r0:, c0:c1] = panel
        if c1 < n and k:
            U12 = _centred(_unit_lower_inverse(L11, p), p) @ _centred(W[r0:r0 + k, c1:], p)
            _reduce_inplace(U12, p)
            W[r0:r0 + k, c1:] = U12
            U12c = _centred(U12, p)
            L21c = _centred(L21, p)
            for s in range(r0 + k, m, _ROW_CHUNK):
                e = min(s + _ROW_CHUNK, m)
                blk = W[s:e, c1:]
                blk -= L21c[s - r0 - k:e - r0 - k] @ U12c
                _reduce_inplace(blk, p)
        pivots.extend(int(c0 + c) for c in pc)
        r0 += k
    rank = len(pivots)
    return W[:rank].astype(np.int64) % p, np.array(pivots, dtype=np.int64)


def modular_nullspace(rows, modulus: int, ncols: int | None = None) -> np.ndarray:
    """Basis of ``{x : rows @ x == 0 (mod modulus)}``, one vector per row of the result.

    Vectors are the standard free-variable basis of the reduced echelon form:
    vector ``j`` has a 1 at the ``j``-th non-pivot column and 0 at the others.
    """
    A = np.asarray(rows, dtype=np.int64) if len(rows) else None
    if A is None or A.size == 0:
        if ncols is None:
            raise ValueError("ncols is required when no rows are given")
        return np.eye(ncols, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("rows must all have the same length")
    n = A.shape[1]
    U, pivots = row_echelon(A % modulus, modulus)
    return nullspace_from_echelon(U, pivots, n, modulus)


def nullspace_from_echelon(U: np.ndarray, pivots: np.ndarray, n: int, p: int) -> np.ndarray:
    free = np.setdiff1d(np.arange(n), pivots)
    if free.size == 0:
        return np.zeros((0, n), dtype=np.int64)
    return _kernels.back_substitute(U, pivots, free, p)


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Combine ``x = r_i mod m_i`` into ``(x mod M, M)`` for coprime moduli."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        # x + M*t = r (mod m)
        t = (r - x) * pow(M, -1, m) % m
        x += M * t
        M *= m
    return x % M, M


def rational_reconstruct(u: int, m: int) -> Fraction | None:
    """Wang's rational reconstruction: ``n/d = u (mod m)`` with ``|n|, d <= sqrt(m/2)``.

    Returns ``None`` when no such fraction exists.
    """
    bound = math.isqrt(m // 2)
    r0, r1 = m, u % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)
