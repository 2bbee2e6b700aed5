"""Hot modular kernels, in numba and in plain numpy.

Both variants of every kernel are importable under explicit names
(``*_numba`` / ``*_numpy``); the unsuffixed name is bound at import time.
Set ``QVF_DISABLE_NUMBA=1`` to force the numpy path (numba is also skipped
automatically when it cannot be imported).

All kernels work on int64 residues in ``[0, p)`` with ``p < 2**31`` so that a
single product fits in 63 bits.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("QVF_DISABLE_NUMBA", "") not in ("1", "true", "yes")

__all__ = [
    "USE_NUMBA",
    "panel_eliminate",
    "panel_eliminate_numpy",
    "eval_monomials",
    "eval_monomials_numpy",
    "back_substitute",
    "back_substitute_numpy",
]


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), -1, int(p))


# ---------------------------------------------------------------------------
# numpy reference path


def panel_eliminate_numpy(panel: np.ndarray, p: int):
    """In-place LU of a tall int64 panel with leftmost-nonzero row pivoting.

    On return the first ``k`` rows hold U (on/after each pivot column) with the
    unit-lower multipliers stored below the diagonal in the pivot columns;
    rows ``k:`` hold the L21 multipliers in the pivot columns.

    Returns ``(pivot_cols, swaps)``: at elimination step ``i`` rows ``i`` and
    ``swaps[i]`` were exchanged (LAPACK ``ipiv`` convention, 0-based).
    """
    m, b = panel.shape
    swaps = []
    pivots = []
    r = 0
    for c in range(b):
        if r >= m:
            break
        nz = np.flatnonzero(panel[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            panel[[r, piv]] = panel[[piv, r]]
        swaps.append(piv)
        inv = _inv_mod(panel[r, c], p)
        if r + 1 < m:
            mult = panel[r + 1:, c] * inv % p
            if c + 1 < b:
                panel[r + 1:, c + 1:] = (panel[r + 1:, c + 1:] - np.outer(mult, panel[r, c + 1:])) % p
            panel[r + 1:, c] = mult
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64), np.array(swaps, dtype=np.int64)


def eval_monomials_numpy(points: np.ndarray, exps: np.ndarray, p: int) -> np.ndarray:
    """``out[i, j] = prod_k points[i, k] ** exps[j, k] mod p`` (int64)."""
    m, nv = points.shape
    out = np.ones((m, exps.shape[0]), dtype=np.int64)
    for k in range(nv):
        top = int(exps[:, k].max()) if exps.shape[0] else 0
        table = np.ones((m, top + 1), dtype=np.int64)
        for e in range(1, top + 1):
            table[:, e] = table[:, e - 1] * points[:, k] % p
        out *= table[:, exps[:, k]]
        out %= p
    return out


def back_substitute_numpy(U: np.ndarray, pivots: np.ndarray, free: np.ndarray, p: int) -> np.ndarray:
    """Nullspace basis (one row per free column) of an echelon matrix mod p."""
    n = U.shape[1]
    X = np.zeros((len(free), n), dtype=np.int64)
    for j, f in enumerate(free):
        X[j, f] = 1
    for i in range(len(pivots) - 1, -1, -1):
        c = int(pivots[i])
        s = _chunked_dot(U[i, c + 1:], X[:, c + 1:].T, p)
        inv = _inv_mod(U[i, c], p)
        X[:, c] = (-s % p) * inv % p
    return X


def _chunked_dot(row: np.ndarray, mat: np.ndarray, p: int) -> np.ndarray:
    step = max(1, (1 << 62) // max(1, (p - 1) * (p - 1)))
    acc = np.zeros(mat.shape[1], dtype=np.int64)
    for s in range(0, row.shape[0], step):
        acc = (acc + row[s:s + step] @ mat[s:s + step]) % p
    return acc


# ---------------------------------------------------------------------------
# numba path

if numba is not None:

    @numba.njit(cache=True)
    def _inv_mod_nb(a, p):
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @numba.njit(cache=True)
    def _panel_eliminate_nb(panel, p, pivots, swaps):
        m, b = panel.shape
        r = 0
        npiv = 0
        for c in range(b):
            if r >= m:
                break
            piv = -1
            for i in range(r, m):
                if panel[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(b):
                    tmp = panel[r, j]
                    panel[r, j] = panel[piv, j]
                    panel[piv, j] = tmp
            swaps[npiv] = piv
            inv = _inv_mod_nb(panel[r, c], p)
            for i in range(r + 1, m):
                x = panel[i, c]
                if x != 0:
                    mult = x * inv % p
                    for j in range(c + 1, b):
                        v = (panel[i, j] - mult * panel[r, j]) % p
                        panel[i, j] = v
                    panel[i, c] = mult
            pivots[npiv] = c
            npiv += 1
            r += 1
        return npiv

    def panel_eliminate_numba(panel: np.ndarray, p: int):
        pivots = np.empty(panel.shape[1], dtype=np.int64)
        swaps = np.empty(panel.shape[1], dtype=np.int64)
        k = _panel_eliminate_nb(panel, np.int64(p), pivots, swaps)
        return pivots[:k].copy(), swaps[:k].copy()

    @numba.njit(cache=True)
    def _eval_monomials_nb(points, exps, p, out):
        m, nv = points.shape
        nmon = exps.shape[0]
        top = 0
        for j in range(nmon):
            for k in range(nv):
                if exps[j, k] > top:
                    top = exps[j, k]
        table = np.ones((nv, top + 1), dtype=np.int64)
        for i in range(m):
            for k in range(nv):
                for e in range(1, top + 1):
                    table[k, e] = table[k, e - 1] * points[i, k] % p
            for j in range(nmon):
                v = 1
                for k in range(nv):
                    e = exps[j, k]
                    if e:
                        v = v * table[k, e] % p
                out[i, j] = v

    def eval_monomials_numba(points: np.ndarray, exps: np.ndarray, p: int) -> np.ndarray:
        out = np.empty((points.shape[0], exps.shape[0]), dtype=np.int64)
        _eval_monomials_nb(
            np.ascontiguousarray(points, dtype=np.int64),
            np.ascontiguousarray(exps, dtype=np.int64),
            np.int64(p),
            out,
        )
        return out

    @numba.njit(cache=True)
    def _back_substitute_nb(U, pivots, X, p):
        n = U.shape[1]
        nf = X.shape[0]
        limit = 1 << 62  # with p < 2**31, limit + (p-1)**2 < 2**63
        for i in range(pivots.shape[0] - 1, -1, -1):
            c = pivots[i]
            inv = _inv_mod_nb(U[i, c], p)
            for f in range(nf):
                # reduce lazily, only when the next product could overflow
                s = 0
                for j in range(c + 1, n):
                    s += U[i, j] * X[f, j]
                    if s >= limit:
                        s %= p
                X[f, c] = (p - s % p) % p * inv % p

    def back_substitute_numba(U, pivots, free, p):
        X = np.zeros((len(free), U.shape[1]), dtype=np.int64)
        for j, f in enumerate(free):
            X[j, f] = 1
        _back_substitute_nb(
            np.ascontiguousarray(U, dtype=np.int64), np.asarray(pivots, dtype=np.int64), X, np.int64(p)
        )
        return X


if USE_NUMBA:
    panel_eliminate = panel_eliminate_numba
    eval_monomials = eval_monomials_numba
    back_substitute = back_substitute_numba
else:
    panel_eliminate = panel_eliminate_numpy
    eval_monomials = eval_monomials_numpy
    back_substitute = back_substitute_numpy
