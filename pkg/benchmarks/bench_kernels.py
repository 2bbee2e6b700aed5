"""Compare the numba and pure-numpy paths of the modular kernels.

    python3 benchmarks/bench_kernels.py [--rows 2000] [--cols 1500] [--repeat 3]

Each kernel is timed on identical inputs through both paths and the outputs
are compared for equality.  The numba timings exclude the first (compiling)
call.  The last line times a full blocked elimination with each panel kernel.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qvf import _kernels, modular
from qvf.modular import PRIMES
from qvf.rediscovery import build_basis


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def row(name: str, t_nb: float | None, t_np: float, same: bool) -> str:
    nb = "n/a" if t_nb is None else f"{t_nb:9.4f}"
    ratio = "" if t_nb is None else f"{t_np / t_nb:7.1f}x"
    return f"{name:<22}{nb:>10}{t_np:10.4f}{ratio:>9}   {'same' if same else 'DIFFER'}"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--cols", type=int, default=1500)
    ap.add_argument("--panel", type=int, default=128)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    p = PRIMES[0]
    rng = np.random.default_rng(args.seed)
    have_nb = hasattr(_kernels, "panel_eliminate_numba")
    print(f"numba available: {have_nb}; default path: {'numba' if _kernels.USE_NUMBA else 'numpy'}")
    print(f"{'kernel':<22}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")

    # panel elimination on a tall, rank-deficient panel
    base = rng.integers(0, p, size=(args.rows, args.panel), dtype=np.int64)
    base[:, -8:] = base[:, :8] * 3 % p
    out_np = base.copy()
    r_np = _kernels.panel_eliminate_numpy(out_np, p)
    t_np = best_of(lambda: _kernels.panel_eliminate_numpy(base.copy(), p), args.repeat)
    t_nb, same = None, True
    if have_nb:
        out_nb = base.copy()
        r_nb = _kernels.panel_eliminate_numba(out_nb, p)
        same = all(np.array_equal(x, y) for x, y in zip(r_np, r_nb)) and np.array_equal(out_np, out_nb)
        t_nb = best_of(lambda: _kernels.panel_eliminate_numba(base.copy(), p), args.repeat)
    print(row("panel_eliminate", t_nb, t_np, same))

    # monomial evaluation with the real degree-14 basis
    exps = build_basis().exponents
    pts = rng.integers(0, p, size=(256, 7), dtype=np.int64)
    e_np = _kernels.eval_monomials_numpy(pts, exps, p)
    t_np = best_of(lambda: _kernels.eval_monomials_numpy(pts, exps, p), args.repeat)
    t_nb, same = None, True
    if have_nb:
        same = np.array_equal(e_np, _kernels.eval_monomials_numba(pts, exps, p))
        t_nb = best_of(lambda: _kernels.eval_monomials_numba(pts, exps, p), args.repeat)
    print(row("eval_monomials", t_nb, t_np, same))

    # back substitution on an echelon form with a few free columns
    A = rng.integers(0, p, size=(args.cols - 4, args.cols), dtype=np.int64)
    U, piv = modular.row_echelon(A, p)
    free = np.setdiff1d(np.arange(args.cols), piv)
    b_np = _kernels.back_substitute_numpy(U, piv, free, p)
    t_np = best_of(lambda: _kernels.back_substitute_numpy(U, piv, free, p), args.repeat)
    t_nb, same = None, True
    if have_nb:
        same = np.array_equal(b_np, _kernels.back_substitute_numba(U, piv, free, p))
        t_nb = best_of(lambda: _kernels.back_substitute_numba(U, piv, free, p), args.repeat)
    print(row("back_substitute", t_nb, t_np, same))

    # full blocked elimination, swapping only the panel kernel
    M = rng.integers(0, p, size=(args.rows, args.cols), dtype=np.int64)
    timings = {}
    results = {}
    for name in ("numba", "numpy"):
        fn = getattr(_kernels, f"panel_eliminate_{name}", None)
        if fn is None:
            continue
        saved = _kernels.panel_eliminate
        _kernels.panel_eliminate = fn
        try:
            modular.row_echelon(M[:64, :64], p)  # warm-up
            t = time.perf_counter()
            results[name] = modular.row_echelon(M, p)
            timings[name] = time.perf_counter() - t
        finally:
            _kernels.panel_eliminate = saved
    same = len(results) < 2 or all(np.array_equal(x, y) for x, y in zip(results["numba"], results["numpy"]))
    print(row(f"row_echelon {args.rows}x{args.cols}", timings.get("numba"), timings["numpy"], same))


if __name__ == "__main__":
    main()
