"""Recovering the hidden polynomial H from sampled spectra.

H is the unique (up to scale) polynomial in (t1, t2, t3, d1, d2, d3, Lambda)
of weighted degree 14 (t: 1, d: 2, Lambda: 0) and Lambda-degree at most 2
that vanishes on the spectra of every field.  It spans the one-dimensional
nullspace of the matrix of basis monomials evaluated at sample points.  The
nullspace is computed modulo a few primes and lifted by CRT and rational
reconstruction, then checked exactly on fresh samples.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import QVFError, RecoveryError
from .field import NormalFormField, complete_spectra, extended_spectra
from .hidden import HiddenRelation, load_hidden_relation
from .jsonio import ParseError, parse_rational, rat
from .modular import PRIMES, PrimeField, crt, nullspace_from_echelon, rational_reconstruct, row_echelon
from .poly import MultiPoly, RationalFunction
from . import _kernels

__all__ = [
    "VARIABLES",
    "WEIGHTS",
    "MonomialBasis",
    "RecoveredH",
    "TildeCheck",
    "RankCheck",
    "build_basis",
    "sample_fields",
    "sample_spectra",
    "recover_H",
    "check_tH_ideal",
    "rank_phi_check",
]

log = logging.getLogger(__name__)

VARIABLES = ("t1", "t2", "t3", "d1", "d2", "d3", "Lambda")
WEIGHTS = (1, 1, 1, 2, 2, 2, 0)
DEGREE = 14
LAMBDA_MAX = 2
DEFAULT_BOUND = 1000
MAX_RETRIES = 64
_ROW_CHUNK = 512

# stream ids keep the fresh verification samples disjoint from the fit samples
STREAM_FIT, STREAM_FRESH, STREAM_IDEAL = 0, 1, 2


@dataclass(frozen=True)
class MonomialBasis:
    variables: tuple[str, ...]
    weights: tuple[int, ...]
    exponents: np.ndarray  # (size, 7) int64, lexicographically increasing

    def __len__(self):
        return self.exponents.shape[0]

    def entries(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.exponents]

    def lambda_free_count(self) -> int:
        return int(np.count_nonzero(self.exponents[:, 6] == 0))


def _compositions(weights: Sequence[int], total: int):
    """Exponent tuples with ``sum w_i e_i == total``, in increasing lex order."""
    if not weights:
        if total == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    for e in range(total // w + 1):
        for tail in _compositions(rest, total - w * e):
            yield (e,) + tail


def build_basis() -> MonomialBasis:
    """All monomials of weighted degree 14 in (t, d) times Lambda^0..2."""
    rows = [c + (k,) for c in _compositions(WEIGHTS[:6], DEGREE) for k in range(LAMBDA_MAX + 1)]
    rows.sort()
    return MonomialBasis(VARIABLES, WEIGHTS, np.array(rows, dtype=np.int64))


# ---------------------------------------------------------------------------
# sampling


def _draw_field(seed: int, stream: int, index: int, bound: int):
    rng = np.random.default_rng([seed, stream, index])
    for _ in range(MAX_RETRIES):
        a = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=6))
        v = NormalFormField(a)
        try:
            s = extended_spectra(v)
        except QVFError:
            continue
        return v, s
    raise RecoveryError(f"sampler exhausted after {MAX_RETRIES} retries (seed {seed}, sample {index})")


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def sample_fields(seed: int, n: int, bound: int = DEFAULT_BOUND, threads: int = 1, stream: int = STREAM_FIT):
    """``n`` random integer fields in V2 with their extended spectra.

    Sample ``i`` uses its own generator keyed by ``(seed, stream, i)``, so the
    output does not depend on ``threads``.
    """
    return _map(lambda i: _draw_field(seed, stream, i, bound), range(n), threads)


def sample_spectra(seed: int, n: int, bound: int = DEFAULT_BOUND, threads: int = 1,
                   stream: int = STREAM_FIT) -> list[tuple[Fraction, ...]]:
    """Exact 7-tuples ``(t1, t2, t3, d1, d2, d3, Lambda)`` of random fields in V2."""
    return [
        tuple(s.t[:3]) + tuple(s.d[:3]) + (s.Lambda,)
        for _, s in sample_fields(seed, n, bound, threads, stream)
    ]


# ---------------------------------------------------------------------------
# recovery


@dataclass
class RecoveredH:
    coefficients: dict  # exponent 7-tuple -> Fraction
    primes: tuple[int, ...] = ()
    nullities: tuple[int, ...] = ()
    n_samples: int = 0
    fresh_checked: int = 0
    seconds: float = 0.0
    _poly: MultiPoly | None = field(default=None, repr=False, compare=False)

    @property
    def poly(self) -> MultiPoly:
        if self._poly is None:
            self._poly = MultiPoly(7, self.coefficients, WEIGHTS)
        return self._poly

    @property
    def monomial_count(self) -> int:
        return len(self.coefficients)

    @property
    def lambda_degree(self) -> int:
        return self.poly.degree_in(6)

    def slice(self, k: int) -> MultiPoly:
        """``H_k`` as a polynomial in (t1, t2, t3, d1, d2, d3)."""
        out = {e[:6]: c for e, c in self.coefficients.items() if e[6] == k}
        return MultiPoly(6, out, WEIGHTS[:6])

    def __call__(self, sample: Sequence) -> Fraction:
        return self.poly(list(sample))

    def to_json(self) -> dict:
        terms = sorted(self.coefficients.items())
        return {
            "variables": list(VARIABLES),
            "weights": list(WEIGHTS),
            "monomial_count": self.monomial_count,
            "lambda_degree": self.lambda_degree,
            "primes": list(self.primes),
            "nullities": list(self.nullities),
            "samples": self.n_samples,
            "fresh_checked": self.fresh_checked,
            "terms": [[list(e), rat(c)] for e, c in terms],
        }

    @classmethod
    def from_json(cls, doc) -> "RecoveredH":
        if not isinstance(doc, dict) or not isinstance(doc.get("terms"), list):
            raise ParseError('expected an object with a "terms" list')
        if doc.get("variables", list(VARIABLES)) != list(VARIABLES):
            raise ParseError(f"variables must be {list(VARIABLES)}")
        coeffs = {}
        for term in doc["terms"]:
            if not (isinstance(term, list) and len(term) == 2 and isinstance(term[0], list) and len(term[0]) == 7):
                raise ParseError(f"malformed term {term!r}")
            exps = term[0]
            if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in exps):
                raise ParseError(f"bad exponent vector {exps!r}")
            c = parse_rational(term[1])
            if c:
                coeffs[tuple(exps)] = c
        if not coeffs:
            raise ParseError("H has no terms")
        return cls(coeffs, tuple(doc.get("primes", ())), tuple(doc.get("nullities", ())),
                   int(doc.get("samples", 0)), int(doc.get("fresh_checked", 0)))


def _residue_points(samples, F: PrimeField):
    pts = np.empty((len(samples), 7), dtype=np.int64)
    keep = np.ones(len(samples), dtype=bool)
    for i, s in enumerate(samples):
        try:
            pts[i] = [F(x) for x in s]
        except ZeroDivisionError:
            keep[i] = False
    return pts[keep]


def _nullspace_mod(samples, basis: MonomialBasis, p: int) -> np.ndarray:
    F = PrimeField(p)
    pts = _residue_points(samples, F)
    m, n = pts.shape[0], len(basis)
    A = np.empty((m, n), dtype=np.float64)
    for s in range(0, m, _ROW_CHUNK):
        e = min(s + _ROW_CHUNK, m)
        A[s:e] = _kernels.eval_monomials(pts[s:e], basis.exponents, p)
    U, pivots = row_echelon(A, p)
    del A
    return nullspace_from_echelon(U, pivots, n, p)


def _normalize_mod(vec: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    nz = np.flatnonzero(vec)
    first = int(nz[0])
    inv = pow(int(vec[first]), -1, p)
    return first, (vec * inv) % p


def recover_H(samples=None, *, seed: int = 0, primes: int = 2, fresh: int = 100,
              threads: int = 1, bound: int = DEFAULT_BOUND, basis: MonomialBasis | None = None) -> RecoveredH:
    """Interpolate H from ``samples`` (drawn from ``seed`` when not given).

    ``primes`` is the number of primes used up front; more are added when
    rational reconstruction does not stabilise.  The nullspace must be one
    dimensional for every prime.  The lifted polynomial is scaled so that its
    first basis monomial has coefficient 1, then verified exactly on
    ``fresh`` independent samples.
    """
    t0 = time.perf_counter()
    basis = basis or build_basis()
    n = len(basis)
    if samples is None:
        samples = sample_spectra(seed, n + n // 10, bound, threads, STREAM_FIT)
    if len(samples) < n:
        raise RecoveryError(f"insufficient or degenerate samples: {len(samples)} < basis size {n}")
    if primes < 1 or primes > len(PRIMES):
        raise ValueError(f"primes must be between 1 and {len(PRIMES)}")

    used: list[int] = []
    nullities: list[int] = []
    residues: list[np.ndarray] = []
    lead = None
    lifted = None
    for p in PRIMES:
        tp = time.perf_counter()
        N = _nullspace_mod(samples, basis, p)
        nullities.append(N.shape[0])
        log.info("prime %d: nullity %d (%.1f s)", p, N.shape[0], time.perf_counter() - tp)
        if N.shape[0] != 1:
            raise RecoveryError(
                f"insufficient or degenerate samples: nullspace dimension {N.shape[0]} mod {p}"
            )
        first, vec = _normalize_mod(N[0], p)
        if lead is None:
            lead = first
        elif first != lead:
            # the leading coefficient vanishes mod one of the primes: unlucky prime
            log.warning("prime %d disagrees on the leading monomial; skipped", p)
            continue
        used.append(p)
        residues.append(vec)
        if len(used) < primes:
            continue
        lifted = _lift(residues, used)
        if lifted is not None:
            break
    if lifted is None:
        raise RecoveryError("rational reconstruction failed with every available prime")

    exps = basis.entries()
    coeffs = {exps[j]: c for j, c in lifted.items()}
    rec = RecoveredH(coeffs, tuple(used), tuple(nullities), len(samples))
    if fresh:
        check = sample_spectra(seed, fresh, bound, threads, STREAM_FRESH)
        for i, s in enumerate(check):
            if rec(s) != 0:
                raise RecoveryError(f"recovered H does not vanish on fresh sample {i}")
        rec.fresh_checked = len(check)
    rec.seconds = time.perf_counter() - t0
    return rec


def _lift(residues: list[np.ndarray], moduli: list[int]) -> dict | None:
    out = {}
    stacked = np.stack(residues)
    for j in np.flatnonzero(stacked.any(axis=0)):
        u, M = crt([int(r) for r in stacked[:, j]], moduli)
        q = rational_reconstruct(u, M)
        if q is None:
            return None
        out[int(j)] = q
    return out


# ---------------------------------------------------------------------------
# structural checks


@dataclass(frozen=True)
class TildeCheck:
    passed: bool
    scalar: Fraction | None
    samples: int
    failures: tuple[tuple[int, int], ...]  # (k, sample index)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "scalar": None if self.scalar is None else rat(self.scalar),
            "samples": self.samples,
            "failures": [{"k": k, "sample": i} for k, i in self.failures],
        }


def check_tH_ideal(recovered: RecoveredH, n: int = 200, *, seed: int = 0,
                   hidden: HiddenRelation | None = None, bound: int = DEFAULT_BOUND) -> TildeCheck:
    """``(d1 d2 d3)^2 Htilde_k = c * d4^4 H_k`` on ``n`` fresh samples, one scalar ``c``.

    The scalar is fixed by the first sample and must then fit every ``k`` at
    every sample.
    """
    hidden = hidden or load_hidden_relation()
    H = [recovered.slice(k) for k in range(3)]
    scalar = None
    failures = []
    for i, s in enumerate(sample_spectra(seed, n, bound, 1, STREAM_IDEAL)):
        full = complete_spectra(s[0:3], s[3:6])
        c2, c1, c0 = hidden.coefficients(full.t, full.d)
        lhs_scale = (s[3] * s[4] * s[5]) ** 2
        d4q = full.d[3] ** 4
        for k, ht in enumerate((c0, c1, c2)):
            lhs = lhs_scale * ht
            rhs = d4q * H[k](list(s[:6]))
            if scalar is None:
                if rhs == 0:
                    if lhs != 0:
                        failures.append((k, i))
                    continue
                scalar = lhs / rhs
            if lhs != scalar * rhs:
                failures.append((k, i))
    return TildeCheck(not failures and scalar is not None, scalar, n, tuple(failures))


@dataclass(frozen=True)
class RankCheck:
    rank: int
    point: tuple[Fraction, ...]
    jacobian: tuple[tuple[Fraction, ...], ...]
    numeric_jacobian: tuple[tuple[float, ...], ...]
    max_fd_error: float
    fd_agrees: bool

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "point": [rat(x) for x in self.point],
            "jacobian": [[rat(x) for x in row] for row in self.jacobian],
            "numeric": {"jacobian_fd": [list(r) for r in self.numeric_jacobian], "max_fd_error": self.max_fd_error},
            "fd_agrees": self.fd_agrees,
        }


def _phi_components(recovered: RecoveredH):
    """Phi restricted to the Euler-Jacobi submanifold, as rational functions of (t1..t3, d1..d3)."""
    x = [MultiPoly.variable(i, 6, WEIGHTS[:6]) for i in range(6)]
    t1, t2, t3, d1, d2, d3 = x
    e2 = d1 * d2 + d1 * d3 + d2 * d3
    dprod = d1 * d2 * d3
    tnum = t1 * d2 * d3 + t2 * d1 * d3 + t3 * d1 * d2
    # t4 = tnum/e2 and d4 = -dprod/e2, so t4^2/d4 = -tnum^2/(e2 dprod)
    bb = RationalFunction(-(t1 * t1), d1) + RationalFunction(-(t2 * t2), d2) + RationalFunction(-(t3 * t3), d3)
    bb = bb + RationalFunction(tnum * tnum, e2 * dprod) + 9
    H0, H1, H2 = (recovered.slice(k) for k in range(3))
    denominators = {"d1": d1, "d2": d2, "d3": d3, "d1*d2+d1*d3+d2*d3": e2, "H2": H2}
    return (bb, RationalFunction(-H1, H2), RationalFunction(H0, H2)), denominators


def _rank(M) -> int:
    M = [list(r) for r in M]
    rank = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        pr = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[rank], M[pr] = M[pr], M[rank]
        for i in range(rank + 1, len(M)):
            f = M[i][c] / M[rank][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


RANK_POINT = (1, 1, 2, 1, 2, -1)


def rank_phi_check(recovered: RecoveredH, point: Sequence = RANK_POINT, h: float = 1e-5,
                   tol: float = 1e-6) -> RankCheck:
    """Rank of the exact Jacobian of the restricted Phi at ``point``.

    A central-difference Jacobian with step ``h`` is compared entrywise
    (relative to max(1, |entry|)) at tolerance ``tol``.
    """
    point = tuple(Fraction(x) for x in point)
    comps, dens = _phi_components(recovered)
    for name, den in dens.items():
        if den(list(point)) == 0:
            raise ZeroDivisionError(f"denominator {name} vanishes at {tuple(str(x) for x in point)}")
    J = tuple(tuple(f.diff_at(j, list(point)) for j in range(6)) for f in comps)
    fp = [float(x) for x in point]
    num = []
    for f in comps:
        row = []
        for j in range(6):
            hi, lo = list(fp), list(fp)
            hi[j] += h
            lo[j] -= h
            row.append((f(hi) - f(lo)) / (2 * h))
        num.append(tuple(row))
    err = max(abs(a - float(b)) / max(1.0, abs(float(b))) for ra, rb in zip(num, J) for a, b in zip(ra, rb))
    return RankCheck(_rank(J), point, J, tuple(num), err, err <= tol)
