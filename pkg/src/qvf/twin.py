"""Inverting the spectra map, and the twin of a field.

Given (t_k, d_k) the fourth singular point p4 is known, so the three trace
formulas and ``P(p4) = Q(p4) = 0`` are five linear equations in a0..a5.
Their solutions form a line ``a(s) = a0 + s u``; one determinant equation is
quadratic in ``s`` and its two roots are a field and its twin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateSpectra, InternalCheckFailed, IrrationalTwin, NonGenericSpectra, TwinCoincidence
from .field import FiniteSpectra, NormalFormField, _finite_reasons, complete_spectra, finite_spectra, numeric_close
from .jsonio import cpair, rat
from .poly import as_fraction

__all__ = ["TwinSolution", "TwinReconstruction", "reconstruct", "twin"]

# Determinants d1..d3 as quadratic forms in a: {(i, j): coefficient of a_i a_j}
_D_FORMS = (
    {(2, 3): -1, (0, 5): 1},
    {(1, 3): -1, (2, 3): 1, (0, 4): 1, (0, 5): -1},
    {(2, 3): 1, (2, 4): -1, (0, 5): -1, (1, 5): 1},
)


@dataclass(frozen=True)
class TwinSolution:
    s: complex
    s_exact: Fraction | None
    field: NormalFormField | None  # None when s is irrational
    a_numeric: tuple[complex, ...]

    @property
    def exact(self) -> bool:
        return self.field is not None

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "a": None if self.field is None else [rat(x) for x in self.field.a],
            "s": None if self.s_exact is None else rat(self.s_exact),
            "numeric": {"a": [cpair(z) for z in self.a_numeric], "s": cpair(self.s)},
        }


@dataclass(frozen=True)
class TwinReconstruction:
    spectra: FiniteSpectra
    linear_system: tuple[tuple[Fraction, ...], ...]  # 5 rows of [coefficients of a0..a5 | rhs]
    line: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    quadratic: tuple[Fraction, Fraction, Fraction]  # (q2, q1, q0) in s
    equation: str
    discriminant: Fraction
    solutions: tuple[TwinSolution, ...]

    @property
    def exact(self) -> bool:
        return all(sol.exact for sol in self.solutions)

    @property
    def coincident(self) -> bool:
        return self.discriminant == 0

    def fields(self) -> list[NormalFormField]:
        return [sol.field for sol in self.solutions if sol.field is not None]

    def to_json(self) -> dict:
        q2, q1, q0 = self.quadratic
        return {
            "spectra": self.spectra.to_json(),
            "line": {"a0": [rat(x) for x in self.line[0]], "u": [rat(x) for x in self.line[1]]},
            "quadratic": {"equation": self.equation, "q2": rat(q2), "q1": rat(q1), "q0": rat(q0)},
            "discriminant": rat(self.discriminant),
            "exact": self.exact,
            "coincident": self.coincident,
            "solutions": [sol.to_json() for sol in self.solutions],
        }


def _linear_system(s: FiniteSpectra) -> list[list[Fraction]]:
    t1, t2, t3 = s.t[:3]
    x, y = s.p4
    return [
        [Fraction(-1), 0, 0, 0, 0, Fraction(-1), t1],
        [Fraction(1), 0, 0, 0, Fraction(1), Fraction(-1), t2],
        [Fraction(-1), Fraction(1), 0, 0, 0, Fraction(1), t3],
        [x * x - x, x * y, y * y - y, 0, 0, 0, Fraction(0)],
        [0, 0, 0, x * x - x, x * y, y * y - y, Fraction(0)],
    ]


def _solve_line(rows: list[list[Fraction]]):
    """Reduced row echelon form of the augmented system; returns ``(a0, u)``."""
    M = [[Fraction(v) for v in r] for r in rows]
    n = 6
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < 5:
        raise NonGenericSpectra(f"non-generic spectra: linear system has rank {len(pivots)} < 5")
    (free,) = [c for c in range(n) if c not in pivots]
    a0 = [Fraction(0)] * n
    u = [Fraction(0)] * n
    u[free] = Fraction(1)
    for i, c in enumerate(pivots):
        a0[c] = M[i][n]
        u[c] = -M[i][free]
    return tuple(a0), tuple(u)


def _restrict_quadratic(form: dict, a0, u) -> tuple[Fraction, Fraction, Fraction]:
    q2 = q1 = q0 = Fraction(0)
    for (i, j), c in form.items():
        q2 += c * u[i] * u[j]
        q1 += c * (a0[i] * u[j] + u[i] * a0[j])
        q0 += c * a0[i] * a0[j]
    return q2, q1, q0


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    return Fraction(n, d) if n * n == x.numerator and d * d == x.denominator else None


def _coerce_spectra(t: Sequence, d: Sequence) -> FiniteSpectra:
    t = [as_fraction(x) for x in t]
    d = [as_fraction(x) for x in d]
    if len(t) != len(d) or len(t) not in (3, 4):
        raise DegenerateSpectra("t and d must both have 3 or 4 entries")
    if any(x == 0 for x in d):
        raise DegenerateSpectra("some d_k = 0")
    if len(t) == 4:
        ej1 = sum(1 / x for x in d)
        ej2 = sum(tk / dk for tk, dk in zip(t, d))
        if ej1 != 0 or ej2 != 0:
            raise DegenerateSpectra(
                f"spectra are not Euler-Jacobi consistent (sum 1/d = {ej1}, sum t/d = {ej2})"
            )
    return complete_spectra(t[:3], d[:3])


def reconstruct(t: Sequence, d: Sequence) -> TwinReconstruction:
    """All normal-form fields (at most two) with finite spectra ``(t, d)``.

    Accepts three pairs (the fourth is completed by Euler-Jacobi) or four
    pairs (checked for Euler-Jacobi consistency first).
    """
    spectra = _coerce_spectra(t, d)
    rows = _linear_system(spectra)
    a0, u = _solve_line(rows)
    for k, form in enumerate(_D_FORMS):
        q2, q1, q0 = _restrict_quadratic(form, a0, u)
        q0 -= spectra.d[k]
        if q2 != 0:
            break
    else:
        raise NonGenericSpectra("non-generic spectra: every determinant equation is degenerate on the line")
    equation = f"d{k + 1}"
    disc = q1 * q1 - 4 * q2 * q0
    root = _rational_sqrt(disc)
    if root is not None:
        ss = sorted({(-q1 - root) / (2 * q2), (-q1 + root) / (2 * q2)})
        sols = [_exact_solution(sv, a0, u, spectra) for sv in ss]
    else:
        sq = complex(float(disc)) ** 0.5
        roots = [(-float(q1) - sq) / (2 * float(q2)), (-float(q1) + sq) / (2 * float(q2))]
        roots.sort(key=lambda z: (z.real, z.imag))
        sols = [_numeric_solution(z, a0, u, spectra) for z in roots]
    return TwinReconstruction(
        spectra, tuple(tuple(r) for r in rows), (a0, u), (q2, q1, q0), equation, disc, tuple(sols)
    )


def _exact_solution(sv: Fraction, a0, u, spectra: FiniteSpectra) -> TwinSolution:
    v = NormalFormField(tuple(x + sv * y for x, y in zip(a0, u)))
    got, reasons = _finite_reasons(v)
    if reasons or got.t != spectra.t or got.d != spectra.d:
        raise InternalCheckFailed(f"reconstructed field {v} does not reproduce the spectra: {reasons}")
    return TwinSolution(complex(float(sv)), sv, v, tuple(complex(float(x)) for x in v.a))


def _numeric_solution(z: complex, a0, u, spectra: FiniteSpectra) -> TwinSolution:
    a = tuple(float(x) + z * float(y) for x, y in zip(a0, u))
    t = (-a[0] - a[5], a[0] + a[4] - a[5], -a[0] + a[1] + a[5])
    d = (
        -a[2] * a[3] + a[0] * a[5],
        -a[1] * a[3] + a[2] * a[3] + a[0] * a[4] - a[0] * a[5],
        a[2] * a[3] - a[2] * a[4] - a[0] * a[5] + a[1] * a[5],
    )
    for got, want in zip(t + d, tuple(spectra.t[:3]) + tuple(spectra.d[:3])):
        if not numeric_close(got, float(want), 1e-9):
            raise InternalCheckFailed(f"numeric reconstruction misses the spectra ({got} vs {want})")
    return TwinSolution(z, None, None, a)


def twin(v: NormalFormField) -> NormalFormField:
    """The other normal-form field with the same finite spectra as ``v``."""
    spectra = finite_spectra(v)
    rec = reconstruct(spectra.t, spectra.d)
    if rec.coincident:
        raise TwinCoincidence("twin coincidence - single solution returned (D = 0)")
    if not rec.exact:
        raise IrrationalTwin("twin has irrational coefficients", rec)
    others = [f for f in rec.fields() if f != v]
    if len(others) != 1:
        raise InternalCheckFailed(f"{v} is not among its own reconstructions")
    return others[0]
