"""Quadratic vector fields in normal form and their extended spectra.

A normal-form field has singular points pinned at (0,0), (1,0), (0,1)::

    P(x, y) = a0 x^2 + a1 xy + a2 y^2 - a0 x - a2 y
    Q(x, y) = a3 x^2 + a4 xy + a5 y^2 - a3 x - a5 y

Near the line at infinity (``z = 1/x``, ``w = y/x``) the foliation reads
``dz/dw = z F(w)/G(w) + O(z^2)`` with ``F(w) = a0 + a1 w + a2 w^2`` and
``G(w) = w F(w) - (a3 + a4 w + a5 w^2)``; the characteristic numbers are the
residues ``F(w_j)/G'(w_j)`` at the roots of ``G``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateSpectra, InternalCheckFailed, OutsideV2
from .jsonio import ParseError, cpair, parse_rational_list, rat
from .poly import UniPoly, as_fraction, elementary_from_power_sums, power_sums_of_residues, resultant

__all__ = [
    "NormalFormField",
    "FiniteSpectra",
    "InfinityData",
    "ExtendedSpectra",
    "Verdict",
    "finite_spectra",
    "infinity_data",
    "membership_V2",
    "extended_spectra",
    "cubic_roots",
    "numeric_close",
]

FIXED_POINTS = ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def numeric_close(x: complex, y: complex, tol: float = 1e-9) -> bool:
    """Relative agreement when ``|y| > 1``, absolute otherwise."""
    return abs(complex(x) - complex(y)) <= tol * max(1.0, abs(complex(y)))


@dataclass(frozen=True)
class NormalFormField:
    a: tuple[Fraction, ...]

    def __post_init__(self):
        a = tuple(as_fraction(x) for x in self.a)
        if len(a) != 6:
            raise ValueError(f"a normal-form field has 6 coefficients, got {len(a)}")
        object.__setattr__(self, "a", a)

    @classmethod
    def of(cls, *a) -> "NormalFormField":
        return cls(tuple(a))

    def P(self, x, y):
        a0, a1, a2 = self.a[:3]
        return a0 * x * x + a1 * x * y + a2 * y * y - a0 * x - a2 * y

    def Q(self, x, y):
        a3, a4, a5 = self.a[3:]
        return a3 * x * x + a4 * x * y + a5 * y * y - a3 * x - a5 * y

    def jacobian(self, x, y):
        a0, a1, a2, a3, a4, a5 = self.a
        return (
            (2 * a0 * x + a1 * y - a0, a1 * x + 2 * a2 * y - a2),
            (2 * a3 * x + a4 * y - a3, a4 * x + 2 * a5 * y - a5),
        )

    def is_zero(self) -> bool:
        return not any(self.a)

    def to_json(self) -> dict:
        return {"a": [rat(x) for x in self.a]}

    @classmethod
    def from_json(cls, doc) -> "NormalFormField":
        if not isinstance(doc, dict) or "a" not in doc:
            raise ParseError('expected an object with key "a"')
        return cls(tuple(parse_rational_list(doc["a"], 6, "a")))

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.a) + ")"


@dataclass(frozen=True)
class FiniteSpectra:
    """Traces and determinants at p1..p4, plus the fourth singular point."""

    t: tuple[Fraction, ...]
    d: tuple[Fraction, ...]
    p4: tuple[Fraction, Fraction] | None = None

    def to_json(self) -> dict:
        out = {"t": [rat(x) for x in self.t], "d": [rat(x) for x in self.d]}
        if self.p4 is not None:
            out["p4"] = [rat(x) for x in self.p4]
        return out

    @classmethod
    def from_json(cls, doc) -> "FiniteSpectra":
        """Read ``{"t": [...], "d": [...]}`` with 3 or 4 entries each.

        With three entries the fourth pair is completed from the Euler-Jacobi
        relations.
        """
        if not isinstance(doc, dict) or "t" not in doc or "d" not in doc:
            raise ParseError('expected an object with keys "t" and "d"')
        t = parse_rational_list(doc["t"], name="t")
        d = parse_rational_list(doc["d"], name="d")
        if len(t) != len(d) or len(t) not in (3, 4):
            raise ParseError("t and d must both have 3 or 4 entries")
        if len(t) == 3:
            return complete_spectra(t, d)
        full = complete_spectra(t[:3], d[:3])
        if full.t[3] != t[3] or full.d[3] != d[3]:
            raise DegenerateSpectra(
                f"spectra are not Euler-Jacobi consistent (EJ gives t4 = {full.t[3]}, d4 = {full.d[3]})"
            )
        return full


def complete_spectra(t: Sequence, d: Sequence) -> FiniteSpectra:
    """Extend (t1..t3, d1..d3) with t4, d4 from EJ1/EJ2 and locate p4."""
    t = [as_fraction(x) for x in t]
    d = [as_fraction(x) for x in d]
    if any(x == 0 for x in d):
        raise DegenerateSpectra("some d_k = 0")
    s = sum(1 / x for x in d)
    if s == 0:
        raise DegenerateSpectra("1/d1 + 1/d2 + 1/d3 = 0: fourth singularity at infinity")
    d4 = -1 / s
    t4 = -d4 * sum(tk / dk for tk, dk in zip(t, d))
    return FiniteSpectra(tuple(t) + (t4,), tuple(d) + (d4,), (-d4 / d[1], -d4 / d[2]))


@dataclass(frozen=True)
class InfinityData:
    F: UniPoly
    G: UniPoly
    sigma: tuple[Fraction, Fraction, Fraction]
    Lambda: Fraction
    lambdas_numeric: tuple[complex, complex, complex]
    power_sums: tuple[Fraction, ...] = ()

    def sigma_numeric(self) -> tuple[complex, complex, complex]:
        l1, l2, l3 = self.lambdas_numeric
        return (l1 + l2 + l3, l1 * l2 + l2 * l3 + l1 * l3, l1 * l2 * l3)

    def to_json(self) -> dict:
        return {
            "F": [rat(c) for c in self.F.coeffs],
            "G": [rat(c) for c in self.G.coeffs],
            "sigma": [rat(x) for x in self.sigma],
            "Lambda": rat(self.Lambda),
            "numeric": {"lambdas": [cpair(z) for z in self.lambdas_numeric]},
        }


@dataclass(frozen=True)
class ExtendedSpectra:
    finite: FiniteSpectra
    infinity: InfinityData

    @property
    def t(self):
        return self.finite.t

    @property
    def d(self):
        return self.finite.d

    @property
    def Lambda(self) -> Fraction:
        return self.infinity.Lambda

    def to_json(self) -> dict:
        return {"finite": self.finite.to_json(), "infinity": self.infinity.to_json()}


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reasons: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.accepted


def _finite_reasons(v: NormalFormField):
    """Return ``(spectra_or_None, reasons)`` without raising."""
    a0, a1, a2, a3, a4, a5 = v.a
    t = [-a0 - a5, a0 + a4 - a5, -a0 + a1 + a5]
    d = [
        -a2 * a3 + a0 * a5,
        -a1 * a3 + a2 * a3 + a0 * a4 - a0 * a5,
        a2 * a3 - a2 * a4 - a0 * a5 + a1 * a5,
    ]
    reasons = [
        f"d{k + 1} = 0: degenerate singularity at p{k + 1} - outside V2" for k in range(3) if d[k] == 0
    ]
    if reasons:
        return None, reasons
    inv_sum = 1 / d[0] + 1 / d[1] + 1 / d[2]
    if inv_sum == 0:
        return None, ["1/d1 + 1/d2 + 1/d3 = 0: fourth singularity at infinity"]
    d4 = -1 / inv_sum
    t4 = -d4 * (t[0] / d[0] + t[1] / d[1] + t[2] / d[2])
    p4 = (-d4 / d[1], -d4 / d[2])
    if v.P(*p4) != 0 or v.Q(*p4) != 0:
        return None, [f"no zero at the Euler-Jacobi point p4 = ({p4[0]}, {p4[1]})"]
    if p4 in FIXED_POINTS:
        k = FIXED_POINTS.index(p4) + 1
        return None, [f"fourth singularity coincides with p{k}"]
    (px, py), (qx, qy) = v.jacobian(*p4)
    if px + qy != t4 or px * qy - py * qx != d4:
        raise InternalCheckFailed(f"Jacobian spectrum at p4 disagrees with Euler-Jacobi for {v}")
    return FiniteSpectra(tuple(t) + (t4,), tuple(d) + (d4,), p4), []


def finite_spectra(v: NormalFormField) -> FiniteSpectra:
    """Spectra (t_k, d_k) at the four finite singular points.

    t1..t3, d1..d3 come from closed forms in ``a``; the fourth point is
    ``(-d4/d2, -d4/d3)`` with d4 from EJ1, and its trace and determinant are
    recomputed from the Jacobian there as a cross-check.
    """
    spectra, reasons = _finite_reasons(v)
    if reasons:
        raise OutsideV2(reasons)
    return spectra


def divisor_polys(v: NormalFormField) -> tuple[UniPoly, UniPoly]:
    a0, a1, a2, a3, a4, a5 = v.a
    F = UniPoly([a0, a1, a2])
    G = UniPoly([-a3, a0 - a4, a1 - a5, a2])
    return F, G


def _infinity_exact(v: NormalFormField):
    """``(F, G, Res(F,G), Res(G',G), reasons)``; resultants are None when rejected."""
    F, G = divisor_polys(v)
    if G.degree < 3:
        deg = "-inf" if G.is_zero() else G.degree
        return F, G, None, None, [f"deg G < 3 (deg G = {deg}): line at infinity degenerate - outside V2"]
    res_dg = resultant(G.derivative(), G)
    reasons = []
    if res_dg == 0:
        reasons.append("G not squarefree: non-simple singularity at infinity")
    res_fg = resultant(F, G)
    if res_fg == 0:
        reasons.append("Res(F, G) = 0: a characteristic number at infinity vanishes")
    return F, G, res_fg, res_dg, reasons


def exact_lambda(v: NormalFormField) -> Fraction:
    """``Lambda = Res(F, G) / Res(G', G)``."""
    _, _, res_fg, res_dg, reasons = _infinity_exact(v)
    if reasons:
        raise OutsideV2(reasons)
    return res_fg / res_dg


def cubic_roots(c3, c2, c1, c0, polish: int = 3) -> list[complex]:
    """Roots of ``c3 w^3 + c2 w^2 + c1 w + c0`` by Cardano, then Newton steps."""
    c3, c2, c1, c0 = (float(c) for c in (c3, c2, c1, c0))
    a, b, c = c2 / c3, c1 / c3, c0 / c3
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    sq = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    u3 = -q / 2 + sq
    if abs(-q / 2 - sq) > abs(u3):
        u3 = -q / 2 - sq
    omega = complex(-0.5, 3 ** 0.5 / 2)
    if u3 == 0:
        ys = [0j, 0j, 0j]
    else:
        u = u3 ** (1 / 3)
        ys = []
        for k in range(3):
            uk = u * omega ** k
            ys.append(uk - p / (3 * uk))
    roots = []
    for y in ys:
        w = y - a / 3
        for _ in range(polish):
            g = ((w + a) * w + b) * w + c
            dg = (3 * w + 2 * a) * w + b
            if dg == 0:
                break
            step = g / dg
            w -= step
            if abs(step) <= 1e-17 * max(1.0, abs(w)):
                break
        roots.append(w)
    return sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def infinity_data(v: NormalFormField) -> InfinityData:
    """Exact symmetric functions of the characteristic numbers at infinity.

    ``Lambda`` is the resultant ratio; ``sigma1, sigma2`` come from power sums
    of residues (traces in ``Q[w]/(G)``) through Newton's identities.  The
    individual residues are only available numerically.
    """
    F, G, res_fg, res_dg, reasons = _infinity_exact(v)
    if reasons:
        raise OutsideV2(reasons)
    lam = res_fg / res_dg
    p = power_sums_of_residues(F, G, 3)
    s1, s2, s3 = elementary_from_power_sums(p)
    if s3 != lam:
        raise InternalCheckFailed(f"Newton sigma3 {s3} != resultant ratio {lam} for {v}")
    dG = G.derivative()
    lambdas = tuple(F(complex(w)) / dG(complex(w)) for w in cubic_roots(*reversed(G.coeffs)))
    return InfinityData(F, G, (s1, s2, s3), lam, lambdas, tuple(p))


def membership_V2(v: NormalFormField) -> Verdict:
    """Exact membership test; lists every violated condition."""
    reasons = []
    if v.is_zero():
        reasons.append("identically zero field")
    _, finite_reasons = _finite_reasons(v)
    reasons += finite_reasons
    *_, inf_reasons = _infinity_exact(v)
    reasons += inf_reasons
    return Verdict(not reasons, tuple(reasons))


def extended_spectra(v: NormalFormField) -> ExtendedSpectra:
    verdict = membership_V2(v)
    if not verdict:
        raise OutsideV2(verdict.reasons)
    return ExtendedSpectra(finite_spectra(v), infinity_data(v))
