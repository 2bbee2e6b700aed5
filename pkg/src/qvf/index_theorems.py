"""Residuals of the Euler-Jacobi, Baum-Bott and Camacho-Sad identities.

Residuals are exact rationals; each vanishes on every field of V2.  The
functions are total on their input types: inconsistent spectra simply give
nonzero residuals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateSpectra
from .field import ExtendedSpectra, FiniteSpectra, NormalFormField, extended_spectra
from .hidden import evaluate_hidden
from .jsonio import cpair, rat

__all__ = [
    "BB_TOTAL",
    "RelationReport",
    "check_euler_jacobi",
    "check_baum_bott",
    "check_camacho_sad",
    "relation_report",
    "full_report",
]

# Baum-Bott: the indices of a foliation of projective degree d on P^2 sum to
# (d + 2)^2.  A quadratic vector field extends to projective degree 2.
PROJECTIVE_DEGREE = 2
BB_TOTAL = (PROJECTIVE_DEGREE + 2) ** 2


def check_euler_jacobi(s: FiniteSpectra) -> tuple[Fraction, Fraction]:
    """``(sum 1/d_k, sum t_k/d_k)`` over the four finite singular points."""
    if any(d == 0 for d in s.d):
        raise DegenerateSpectra("Euler-Jacobi sums need every d_k != 0")
    ej1 = sum((1 / d for d in s.d), Fraction(0))
    ej2 = sum((t / d for t, d in zip(s.t, s.d)), Fraction(0))
    return ej1, ej2


def check_baum_bott(s: ExtendedSpectra) -> tuple[Fraction, complex]:
    """Baum-Bott residual, exact (via sigma) and numeric (via individual lambdas).

    For three numbers ``sum (l+1)^2/l = sigma1 + 6 + sigma2/sigma3``.
    """
    s1, s2, s3 = s.infinity.sigma
    if s3 == 0:
        raise DegenerateSpectra("sigma3 = 0: degenerate infinity")
    if any(d == 0 for d in s.d):
        raise DegenerateSpectra("Baum-Bott sum needs every d_k != 0")
    finite = sum((t * t / d for t, d in zip(s.t, s.d)), Fraction(0))
    exact = finite + s1 + 6 + s2 / s3 - BB_TOTAL
    numeric = float(finite) + sum((l + 1) ** 2 / l for l in s.infinity.lambdas_numeric) - BB_TOTAL
    return exact, numeric


def check_camacho_sad(s: ExtendedSpectra) -> Fraction:
    return s.infinity.sigma[0] - 1


@dataclass(frozen=True)
class RelationReport:
    ej1: Fraction
    ej2: Fraction
    cs: Fraction
    bb: Fraction
    hidden: Fraction
    bb_numeric: complex = 0j
    cs_numeric: complex = 0j

    @property
    def verdicts(self) -> dict[str, bool]:
        return {
            "EJ1": self.ej1 == 0,
            "EJ2": self.ej2 == 0,
            "CS": self.cs == 0,
            "BB": self.bb == 0,
            "hidden": self.hidden == 0,
        }

    @property
    def all_zero(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "residuals": {
                "EJ1": rat(self.ej1),
                "EJ2": rat(self.ej2),
                "CS": rat(self.cs),
                "BB": rat(self.bb),
                "hidden": rat(self.hidden),
            },
            "verdicts": self.verdicts,
            "all_zero": self.all_zero,
            "numeric": {"BB": cpair(self.bb_numeric), "CS": cpair(self.cs_numeric)},
        }


def relation_report(s: ExtendedSpectra) -> RelationReport:
    ej1, ej2 = check_euler_jacobi(s.finite)
    bb, bb_num = check_baum_bott(s)
    cs = check_camacho_sad(s)
    cs_num = sum(s.infinity.lambdas_numeric) - 1
    return RelationReport(ej1, ej2, cs, bb, evaluate_hidden(s), bb_num, cs_num)


def full_report(v: NormalFormField) -> RelationReport:
    """All five residuals for a field; raises OutsideV2 for rejected fields."""
    return relation_report(extended_spectra(v))
