"""The hidden fifth relation, through its diagonal-symmetric form.

The three short polynomials ``Hhat_0, Hhat_1, Hhat_2`` in (t1..t4, d1..d4) are
stored in ``data/hhat.json``.  Their sums over the 24 simultaneous
permutations of the t- and d-blocks, ``Htilde_j``, satisfy

    Htilde_2(t, d) * Lambda**2 + Htilde_1(t, d) * Lambda + Htilde_0(t, d) = 0

on the extended spectra of every field in V2.  For given finite spectra the
two roots of this quadratic are the Lambda values of a field and of its twin.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .errors import DegenerateSpectra
from .field import ExtendedSpectra, FiniteSpectra
from .jsonio import cpair, rat
from .poly import MultiPoly, symmetrize_diag_S4

__all__ = [
    "HiddenRelation",
    "LambdaPrediction",
    "load_hidden_relation",
    "evaluate_hidden",
    "predict_lambda_pair",
    "weighted_homogeneity_check",
    "HHAT_SHA256",
]

VARIABLES = ("t1", "t2", "t3", "t4", "d1", "d2", "d3", "d4")
WEIGHTS = (1, 1, 1, 1, 2, 2, 2, 2)
HTILDE_DEGREE = 10
HHAT_SHA256 = "70ec404fc33aa182dff97fd01a7e8fb33a52cc118e1c6b1d14cefb2f416937be"


@dataclass(frozen=True)
class HiddenRelation:
    h_hat: tuple[MultiPoly, MultiPoly, MultiPoly]
    h_tilde: tuple[MultiPoly, MultiPoly, MultiPoly]

    @classmethod
    def from_hat(cls, h_hat) -> "HiddenRelation":
        h_hat = tuple(h_hat)
        return cls(h_hat, tuple(symmetrize_diag_S4(h) for h in h_hat))

    def coefficients(self, t, d) -> tuple[Fraction, Fraction, Fraction]:
        """``(Htilde_2, Htilde_1, Htilde_0)`` evaluated at (t1..t4, d1..d4)."""
        point = list(t) + list(d)
        h0, h1, h2 = (h(point) for h in self.h_tilde)
        return h2, h1, h0

    def evaluate(self, t, d, Lambda) -> Fraction:
        c2, c1, c0 = self.coefficients(t, d)
        return (c2 * Lambda + c1) * Lambda + c0


def _parse_terms(entries) -> MultiPoly:
    return MultiPoly(8, {tuple(e): Fraction(c) for c, e in entries}, WEIGHTS)


@lru_cache(maxsize=None)
def load_hidden_relation() -> HiddenRelation:
    raw = resources.files("qvf").joinpath("data/hhat.json").read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != HHAT_SHA256:
        raise RuntimeError(f"hhat.json checksum mismatch: {digest}")
    doc = json.loads(raw)
    if tuple(doc["variables"]) != VARIABLES:
        raise RuntimeError("hhat.json variable order changed")
    return HiddenRelation.from_hat(_parse_terms(doc[k]) for k in ("H0", "H1", "H2"))


def evaluate_hidden(s: ExtendedSpectra, relation: HiddenRelation | None = None) -> Fraction:
    """``Htilde_2 Lambda^2 + Htilde_1 Lambda + Htilde_0`` at the field's spectra."""
    relation = relation or load_hidden_relation()
    return relation.evaluate(s.t, s.d, s.Lambda)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class LambdaPrediction:
    coefficients: tuple[Fraction, Fraction, Fraction]
    discriminant: Fraction
    roots: tuple[complex, complex]
    exact_roots: tuple[Fraction, Fraction] | None

    def to_json(self) -> dict:
        c2, c1, c0 = self.coefficients
        return {
            "quadratic": {"c2": rat(c2), "c1": rat(c1), "c0": rat(c0)},
            "discriminant": rat(self.discriminant),
            "exact_roots": None if self.exact_roots is None else [rat(r) for r in self.exact_roots],
            "numeric": {"roots": [cpair(z) for z in self.roots]},
        }


def predict_lambda_pair(s: FiniteSpectra, relation: HiddenRelation | None = None) -> LambdaPrediction:
    """The quadratic whose roots are Lambda(v) and Lambda(twin(v))."""
    relation = relation or load_hidden_relation()
    if len(s.t) != 4 or len(s.d) != 4:
        raise DegenerateSpectra("predict_lambda_pair needs all four spectra pairs")
    c2, c1, c0 = relation.coefficients(s.t, s.d)
    if c2 == 0:
        raise DegenerateSpectra("quadratic degenerates - non-generic spectra (Htilde_2 = 0)")
    disc = c1 * c1 - 4 * c2 * c0
    root = _rational_sqrt(disc)
    exact = None
    if root is not None:
        exact = tuple(sorted(((-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2))))
        numeric = tuple(complex(float(r)) for r in exact)
    else:
        sq = complex(float(disc)) ** 0.5
        numeric = tuple(
            sorted(((-float(c1) - sq) / (2 * float(c2)), (-float(c1) + sq) / (2 * float(c2))),
                   key=lambda z: (z.real, z.imag))
        )
    return LambdaPrediction((c2, c1, c0), disc, numeric, exact)


def weighted_homogeneity_check(relation: HiddenRelation | None = None) -> dict[str, bool]:
    """Whether every monomial of each Htilde_j has weighted degree 10 (t:1, d:2)."""
    relation = relation or load_hidden_relation()
    return {
        f"Htilde_{j}": h.is_weighted_homogeneous(HTILDE_DEGREE) and not h.is_zero()
        for j, h in enumerate(relation.h_tilde)
    }
