"""Exact polynomial arithmetic over the rationals.

Scalars are :class:`fractions.Fraction`.  Two polynomial types live here:

* :class:`UniPoly` -- dense univariate, coefficients lowest degree first.
* :class:`MultiPoly` -- sparse multivariate keyed by exponent vectors, with
  per-variable weights for the weighted degree.

plus the resultant (fraction-free Bareiss on the Sylvester matrix), power sums
of residues through traces in ``Q[w]/(G)``, and the diagonal S4 symmetrizer.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateDivisor, UndefinedResultant

__all__ = [
    "UniPoly",
    "MultiPoly",
    "RationalFunction",
    "bareiss_det",
    "resultant",
    "power_sums_of_residues",
    "elementary_from_power_sums",
    "symmetrize_diag_S4",
    "as_fraction",
]

NEG_INF = float("-inf")


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


class UniPoly:
    """Dense univariate polynomial with rational coefficients.

    >>> f = UniPoly([1, 2, 3])      # 1 + 2w + 3w^2
    >>> f.degree, f.lc
    (2, Fraction(3, 1))
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        cs = [float(c) for c in self.coeffs] if isinstance(x, (float, complex)) else self.coeffs
        acc = 0
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}" if k == 0 else f"{c}*w" if k == 1 else f"{c}*w^{k}")
        return " + ".join(parts)

    def _coerce(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        inv_lc = 1 / other.lc
        m = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + m] * inv_lc
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quo), UniPoly(rem[:m])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def xgcd(self, other: "UniPoly"):
        """Return ``(g, s, t)`` with ``s*self + t*other == g`` and ``g`` monic."""
        r0, r1 = self, other
        s0, s1 = UniPoly([1]), UniPoly()
        t0, t1 = UniPoly(), UniPoly([1])
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        k = 1 / r0.lc
        return r0 * k, s0 * k, t0 * k


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                # exact division is the Bareiss invariant
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def sylvester_matrix(f: UniPoly, g: UniPoly) -> list[list[Fraction]]:
    """Sylvester matrix with the ``deg g`` rows of ``f`` first."""
    m, n = max(f.degree, 0), max(g.degree, 0)
    size = m + n
    fc = list(reversed(f.coeffs)) or [Fraction(0)]
    gc = list(reversed(g.coeffs)) or [Fraction(0)]
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - i - len(fc)))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - i - len(gc)))
    return rows


def resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """``Res(f, g) = det Sylvester(f, g) = lc(f)^deg(g) * prod g(alpha_i)``.

    Rational coefficients are cleared to integers first so that the Bareiss
    recurrence stays in ``Z``; the scaling is undone afterwards.
    """
    if f.is_zero() and g.is_zero():
        raise UndefinedResultant("undefined resultant: both polynomials are zero")
    if f.is_zero() or g.is_zero():
        other = g if f.is_zero() else f
        return Fraction(1) if other.degree == 0 else Fraction(0)
    cf = _lcm_denominators(f.coeffs)
    cg = _lcm_denominators(g.coeffs)
    fi = UniPoly(c * cf for c in f.coeffs)
    gi = UniPoly(c * cg for c in g.coeffs)
    rows = [[int(x) for x in row] for row in sylvester_matrix(fi, gi)]
    det = bareiss_det(rows)
    return Fraction(det, cf ** g.degree * cg ** f.degree)


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def power_sums_of_residues(F: UniPoly, G: UniPoly, m_max: int) -> list[Fraction]:
    """Exact ``p_m = sum_j (F(w_j)/G'(w_j))^m`` for ``m = 1..m_max``.

    The sum runs over the roots ``w_j`` of ``G``; it is the trace of
    multiplication by ``(F * G'^{-1} mod G)^m`` on ``Q[w]/(G)``.
    """
    n = G.degree
    if n < 1:
        raise DegenerateDivisor("degenerate infinity divisor: deg G < 1")
    g, s, _ = G.derivative().xgcd(G)
    if g.degree != 0:
        raise DegenerateDivisor("degenerate infinity divisor: G is not squarefree")
    h = (F * s) % G
    cols = [(h * UniPoly.monomial(i)) % G for i in range(n)]
    mult = [[cols[c].coeff(r) for c in range(n)] for r in range(n)]
    out = []
    power = mult
    for m in range(1, m_max + 1):
        if m > 1:
            power = _mat_mul(power, mult)
        out.append(sum((power[i][i] for i in range(n)), Fraction(0)))
    return out


def elementary_from_power_sums(p: Sequence) -> list:
    """Newton's identities: ``e_1..e_k`` from power sums ``p_1..p_k``."""
    e = [1]
    for k in range(1, len(p) + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e.append(acc / k if isinstance(acc, (float, complex)) else Fraction(acc) / k)
    return e[1:]


# --------------------------------------------------------------------------
# sparse multivariate


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables over ``Q``.

    ``terms`` maps exponent tuples to nonzero Fractions.  ``weights`` gives
    each variable's weight for :meth:`weighted_degree`; the zero polynomial
    has weighted degree ``-inf``.
    """

    __slots__ = ("nvars", "terms", "weights", "_compiled")

    def __init__(self, nvars: int, terms: Mapping | None = None, weights: Sequence[int] | None = None):
        self.nvars = nvars
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        if len(self.weights) != nvars:
            raise ValueError("one weight per variable required")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has length != {nvars}")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        self.terms: dict[tuple[int, ...], Fraction] = {k: v for k, v in clean.items() if v}
        self._compiled = None

    @classmethod
    def variable(cls, i: int, nvars: int, weights=None) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, weights)

    @classmethod
    def constant(cls, c, nvars: int, weights=None) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c}, weights)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly(nvars={self.nvars}, nterms={len(self.terms)})"

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("arity mismatch")
            return other
        return MultiPoly.constant(other, self.nvars, self.weights)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out, self.weights)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()}, self.weights)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()}, self.weights)
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out, self.weights)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(1, self.nvars, self.weights)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def term_weight(self, exps: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def weighted_degree(self):
        if not self.terms:
            return NEG_INF
        return max(self.term_weight(e) for e in self.terms)

    def is_weighted_homogeneous(self, degree: int | None = None) -> bool:
        degs = {self.term_weight(e) for e in self.terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def coefficient_slice(self, i: int, k: int) -> "MultiPoly":
        """Coefficient of ``x_i^k``, still as a polynomial in all variables."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return MultiPoly(self.nvars, out, self.weights)

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MultiPoly(self.nvars, out, self.weights)

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Substitute ``x_i -> x_{perm[i]}``."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * self.nvars
            for i, k in enumerate(e):
                e2[perm[i]] += k
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c
        return MultiPoly(self.nvars, out, self.weights)

    def with_coefficient(self, exps, c) -> "MultiPoly":
        out = dict(self.terms)
        out[tuple(exps)] = as_fraction(c)
        return MultiPoly(self.nvars, out, self.weights)

    def _compile(self):
        if self._compiled is None:
            den = _lcm_denominators(self.terms.values())
            items = [(int(c * den), e, sum(e)) for e, c in self.terms.items()]
            maxdeg = max((d for _, _, d in items), default=0)
            maxexp = [max((e[i] for _, e, _ in items), default=0) for i in range(self.nvars)]
            self._compiled = (den, items, maxdeg, maxexp)
        return self._compiled

    def __call__(self, point: Sequence):
        """Evaluate at a point.

        Rational points go through an all-integer path: coordinates are put
        over a common denominator and each term is padded to the top degree.
        Float or complex points use plain arithmetic.
        """
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        if any(isinstance(x, (float, complex)) for x in point):
            total = 0
            for e, c in self.terms.items():
                v = float(c)
                for x, k in zip(point, e):
                    if k:
                        v *= x ** k
                total += v
            return total
        point = [as_fraction(x) for x in point]
        den, items, maxdeg, maxexp = self._compile()
        D = _lcm_denominators(point)
        nums = [x.numerator * (D // x.denominator) for x in point]
        pows = []
        for x, top in zip(nums, maxexp):
            row = [1] * (top + 1)
            for k in range(1, top + 1):
                row[k] = row[k - 1] * x
            pows.append(row)
        dpow = [1] * (maxdeg + 1)
        for k in range(1, maxdeg + 1):
            dpow[k] = dpow[k - 1] * D
        acc = 0
        for c, e, deg in items:
            v = c * dpow[maxdeg - deg]
            for i, k in enumerate(e):
                if k:
                    v *= pows[i][k]
            acc += v
        return Fraction(acc, den * dpow[maxdeg])

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts) if parts else "0"


class RationalFunction:
    """Quotient ``num/den`` of two MultiPoly; no cancellation is attempted."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(1, num.nvars, num.weights)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other)
        return RationalFunction(MultiPoly.constant(other, self.num.nvars, self.num.weights))

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def diff(self, i: int) -> "RationalFunction":
        return RationalFunction(
            self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den
        )

    def diff_at(self, i: int, point):
        """Value of ``diff(i)`` at ``point`` without expanding the quotient-rule products."""
        d = self.den(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return (self.num.diff(i)(point) * d - self.num(point) * self.den.diff(i)(point)) / (d * d)

    def __call__(self, point):
        d = self.den(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num(point) / d


def symmetrize_diag_S4(p: MultiPoly) -> MultiPoly:
    """Sum of ``p`` over the 24 simultaneous permutations of (t1..t4) and (d1..d4)."""
    if p.nvars != 8:
        raise ValueError(f"symmetrize_diag_S4 needs arity 8 (t1..t4, d1..d4), got {p.nvars}")
    out: dict = {}
    for perm in itertools.permutations(range(4)):
        full = list(perm) + [4 + k for k in perm]
        for e, c in p.permute(full).terms.items():
            out[e] = out.get(e, 0) + c
    return MultiPoly(8, out, p.weights)
