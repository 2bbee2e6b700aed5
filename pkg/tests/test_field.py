from fractions import Fraction

import numpy as np
import pytest

from qvf.errors import OutsideV2
from qvf.field import (
    FiniteSpectra,
    NormalFormField,
    cubic_roots,
    divisor_polys,
    exact_lambda,
    extended_spectra,
    finite_spectra,
    infinity_data,
    membership_V2,
    numeric_close,
)
from qvf.jsonio import ParseError
from qvf.poly import UniPoly

from conftest import random_rational_fields


def jacobian_at_origin(a):
    # independent oracle: derivatives of P, Q at (0, 0) read off by hand
    a0, a1, a2, a3, a4, a5 = a
    return (-a0, -a2), (-a3, -a5)


def test_separable_field_finite_spectra():
    s = finite_spectra(NormalFormField.of(1, 0, 0, 0, 0, 1))
    assert s.t == (-2, 0, 0, 2)
    assert s.d == (1, -1, -1, 1)
    assert s.p4 == (1, 1)


def test_sample_field_first_singularity(sample_field):
    s = finite_spectra(sample_field)
    (px, py), (qx, qy) = jacobian_at_origin(sample_field.a)
    assert s.t[0] == px + qy == -8
    assert s.d[0] == px * qy - py * qx == -5


def test_fixed_points_are_zeros():
    for v in random_rational_fields(1, 20):
        for x, y in ((0, 0), (1, 0), (0, 1)):
            assert v.P(x, y) == 0 and v.Q(x, y) == 0


def test_ej_holds_on_finite_spectra():
    for v in random_rational_fields(2, 50):
        s = finite_spectra(v)
        assert sum(1 / d for d in s.d) == 0
        assert sum(t / d for t, d in zip(s.t, s.d)) == 0
        (px, py), (qx, qy) = v.jacobian(*s.p4)
        assert (px + qy, px * qy - py * qx) == (s.t[3], s.d[3])


def test_divisor_polys_sample(sample_field):
    F, G = divisor_polys(sample_field)
    assert F == UniPoly([1, 2, 3])
    assert G == UniPoly([-4, -4, -5, 3])


def test_sample_lambda_against_residue_product(sample_field):
    lam = exact_lambda(sample_field)
    F, G = divisor_polys(sample_field)
    dG = G.derivative()
    prod = 1
    for w in np.roots([3, -5, -4, -4]):
        prod *= F(complex(w)) / dG(complex(w))
    # frozen: the numeric product is 0.0024336283185840864
    assert lam == Fraction(11, 4520)
    assert abs(prod - float(lam)) < 1e-9 * abs(float(lam))


def test_infinity_invariants_random():
    for v in random_rational_fields(3, 100):
        inf = infinity_data(v)
        assert inf.sigma[0] == 1
        assert inf.F.lc == inf.G.lc == v.a[2]
        assert inf.Lambda == inf.sigma[2] != 0
        for x, y in zip(inf.sigma_numeric(), inf.sigma):
            assert numeric_close(x, float(y))


def test_rejects_degenerate_infinity():
    verdict = membership_V2(NormalFormField.of(1, 0, 0, 0, 0, 1))
    assert not verdict
    assert any("deg G = 2" in r and "deg G < 3" in r for r in verdict.reasons)
    with pytest.raises(OutsideV2) as exc:
        infinity_data(NormalFormField.of(1, 0, 0, 0, 0, 1))
    assert "deg G = 2" in exc.value.reasons[0]


def test_rejects_zero_field():
    verdict = membership_V2(NormalFormField.of(0, 0, 0, 0, 0, 0))
    assert not verdict and "identically zero field" in verdict.reasons


def test_accepts_sample_field(sample_field):
    assert membership_V2(sample_field).accepted


def test_degenerate_singularity_reason():
    # d1 = -a2 a3 + a0 a5 = 0
    v = NormalFormField.of(1, 2, 3, 1, 5, 3)
    with pytest.raises(OutsideV2) as exc:
        finite_spectra(v)
    assert any(r.startswith("d1 = 0") for r in exc.value.reasons)


def test_non_squarefree_divisor_rejected():
    # G = w^3 - 3w + 2 = (w - 1)^2 (w + 2)
    v = NormalFormField.of(1, 3, 1, -2, 4, 3)
    assert divisor_polys(v)[1] == UniPoly([2, -3, 0, 1])
    reasons = membership_V2(v).reasons
    assert "G not squarefree: non-simple singularity at infinity" in reasons


def test_cubic_roots_against_numpy():
    rng = np.random.default_rng(9)
    for _ in range(50):
        c = rng.integers(-20, 21, 4).astype(float)
        if c[0] == 0:
            continue
        ours = cubic_roots(*c)
        if len(set(np.round(np.roots(c), 6))) < 3:
            continue  # repeated roots are ill-conditioned for both solvers
        for b in np.roots(c):
            assert min(abs(a - b) for a in ours) < 1e-9 * max(1, abs(b))


def test_json_round_trip(sample_field):
    doc = sample_field.to_json()
    assert doc == {"a": ["1", "2", "3", "4", "5", "7"]}
    assert NormalFormField.from_json(doc) == sample_field
    assert NormalFormField.from_json({"a": ["1/2", 2, "-3", "4", "5", "7"]}).a[0] == Fraction(1, 2)


@pytest.mark.parametrize("bad", [{"a": [1, 2, 3]}, {"a": [1.5, 2, 3, 4, 5, 6]}, {"b": []}, [1, 2], {"a": ["x", 1, 1, 1, 1, 1]}])
def test_json_parse_errors(bad):
    with pytest.raises(ParseError):
        NormalFormField.from_json(bad)


def test_spectra_from_three_pairs_completes_fourth():
    s = FiniteSpectra.from_json({"t": ["-8", "-1", "8"], "d": ["-5", "2", "4"]})
    assert s.t[3] == Fraction(62, 11) and s.d[3] == Fraction(-20, 11)
    assert s.p4 == (Fraction(10, 11), Fraction(5, 11))


def test_extended_spectra_json_has_exact_strings(sample_field):
    doc = extended_spectra(sample_field).to_json()
    assert doc["infinity"]["Lambda"] == "11/4520"
    assert doc["infinity"]["sigma"][0] == "1"
    assert all(isinstance(z, list) and len(z) == 2 for z in doc["infinity"]["numeric"]["lambdas"])
