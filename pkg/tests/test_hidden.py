import hashlib
import itertools
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from qvf.errors import DegenerateSpectra
from qvf.field import FiniteSpectra, extended_spectra, finite_spectra
from qvf.hidden import (
    HHAT_SHA256,
    evaluate_hidden,
    load_hidden_relation,
    predict_lambda_pair,
    weighted_homogeneity_check,
)

from conftest import random_rational_fields


def rand_point(rng):
    return [Fraction(int(p), int(q)) for p, q in zip(rng.integers(-9, 10, 8), rng.integers(1, 6, 8))]


def test_data_file_checksum():
    raw = resources.files("qvf").joinpath("data/hhat.json").read_bytes()
    assert hashlib.sha256(raw).hexdigest() == HHAT_SHA256


def test_hhat0_matches_retyped_closed_form():
    h0 = load_hidden_relation().h_hat[0]
    rng = np.random.default_rng(0)
    for _ in range(10):
        t1, t2, t3, t4, d1, d2, d3, d4 = rand_point(rng)
        assert h0([t1, t2, t3, t4, d1, d2, d3, d4]) == -4 * d1 ** 3 * d2 * d3 + 4 * d1 ** 2 * d2 ** 2 * d3


def test_hhat_term_counts():
    assert [len(h) for h in load_hidden_relation().h_hat] == [2, 19, 53]


def test_weighted_homogeneity():
    assert weighted_homogeneity_check() == {"Htilde_0": True, "Htilde_1": True, "Htilde_2": True}


def test_htilde_permutation_invariance():
    rel = load_hidden_relation()
    rng = np.random.default_rng(1)
    for _ in range(3):
        pt = rand_point(rng)
        base = [h(pt) for h in rel.h_tilde]
        for perm in itertools.permutations(range(4)):
            moved = [pt[k] for k in perm] + [pt[4 + k] for k in perm]
            assert [h(moved) for h in rel.h_tilde] == base


def test_htilde_weighted_scaling():
    rel = load_hidden_relation()
    rng = np.random.default_rng(2)
    for _ in range(5):
        pt = rand_point(rng)
        s = Fraction(int(rng.integers(2, 9)), int(rng.integers(1, 5)))
        scaled = [x * s for x in pt[:4]] + [x * s * s for x in pt[4:]]
        for h in rel.h_tilde:
            assert h(scaled) == s ** 10 * h(pt)


def test_hidden_vanishes_on_sample(sample_field):
    assert evaluate_hidden(extended_spectra(sample_field)) == 0


def test_hidden_vanishes_on_random_fields():
    for v in random_rational_fields(30, 100):
        assert evaluate_hidden(extended_spectra(v)) == 0


def test_hidden_detects_wrong_lambda(sample_field):
    s = extended_spectra(sample_field)
    assert load_hidden_relation().evaluate(s.t, s.d, s.Lambda + 1) != 0


def test_predict_lambda_pair_sample(sample_field):
    pred = predict_lambda_pair(finite_spectra(sample_field))
    lam = extended_spectra(sample_field).Lambda
    assert pred.exact_roots == (Fraction(176, 146177), Fraction(11, 4520))
    assert lam in pred.exact_roots
    c2, c1, c0 = pred.coefficients
    r1, r2 = pred.roots
    assert abs((r1 + r2) - float(-c1 / c2)) < 1e-9
    assert abs(r1 * r2 - float(c0 / c2)) < 1e-9


def test_predict_lambda_degenerate_quadratic():
    with pytest.raises(DegenerateSpectra):
        predict_lambda_pair(FiniteSpectra((0, 0, 0, 0), (1, 1, 1, 1)))


def test_prediction_json_uses_strings(sample_field):
    doc = predict_lambda_pair(finite_spectra(sample_field)).to_json()
    assert doc["exact_roots"] == ["176/146177", "11/4520"]
    assert all(isinstance(v, str) for v in doc["quadratic"].values())
