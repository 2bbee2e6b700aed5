import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from qvf.field import NormalFormField, membership_V2
from qvf.rediscovery import RecoveredH, recover_H

DATA = Path(__file__).parent / "data"


def random_rational_fields(seed: int, n: int, num: int = 60, den: int = 9):
    """``n`` seeded fields in V2 with coefficients ``p/q``, |p| <= num, 1 <= q <= den."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = tuple(Fraction(int(p), int(q)) for p, q in zip(rng.integers(-num, num + 1, 6), rng.integers(1, den + 1, 6)))
        v = NormalFormField(a)
        if membership_V2(v):
            out.append(v)
    return out


@pytest.fixture(scope="session")
def sample_field():
    return NormalFormField.of(1, 2, 3, 4, 5, 7)


@pytest.fixture(scope="session")
def reference_H() -> RecoveredH:
    """H expanded symbolically from the Htilde relation, frozen as test data."""
    return RecoveredH.from_json(json.loads((DATA / "h_reference.json").read_text()))


@pytest.fixture(scope="session")
def recovered_H() -> RecoveredH:
    """The full interpolation, run once per session (about a minute)."""
    return recover_H(seed=0, primes=2, fresh=100)
