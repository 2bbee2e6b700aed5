from fractions import Fraction

import numpy as np
import pytest

from qvf.modular import PRIMES, PrimeField, crt, modular_nullspace, rational_reconstruct, row_echelon

P = PRIMES[0]


def low_rank(rng, m, n, rank, p):
    # object dtype keeps the product exact for any p
    L = rng.integers(0, p, (m, rank)).astype(object)
    R = rng.integers(0, p, (rank, n)).astype(object)
    return (L @ R % p).astype(np.int64)


def test_primes_are_prime_and_below_blas_limit():
    for p in PRIMES:
        assert PrimeField(p).modulus == p < 2 ** 23
    with pytest.raises(ValueError):
        PrimeField(8388592)


def test_prime_field_reduces_fractions():
    F = PrimeField(101)
    assert F(Fraction(1, 2)) * 2 % 101 == 1
    assert F(-1) == 100
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 101))


def test_nullspace_of_no_rows_is_everything():
    assert modular_nullspace([], P, ncols=3).shape == (3, 3)


def test_nullspace_of_identity_is_trivial():
    assert modular_nullspace(np.eye(4, dtype=np.int64), P).shape == (0, 4)


@pytest.mark.parametrize("block", [7, 16, 128])
def test_nullspace_annihilates_rows(block):
    rng = np.random.default_rng(block)
    A = low_rank(rng, 300, 260, 250, P)
    U, piv = row_echelon(A.copy(), P, block=block)
    assert len(piv) == 250
    from qvf.modular import nullspace_from_echelon

    N = nullspace_from_echelon(U, piv, 260, P)
    assert N.shape == (10, 260)
    for row in N:
        assert not np.any(A.astype(object) @ row.astype(object) % P)


def test_row_echelon_block_size_independent():
    rng = np.random.default_rng(1)
    A = low_rank(rng, 120, 90, 70, P)
    U1, p1 = row_echelon(A.copy(), P, block=8)
    U2, p2 = row_echelon(A.copy(), P, block=128)
    assert np.array_equal(p1, p2)
    # echelon forms may differ by row operations; their row spaces must agree
    N1 = modular_nullspace(U1, P)
    assert not np.any(U2.astype(object) @ N1.T.astype(object) % P)


def test_row_echelon_float_input_matches_int_input():
    rng = np.random.default_rng(2)
    A = low_rank(rng, 200, 150, 149, P)
    Ui, pi = row_echelon(A, P)
    Uf, pf = row_echelon(A.astype(np.float64), P)
    assert np.array_equal(pi, pf) and np.array_equal(Ui, Uf)


def test_large_prime_path():
    p = (1 << 31) - 1
    rng = np.random.default_rng(4)
    A = low_rank(rng, 40, 30, 20, p)
    N = modular_nullspace(A, p)
    assert N.shape == (10, 30)
    assert not np.any(A.astype(object) @ N.T.astype(object) % p)


def test_crt_and_reconstruction_round_trip():
    q = Fraction(-116640, 7)
    moduli = PRIMES[:2]
    res = [PrimeField(m)(q) for m in moduli]
    u, M = crt(res, moduli)
    assert M == moduli[0] * moduli[1]
    assert rational_reconstruct(u, M) == q


def test_reconstruction_fails_beyond_bound():
    m = PRIMES[0]
    q = Fraction(10 ** 6 + 3, 10 ** 6 + 1)
    assert rational_reconstruct(PrimeField(m)(q), m) != q
