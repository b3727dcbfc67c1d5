import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cloudradio import NumericalError, hpd_inverse, lq_factor

from conftest import random_complex


def gram_schmidt_lq(H):
    """Row-wise modified Gram-Schmidt oracle: H = L Q with diag(L) >= 0."""
    k = H.shape[0]
    L = np.zeros((k, k), dtype=complex)
    Q = np.zeros((k, k), dtype=complex)
    for i in range(k):
        v = H[i].astype(complex)
        for j in range(i):
            L[i, j] = v @ Q[j].conj()
            v = v - L[i, j] * Q[j]
        L[i, i] = np.linalg.norm(v)
        Q[i] = v / L[i, i]
    return L, Q


def test_identity_factorization():
    fact = lq_factor(np.eye(3, dtype=complex))
    assert np.allclose(fact.L, np.eye(3))
    assert np.allclose(fact.Q, np.eye(3))
    assert not fact.degenerate.any()


def test_diagonal_with_phase_absorption():
    H = np.diag([2j, 3.0 + 0j])
    fact = lq_factor(H)
    assert np.allclose(fact.L, np.diag([2.0, 3.0]), atol=1e-14)
    assert np.allclose(fact.Q, np.diag([1j, 1.0]), atol=1e-14)
    # permutation stability: exact at unit-roundoff scale for diagonal inputs
    assert np.max(np.abs(fact.L @ fact.Q - H)) < 1e-15


def test_matches_gram_schmidt_oracle(rng):
    for _ in range(50):
        H = random_complex(rng, 4)
        fact = lq_factor(H)
        Lg, Qg = gram_schmidt_lq(H)
        assert np.max(np.abs(fact.L - Lg)) < 1e-8
        assert np.max(np.abs(fact.Q - Qg)) < 1e-8


@settings(max_examples=60, deadline=None)
@given(k=st.integers(1, 12), seed=st.integers(0, 2**31))
def test_factorization_invariants(k, seed):
    H = random_complex(np.random.default_rng(seed), k)
    fact = lq_factor(H)
    scale = np.linalg.norm(H)
    assert np.linalg.norm(fact.L @ fact.Q - H) <= 1e-10 * scale
    assert np.linalg.norm(fact.Q @ fact.Q.conj().T - np.eye(k)) <= 1e-10
    assert np.all(np.triu(fact.L, 1) == 0)
    d = np.diag(fact.L)
    assert np.all(d.imag == 0) and np.all(d.real >= 0)
    det = abs(np.linalg.det(H))
    assert abs(np.prod(d.real) - det) <= 1e-8 * max(det, 1e-30)


def test_degenerate_stream_flagged():
    H = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)  # rank 1
    fact = lq_factor(H)
    assert fact.degenerate[1]
    assert fact.stream_gains[1] == 0.0


def test_lq_factor_input_validation():
    with pytest.raises(ValueError):
        lq_factor(np.ones((2, 3)))
    with pytest.raises(ValueError):
        lq_factor(np.array([[np.nan, 0], [0, 1]]))


def test_hpd_inverse_scalar_matrix():
    assert np.allclose(hpd_inverse(2.0 * np.eye(4)), 0.5 * np.eye(4))
    assert np.allclose(hpd_inverse(np.eye(3, dtype=complex)), np.eye(3))


def test_hpd_inverse_residual(rng):
    for _ in range(20):
        B = random_complex(rng, 5)
        A = B.conj().T @ B + 0.1 * np.eye(5)
        inv = hpd_inverse(A)
        assert np.linalg.norm(A @ inv - np.eye(5)) < 1e-9


def test_hpd_inverse_rejects_non_hermitian():
    A = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        hpd_inverse(A)


def test_hpd_inverse_reports_failing_pivot():
    A = np.diag([1.0, -1.0, 2.0])
    with pytest.raises(NumericalError, match=r"pivot 2"):
        hpd_inverse(A)
