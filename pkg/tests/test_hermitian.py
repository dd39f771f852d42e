"""Tests for the complex-matrix kernels."""

from __future__ import annotations

import numpy as np
import pytest

from eebc import hermitian
from tests.helpers import random_hermitian, random_pd


class TestEigHermitian:
    def test_identity(self):
        eig = hermitian.eig_hermitian(np.eye(2))
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0])
        u = eig.eigenvectors
        np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)

    def test_diagonal_sorted_descending(self):
        eig = hermitian.eig_hermitian(np.diag([0.0, 3.0]))
        np.testing.assert_allclose(eig.eigenvalues, [3.0, 0.0])

    def test_reconstruction_of_random_hermitian(self, rng):
        for _ in range(20):
            a = random_hermitian(rng, 4)
            eig = hermitian.eig_hermitian(a)
            assert np.all(np.diff(eig.eigenvalues) <= 0.0)
            resid = np.linalg.norm(eig.reconstruct() - a)
            assert resid <= 1e-10 * np.linalg.norm(a)
            u = eig.eigenvectors
            assert np.linalg.norm(u.conj().T @ u - np.eye(4)) <= 1e-10

    def test_symmetrizes_small_asymmetry(self, rng):
        a = random_hermitian(rng, 3)
        skewed = a.copy()
        skewed[0, 1] += 1e-13
        eig = hermitian.eig_hermitian(skewed)
        assert np.isrealobj(eig.eigenvalues)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            hermitian.eig_hermitian(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            hermitian.eig_hermitian(np.array([[1.0, np.nan], [np.nan, 1.0]]))

    def test_rank_clamps_tiny_eigenvalues(self):
        eig = hermitian.eig_hermitian(np.diag([1.0, 1e-14, 0.0]))
        assert eig.rank() == 1


class TestLogdet:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_identity_is_zero(self, n):
        assert hermitian.logdet_pd(np.eye(n)) == pytest.approx(0.0, abs=1e-15)

    def test_diag_two_two(self):
        assert hermitian.logdet_pd(np.diag([2.0, 2.0])) == pytest.approx(2.0)

    def test_scalar_snr_one(self):
        h = np.array([[1.0]])
        assert hermitian.logdet_pd(np.eye(1) + h @ h.conj().T) == pytest.approx(1.0)

    def test_matches_eigenvalue_sum(self, rng):
        for _ in range(20):
            a = random_pd(rng, 4)
            expected = np.sum(np.log2(np.linalg.eigvalsh(a)))
            assert hermitian.logdet_pd(a) == pytest.approx(expected, rel=1e-10)

    def test_sylvester_identity(self, rng):
        for _ in range(20):
            x = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
            root = hermitian.sqrt_psd(random_pd(rng, 5))
            # A = X P^1/2, B = P^1/2 X^H keeps both products Hermitian PSD.
            a = x @ root
            b = root @ x.conj().T
            left = np.eye(3) + a @ b
            right = np.eye(5) + b @ a
            assert hermitian.logdet_pd(left) == pytest.approx(hermitian.logdet_pd(right), rel=1e-9)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="positive definite"):
            hermitian.logdet_pd(np.diag([1.0, -1.0]))


class TestInvSqrt:
    def test_identity(self):
        np.testing.assert_allclose(hermitian.inv_sqrt_pd(np.eye(3)), np.eye(3), atol=1e-14)

    def test_diagonal(self):
        np.testing.assert_allclose(hermitian.inv_sqrt_pd(np.diag([4.0, 9.0])), np.diag([0.5, 1.0 / 3.0]))

    def test_whitens_random_pd(self, rng):
        for _ in range(20):
            a = random_pd(rng, 4)
            r = hermitian.inv_sqrt_pd(a)
            np.testing.assert_allclose(r, r.conj().T, atol=1e-12)
            resid = np.linalg.norm(r @ a @ r - np.eye(4))
            assert resid <= 1e-9 * np.linalg.cond(a)
            np.testing.assert_allclose(r @ r @ a, np.eye(4), atol=1e-9 * np.linalg.cond(a))

    def test_tiny_scale_is_still_pd(self):
        r = hermitian.inv_sqrt_pd(1e-14 * np.eye(2))
        np.testing.assert_allclose(r, 1e7 * np.eye(2))

    def test_ill_conditioned_diagonal(self):
        r = hermitian.inv_sqrt_pd(np.diag([1.0, 1e-13]))
        np.testing.assert_allclose(np.diag(r), [1.0, 1.0 / np.sqrt(1e-13)], rtol=1e-12)

    def test_ill_conditioned_agrees_with_logdet(self, rng):
        x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u, _ = np.linalg.qr(x)
        a = hermitian.symmetrize((u * np.logspace(0.0, -12.0, 4)) @ u.conj().T)
        assert np.isfinite(hermitian.logdet_pd(a))
        r = hermitian.inv_sqrt_pd(a)
        resid = np.linalg.norm(r @ a @ r - np.eye(4))
        assert resid <= 1e-9 * np.linalg.cond(a)

    def test_rejects_singular(self):
        with pytest.raises(ValueError, match="positive definite"):
            hermitian.inv_sqrt_pd(np.diag([1.0, 0.0]))

    def test_rejects_round_off_sized_eigenvalue(self):
        with pytest.raises(ValueError, match="positive definite"):
            hermitian.inv_sqrt_pd(np.diag([1.0, 1e-17]))


class TestIsPsd:
    def test_zero_matrix(self):
        assert hermitian.is_psd(np.zeros((3, 3)))

    def test_indefinite(self):
        assert not hermitian.is_psd(np.diag([1.0, -1.0]))

    def test_tolerance(self):
        assert hermitian.is_psd(np.diag([1.0, -1e-12]), tol=1e-9)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian.is_psd(np.zeros((2, 3)))


class TestProjectPsd:
    def test_drops_negative_part(self):
        p = hermitian.project_psd(np.diag([2.0, -1.0]))
        np.testing.assert_allclose(p, np.diag([2.0, 0.0]), atol=1e-14)
