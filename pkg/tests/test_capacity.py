"""Tests for the sum-power MAC capacity."""

from __future__ import annotations

import numpy as np
import pytest

from eebc import capacity, hermitian, objective, solver
from eebc.objective import CovarianceSet
from eebc.system_model import total_power
from tests.helpers import UNIT_PM, random_channels, random_covariances


class TestWaterfillTotalPower:
    def test_equal_gains(self):
        powers, mu = capacity.waterfill_total_power(np.array([1.0, 1.0]), 2.0)
        np.testing.assert_allclose(powers, [1.0, 1.0])
        assert mu == pytest.approx(2.0)

    def test_weak_channel_left_dry(self):
        powers, mu = capacity.waterfill_total_power(np.array([1.0, 4.0]), 0.1)
        np.testing.assert_allclose(powers, [0.0, 0.1])
        assert mu == pytest.approx(0.35)

    def test_zero_power(self):
        powers, mu = capacity.waterfill_total_power(np.array([2.0, 3.0]), 0.0)
        np.testing.assert_array_equal(powers, [0.0, 0.0])
        assert mu == 0.0

    def test_budget_is_spent(self, rng):
        gains = rng.uniform(0.01, 10.0, size=12)
        powers, mu = capacity.waterfill_total_power(gains, 3.7)
        assert np.sum(powers) == pytest.approx(3.7)
        active = powers > 0.0
        np.testing.assert_allclose(powers[active] + 1.0 / gains[active], mu)
        assert np.all(1.0 / gains[~active] >= mu)


class TestSumPowerCapacity:
    def test_single_user_is_classic_waterfill(self, rng):
        ch = random_channels(rng, 3, 2, 1, noise=0.5, bandwidth=2.0)
        h = ch.channels[0]
        gains = np.linalg.eigvalsh(h @ h.conj().T / 0.5)
        powers, _ = capacity.waterfill_total_power(gains, 1.5)
        expected = 2.0 * np.sum(np.log2(1.0 + powers * gains))
        cov, rate = capacity.sum_power_capacity(ch, 1.5)
        assert rate == pytest.approx(expected, rel=1e-10)
        assert objective.transmit_power(cov) == pytest.approx(1.5)

    def test_zero_power(self, rng):
        ch = random_channels(rng, 2, 2, 3)
        cov, rate = capacity.sum_power_capacity(ch, 0.0)
        assert rate == 0.0
        assert objective.transmit_power(cov) == 0.0

    def test_spends_budget_and_stays_psd(self, rng):
        for _ in range(10):
            ch = random_channels(rng, 3, 2, 3)
            cov, rate = capacity.sum_power_capacity(ch, 2.0)
            assert objective.transmit_power(cov) == pytest.approx(2.0, rel=1e-9)
            assert cov.is_psd(1e-9)
            assert rate == pytest.approx(objective.mac_sum_rate(ch, cov), rel=1e-12)

    def test_beats_random_allocations(self, rng):
        ch = random_channels(rng, 3, 2, 3)
        _, best = capacity.sum_power_capacity(ch, 2.0)
        for _ in range(50):
            cov = random_covariances(rng, 2, 3)
            scale = 2.0 / objective.transmit_power(cov)
            scaled = CovarianceSet(q=tuple(q * scale for q in cov.q))
            assert objective.mac_sum_rate(ch, scaled) <= best * (1.0 + 1e-6)

    def test_matches_rate_at_ee_optimum(self, rng):
        for _ in range(5):
            ch = random_channels(rng, 3, 2, 3)
            trace = solver.solve(ch, UNIT_PM, solver.SolverConfig(rel_tolerance=1e-12, max_iterations=500))
            _, rate = capacity.sum_power_capacity(ch, trace.final_power)
            assert rate == pytest.approx(objective.mac_sum_rate(ch, trace.final_covariances), rel=1e-5)

    def test_warm_start_reaches_same_rate(self, rng):
        ch = random_channels(rng, 2, 2, 2)
        cov, cold = capacity.sum_power_capacity(ch, 1.0)
        _, warm = capacity.sum_power_capacity(ch, 3.0, initial=cov)
        _, fresh = capacity.sum_power_capacity(ch, 3.0)
        assert warm == pytest.approx(fresh, rel=1e-7)
        assert warm > cold

    def test_rejects_negative_power(self, rng):
        with pytest.raises(ValueError, match="transmit power"):
            capacity.sum_power_capacity(random_channels(rng, 2, 1, 1), -1.0)


class TestCurve:
    def test_non_decreasing(self, rng):
        ch = random_channels(rng, 2, 2, 2)
        rates = capacity.capacity_curve(ch, np.linspace(0.0, 10.0, 21))
        assert rates[0] == 0.0
        assert all(b >= a * (1.0 - 1e-9) for a, b in zip(rates, rates[1:]))

    def test_ee_at_fixed_power(self, rng):
        ch = random_channels(rng, 2, 2, 2)
        _, rate = capacity.sum_power_capacity(ch, 1.2)
        ee = capacity.ee_at_fixed_power(ch, UNIT_PM, 1.2)
        assert ee == pytest.approx(rate / total_power(UNIT_PM, 1.2, 2), rel=1e-12)

    def test_effective_eigs_are_whitened(self, rng):
        ch = random_channels(rng, 3, 1, 2)
        eigs = capacity._effective_eigs(ch, CovarianceSet.zeros(2, 1))
        for h, eig in zip(ch.channels, eigs):
            assert eig.eigenvalues[0] == pytest.approx(hermitian.trace_real(h @ h.conj().T), rel=1e-12)
