"""
Unit tests for the baseline approximations
"""
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.exceptions import DomainError, ValidationError
from src.models.analytic import (
    QUADRATURE,
    relaxed_mcs_throughput,
    ultra_dense_relaxed_throughput,
    ultra_dense_unique_mcs_throughput
)
from src.models.baselines import (
    IanSinr,
    gaussian_rate_params,
    gaussian_throughput,
    ian_throughput,
    iid_priority_throughput,
    simple_throughput,
    unique_mcs_ian_throughput
)
from src.models.population import CellPopulation, FrameConfig
from src.models.sinr import LinkProfile


class TestSimple:
    """Test the no-fading equal-share model"""

    def test_equal_share(self, two_level_table):
        """Test R = N_S N_C C(Z̃) / (|J| T_TTI)"""
        rates = simple_throughput([5.0, 20.0], two_level_table, FrameConfig(n_rb=1))
        np.testing.assert_allclose(rates, [84_000.0, 168_000.0])

    def test_vector_repeats_over_rbs(self, two_level_table):
        """Test one Z̃ per terminal covers every RB"""
        rates = simple_throughput([5.0], two_level_table, FrameConfig(n_rb=4))
        assert rates[0] == pytest.approx(4 * 168_000.0)

    def test_below_first_threshold(self, two_level_table):
        """Test outage gives zero"""
        assert simple_throughput([0.5], two_level_table, FrameConfig(n_rb=1))[0] == 0.0

    def test_accepts_ian_sinr(self, two_level_table):
        """Test IanSinr values and links"""
        link = LinkProfile(1.0, (0.1,), 0.1)
        values = [IanSinr.from_link(link), IanSinr(20.0)]
        rates = simple_throughput(values, two_level_table, FrameConfig(n_rb=1))
        assert rates[0] == pytest.approx(84_000.0)

    def test_invalid_inputs(self, two_level_table):
        """Test ragged and non-positive inputs"""
        with pytest.raises(ValidationError):
            simple_throughput([[1.0, 2.0], [1.0]], two_level_table, FrameConfig(n_rb=2))
        with pytest.raises(ValidationError):
            simple_throughput([[1.0, 2.0, 3.0]], two_level_table, FrameConfig(n_rb=2))
        with pytest.raises(DomainError):
            simple_throughput([-1.0], two_level_table, FrameConfig(n_rb=1))
        with pytest.raises(DomainError):
            IanSinr(0.0)


class TestIan:
    """Test the interference-as-noise model"""

    def test_matches_exact_on_exponential_laws(self, mcs_table):
        """Test IaN is the exact model when laws really are exponential"""
        means = [0.8, 4.0, 25.0]
        frame = FrameConfig(n_rb=2)
        pop = CellPopulation.from_exponential_means(means, frame)
        exact = relaxed_mcs_throughput(pop, mcs_table).rates
        np.testing.assert_allclose(ian_throughput(means, mcs_table, frame), exact, rtol=1e-6)

    def test_matches_quadrature(self, mcs_table):
        """Test heterogeneous 3-user instance against quadrature of the rate integral"""
        means = [0.3, 2.0, 40.0]
        frame = FrameConfig(n_rb=1)
        pop = CellPopulation.from_exponential_means(means, frame)
        reference = relaxed_mcs_throughput(pop, mcs_table, method=QUADRATURE).rates
        np.testing.assert_allclose(ian_throughput(means, mcs_table, frame, cross_check=False),
                                   reference, rtol=1e-7)

    def test_matches_dense_limit(self, mcs_table):
        """Test same closed form as the ultra-dense model"""
        means = [1.5, 9.0]
        frame = FrameConfig(n_rb=3)
        np.testing.assert_allclose(ian_throughput(means, mcs_table, frame),
                                   ultra_dense_relaxed_throughput(means, 2, 3, mcs_table), rtol=1e-12)


class TestGaussian:
    """Test the Gaussian rate-surrogate model"""

    @pytest.fixture
    def frame(self):
        return FrameConfig(n_rb=1)

    def test_rate_params(self, two_level_table):
        """Test μ and σ from exponential interval masses"""
        params = gaussian_rate_params(1.0, two_level_table)
        p1 = np.exp(-1.0) - np.exp(-10.0)
        p2 = np.exp(-10.0)
        mu = p1 + 2.0 * p2
        assert params.mu == pytest.approx(mu)
        assert params.sigma == pytest.approx(np.sqrt(p1 + 4.0 * p2 - mu ** 2))

    def test_matches_surrogate_monte_carlo(self, mcs_table, frame):
        """Test the clamped integral against sampling the surrogate model"""
        tilde_z = [2.0, 8.0]
        params = [gaussian_rate_params(z, mcs_table) for z in tilde_z]
        mu = np.array([p.mu for p in params])
        sigma = np.array([p.sigma for p in params])

        rng = np.random.default_rng(5)
        draws = rng.standard_normal((1_000_000, 2)) * sigma + mu
        winner = np.argmax(draws / mu, axis=1)
        scale = mcs_table.payload_scale / frame.t_tti
        sampled = [scale * np.mean(np.where(winner == j, np.maximum(draws[:, j], 0.0), 0.0)) for j in range(2)]

        rates = gaussian_throughput(tilde_z, mcs_table, frame, lower_limit='clamped')
        np.testing.assert_allclose(rates, sampled, rtol=0.02)

    def test_zero_limit_below_clamped(self, mcs_table, frame):
        """Test dropping z < 0 can only lose rate"""
        zero = gaussian_throughput([0.5, 3.0, 10.0], mcs_table, frame)
        clamped = gaussian_throughput([0.5, 3.0, 10.0], mcs_table, frame, lower_limit='clamped')
        assert np.all(zero <= clamped)
        assert np.all(zero > 0)

    def test_deterministic_rates(self, mcs_table, frame):
        """Test σ = 0 terminals: ties go to the lower index"""
        rates = gaussian_throughput([1e20, 1e20], mcs_table, frame, lower_limit='clamped')
        full = mcs_table.payload_scale / frame.t_tti * mcs_table.max_efficiency
        assert rates[0] == pytest.approx(full)
        assert rates[1] == 0.0

    def test_unknown_lower_limit(self, mcs_table, frame):
        """Test lower limit validation"""
        with pytest.raises(ValidationError):
            gaussian_throughput([1.0], mcs_table, frame, lower_limit='minus_infinity')


class TestIidPriority:
    """Test the identical-competitor model"""

    def test_matches_ian_on_exponential_laws(self, mcs_table):
        """Test coincidence with IaN when laws are exponential"""
        means = [0.5, 6.0, 30.0]
        frame = FrameConfig(n_rb=2)
        pop = CellPopulation.from_exponential_means(means, frame)
        np.testing.assert_allclose(iid_priority_throughput(pop, mcs_table), ian_throughput(means, mcs_table, frame),
                                   rtol=1e-6)

    def test_matches_exact_for_identical_laws(self, mcs_table):
        """Test symmetric exact laws make the model exact"""
        link = LinkProfile(1.0, (0.4, 0.1), 0.05)
        pop = CellPopulation.from_links([[link], [link]], FrameConfig(n_rb=1))
        np.testing.assert_allclose(iid_priority_throughput(pop, mcs_table),
                                   relaxed_mcs_throughput(pop, mcs_table).rates, rtol=1e-6)


class TestUniqueMcsIan:
    """Test the unique-MCS model on IaN laws"""

    def test_symmetric_users_match_dense_form(self, mcs_table):
        """Test identical users reproduce the ultra-dense closed form"""
        rates = unique_mcs_ian_throughput([3.0, 3.0, 3.0], 3, 4, mcs_table)
        dense = ultra_dense_unique_mcs_throughput(3.0, 3, 4, mcs_table)
        np.testing.assert_allclose(rates, dense, rtol=1e-4)

    def test_terminal_count_mismatch(self, mcs_table):
        """Test |J| must match the number of SINRs"""
        with pytest.raises(ValidationError):
            unique_mcs_ian_throughput([1.0, 2.0], 3, 2, mcs_table)
