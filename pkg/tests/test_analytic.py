"""
Unit tests for the exact throughput models
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import analytic_config
from src.exceptions import ComplexityError, DomainError, IllConditionedError, ValidationError
from src.models.analytic import (
    QUADRATURE,
    build_antiderivative,
    definite_integral,
    estimate_term_count,
    eval_antiderivative,
    expansion_mass,
    joint_scales,
    normalized_laws,
    pfs_sinr_gain,
    quadrature_integral,
    relaxed_mcs_rate,
    relaxed_mcs_throughput,
    scheduled_mean_dense,
    scheduled_sinr_cdf,
    scheduled_sinr_mean,
    scheduled_sinr_pdf,
    scheduling_probability,
    ultra_dense_relaxed_throughput,
    ultra_dense_unique_mcs_throughput,
    unique_mcs_rate,
    unique_mcs_throughput
)
from src.models.partial_fractions import PoleExpansion
from src.models.population import CellPopulation, FrameConfig
from src.models import analytic
from src.models.sinr import LinkProfile
from src.numerics import integrate_piecewise
from src.utils.helpers import harmonic_number


def _close(value: float, reference: float, rel: float = 1e-6, floor: float = 1e-9) -> bool:
    return abs(value - reference) <= rel * abs(reference) + floor


class TestPoleExpansion:
    """Test partial-fraction products"""

    def test_product_matches_pointwise(self):
        """Test (A·B)(z) = A(z)·B(z) with shared and distinct poles"""
        a = PoleExpansion(0.5, {1.0: [1.0, 2.0], 4.0: [0.0, 0.0, 3.0]})
        b = PoleExpansion.simple([1.0, 2.5], [-1.5, 0.75])
        z = np.linspace(0.0, 30.0, 61)
        np.testing.assert_allclose((a * b)(z), a(z) * b(z), rtol=1e-11, atol=1e-14)

    def test_orders_add_on_shared_pole(self):
        """Test 1/(1+z) · 1/(1+z) = 1/(1+z)^2"""
        square = PoleExpansion.simple([1.0], [1.0]) * PoleExpansion.simple([1.0], [1.0])
        assert list(square.terms()) == [(1.0, 2, 1.0)]
        assert square.max_order == 2

    def test_identity_element(self):
        """Test multiplying by one"""
        a = PoleExpansion.simple([2.0, 3.0], [1.0, -1.0])
        assert (PoleExpansion.one() * a)(1.7) == pytest.approx(a(1.7))


class TestAntiderivative:
    """Test the closed-form primitive against quadrature"""

    def test_single_terminal_is_cdf(self):
        """Test with |J| = 1 the primitive is F_j"""
        pop = CellPopulation.from_links([[LinkProfile(1.0, (0.5, 0.25), 0.05)]], FrameConfig(n_rb=1))
        terms = build_antiderivative(0, pop)
        for z in (0.0, 0.3, 2.0, 15.0):
            assert eval_antiderivative(terms, z).value == pytest.approx(pop.distribution(0).cdf(z), abs=1e-12)

    def test_two_terminals_single_interferer(self):
        """Test |J| = 2, I = 1: primitive rise from 0 to z matches quadrature"""
        links = [[LinkProfile(1.0, (0.4,), 0.1)], [LinkProfile(1.0, (0.9,), 0.05)]]
        pop = CellPopulation.from_links(links, FrameConfig(n_rb=1))
        for j in range(2):
            terms = build_antiderivative(j, pop)
            base = eval_antiderivative(terms, 0.0).value
            for z in (0.5, 3.0, 40.0):
                rise = eval_antiderivative(terms, z).value - base
                assert rise == pytest.approx(quadrature_integral(j, pop, 0, 0.0, z), rel=1e-8, abs=1e-12)

    def test_random_intervals_match_quadrature(self, make_population, mcs_table):
        """Test every MCS interval on random instances, |J| <= 4, I <= 3"""
        rng = np.random.default_rng(2024)
        for _ in range(8):
            pop = make_population(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
            for j in range(pop.terminals):
                terms = build_antiderivative(j, pop)
                for lower, upper, _ in mcs_table.intervals():
                    try:
                        closed, _ = definite_integral(terms, lower, upper)
                    except IllConditionedError:
                        continue
                    reference = quadrature_integral(j, pop, 0, lower, upper)
                    assert _close(closed.value, reference), (j, lower, upper)

    def test_primitive_normalised_at_infinity(self, small_population):
        """Test primitive equals 1 at infinity"""
        terms = build_antiderivative(0, small_population)
        assert eval_antiderivative(terms, math.inf).value == 1.0

    def test_term_estimate_bounds_count(self, small_population):
        """Test the complexity estimate is an upper bound"""
        for j in range(small_population.terminals):
            assert build_antiderivative(j, small_population).term_count <= estimate_term_count(j, small_population)

    def test_term_cap(self, small_population, monkeypatch):
        """Test expansion refuses to exceed the cap"""
        monkeypatch.setattr(analytic_config, 'TERM_CAP', 1)
        with pytest.raises(ComplexityError):
            build_antiderivative(0, small_population)

    def test_negative_argument(self, small_population):
        """Test negative SINR is rejected"""
        terms = build_antiderivative(0, small_population)
        with pytest.raises(DomainError):
            eval_antiderivative(terms, -1.0)
        with pytest.raises(DomainError):
            definite_integral(terms, 2.0, 1.0)


class TestScheduling:
    """Test scheduling probability and the scheduled SINR law"""

    def test_probabilities_sum_to_one(self, make_population):
        """Test Σ_j P[S_j = 1] = 1 per RB"""
        rng = np.random.default_rng(99)
        for _ in range(5):
            pop = make_population(rng, int(rng.integers(2, 5)), int(rng.integers(1, 4)), n_rb=2)
            for rb in range(pop.n_rb):
                total = sum(scheduling_probability(j, pop, rb) for j in range(pop.terminals))
                assert total == pytest.approx(1.0, abs=1e-6)

    def test_probabilities_sum_to_one_interference_limited(self):
        """Test Σ_j P[S_j = 1] = 1 with weak noise and interferers spread over 40 dB"""
        rng = np.random.default_rng(2024)
        links = [
            [LinkProfile(1.0, tuple(10.0 ** rng.uniform(-4.0, 0.0, size=3)), float(10.0 ** rng.uniform(-3.0, -1.0)))]
            for _ in range(6)
        ]
        pop = CellPopulation.from_links(links, FrameConfig(n_rb=1))
        total = sum(scheduling_probability(j, pop) for j in range(pop.terminals))
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_strong_and_weak_interferer_pair(self, mcs_table):
        """Test half-line integrals when the decay length lies decades past the mean"""
        links = [[LinkProfile(1.0, (50.0,), 1e-3)], [LinkProfile(1.0, (0.02,), 1e-3)]]
        pop = CellPopulation.from_links(links, FrameConfig(n_rb=1))
        top = mcs_table.thresholds[-1]
        probabilities = []
        for j in range(2):
            probabilities.append(scheduling_probability(j, pop))
            split = quadrature_integral(j, pop, 0, 0.0, top) + quadrature_integral(j, pop, 0, top, math.inf)
            assert split == pytest.approx(probabilities[-1], rel=1e-7)
        assert sum(probabilities) == pytest.approx(1.0, abs=1e-7)

    def test_scaling_one_terminal_keeps_probabilities(self):
        """Test a common factor on p0, p_i and N0 of one terminal changes no scheduling probability"""
        links = [
            [LinkProfile(1.0, (0.5, 0.25), 0.05)],
            [LinkProfile(2.0, (0.3,), 0.1)],
            [LinkProfile(0.5, (), 0.02)]
        ]
        factor = 7.3
        scaled = list(links)
        scaled[1] = [LinkProfile(2.0 * factor, (0.3 * factor,), 0.1 * factor)]
        base = CellPopulation.from_links(links, FrameConfig(n_rb=1))
        other = CellPopulation.from_links(scaled, FrameConfig(n_rb=1))
        for j in range(3):
            assert scheduling_probability(j, other) == pytest.approx(scheduling_probability(j, base), abs=1e-9)

    def test_scheduled_pdf_normalised(self, small_population):
        """Test the scheduled SINR density integrates to 1 and its CDF reaches 1"""
        for j in range(small_population.terminals):
            probability = scheduling_probability(j, small_population)
            total = integrate_piecewise(
                lambda z: scheduled_sinr_pdf(j, small_population, 0, z, probability),
                0.0, math.inf, joint_scales(j, small_population)
            )
            assert total == pytest.approx(1.0, abs=1e-7)
            assert scheduled_sinr_cdf(j, small_population, 0, 1e6, probability) == pytest.approx(1.0, abs=1e-7)

    def test_exponential_probability(self):
        """Test exponential populations give 1/|J| whatever the means"""
        pop = CellPopulation.from_exponential_means([0.5, 3.0, 20.0, 7.0], FrameConfig(n_rb=1))
        for j in range(4):
            assert scheduling_probability(j, pop) == pytest.approx(0.25, abs=1e-8)

    def test_single_terminal(self):
        """Test |J| = 1 reduces to the unconditional law"""
        pop = CellPopulation.from_links([[LinkProfile(1.0, (0.3,), 0.1)]], FrameConfig(n_rb=1))
        law = pop.distribution(0)
        assert scheduling_probability(0, pop) == 1.0
        assert scheduled_sinr_cdf(0, pop, 0, 2.0) == pytest.approx(law.cdf(2.0))
        assert scheduled_sinr_pdf(0, pop, 0, 2.0) == pytest.approx(law.pdf(2.0))

    def test_dense_scheduled_cdf(self):
        """Test scheduled CDF is F^|J| for exponential laws"""
        pop = CellPopulation.from_exponential_means([1.0, 2.0, 5.0], FrameConfig(n_rb=1))
        for z in (0.5, 2.0, 6.0):
            expected = (1.0 - math.exp(-z / 2.0)) ** 3
            assert scheduled_sinr_cdf(1, pop, 0, z) == pytest.approx(expected, abs=1e-8)
            assert scheduled_sinr_cdf(1, pop, 0, z, method=QUADRATURE) == pytest.approx(expected, abs=1e-8)

    def test_scheduled_mean_gain(self):
        """Test E[Z | S = 1] = E[Z]·H_|J| for exponential laws"""
        pop = CellPopulation.from_exponential_means([1.0, 4.0], FrameConfig(n_rb=1))
        assert scheduled_sinr_mean(1, pop) == pytest.approx(4.0 * 1.5, rel=1e-7)

    def test_scheduled_mean_exceeds_unconditional(self, small_population):
        """Test PFS selects above-average SINRs"""
        for j in range(small_population.terminals):
            assert scheduled_sinr_mean(j, small_population) > small_population.distribution(j).mean

    def test_normalized_laws(self, small_population):
        """Test competitors are rescaled to the terminal's mean"""
        own, others = normalized_laws(0, small_population, 0)
        assert len(others) == 2
        for law in others:
            assert law.mean == pytest.approx(own.mean)

    def test_index_out_of_range(self, small_population):
        """Test bad terminal or RB indices"""
        with pytest.raises(DomainError):
            normalized_laws(5, small_population, 0)
        with pytest.raises(DomainError):
            scheduling_probability(0, small_population, 9)


class TestRelaxedMcs:
    """Test the relaxed-MCS rate"""

    @pytest.fixture
    def four_terminals(self, make_population):
        """|J| = 4, I = 2"""
        return make_population(np.random.default_rng(31), 4, 2)

    def test_closed_form_matches_quadrature(self, four_terminals, mcs_table):
        """Test the two evaluation paths agree"""
        closed = relaxed_mcs_throughput(four_terminals, mcs_table, threads=1).rates
        reference = relaxed_mcs_throughput(four_terminals, mcs_table, method=QUADRATURE, threads=2).rates
        np.testing.assert_allclose(closed, reference, rtol=1e-5)

    def test_cross_check_clean(self, four_terminals, mcs_table):
        """Test no interval disagrees beyond tolerance"""
        result = relaxed_mcs_rate(0, four_terminals, mcs_table, cross_check=True)
        assert not any('disagrees' in note for note in result.fallbacks)
        assert len(result.intervals) == four_terminals.n_rb

    def test_single_exponential_terminal(self, mcs_table):
        """Test |J| = 1 is N·Σ c_m ΔF scaled to bit/s"""
        frame = FrameConfig(n_rb=3)
        pop = CellPopulation.from_exponential_means([4.0], frame)
        edges = np.asarray(mcs_table.interval_edges())
        expected = 3 * 168 / 1e-3 * float(np.asarray(mcs_table.efficiencies) @ np.diff(1.0 - np.exp(-edges / 4.0)))
        assert relaxed_mcs_rate(0, pop, mcs_table).rate == pytest.approx(expected, rel=1e-9)

    def test_exponential_matches_dense_limit(self, mcs_table):
        """Test exact model equals the ultra-dense form on exponential laws"""
        means = [0.5, 3.0, 12.0]
        pop = CellPopulation.from_exponential_means(means, FrameConfig(n_rb=2))
        exact = relaxed_mcs_throughput(pop, mcs_table).rates
        dense = ultra_dense_relaxed_throughput(means, 3, 2, mcs_table)
        np.testing.assert_allclose(exact, dense, rtol=1e-6)

    def test_complexity_fallback(self, four_terminals, mcs_table, monkeypatch):
        """Test the cap routes every interval to quadrature"""
        reference = relaxed_mcs_rate(1, four_terminals, mcs_table).rate
        monkeypatch.setattr(analytic_config, 'TERM_CAP', 1)
        result = relaxed_mcs_rate(1, four_terminals, mcs_table)
        assert any('ComplexityError' in note for note in result.fallbacks)
        assert result.rate == pytest.approx(reference, rel=1e-5)

    def test_product_form_fallback(self, mcs_table):
        """Test laws without a decomposition use quadrature"""
        links = [[LinkProfile(1.0, (0.125,) * 8, 0.1)], [LinkProfile(1.0, (0.3,), 0.1)]]
        pop = CellPopulation.from_links(links, FrameConfig(n_rb=1), on_degenerate='product')
        result = relaxed_mcs_rate(0, pop, mcs_table)
        assert any('DegenerateRootsError' in note for note in result.fallbacks)
        assert result.rate > 0


class TestUniqueMcs:
    """Test the unique-MCS rate"""

    def test_single_rb_equals_relaxed(self, small_population, mcs_table):
        """Test N = 1 has no minimum penalty"""
        pop = small_population.with_frame(FrameConfig(n_rb=1))
        for j in range(pop.terminals):
            assert unique_mcs_rate(j, pop, mcs_table).rate == pytest.approx(
                relaxed_mcs_rate(j, pop, mcs_table).rate, rel=1e-6)

    def test_bounded_by_relaxed(self, small_population, mcs_table):
        """Test the common MCS never beats per-RB selection"""
        unique = unique_mcs_throughput(small_population, mcs_table).rates
        relaxed = relaxed_mcs_throughput(small_population, mcs_table).rates
        assert np.all(unique <= relaxed * (1 + 1e-9))

    def test_binomial_path_agrees(self, small_population, mcs_table):
        """Test closed-form primitive with the binomial expansion"""
        quad = unique_mcs_throughput(small_population, mcs_table).rates
        binomial = unique_mcs_throughput(small_population, mcs_table, method='binomial').rates
        np.testing.assert_allclose(binomial, quad, rtol=1e-5)

    @pytest.mark.parametrize("terminals,n_rb", [(2, 3), (4, 10), (6, 5)])
    def test_dense_closed_form(self, mcs_table, terminals, n_rb):
        """Test ultra-dense unique-MCS form against the numerical model"""
        pop = CellPopulation.from_exponential_means([5.0] * terminals, FrameConfig(n_rb=n_rb))
        numerical = unique_mcs_rate(0, pop, mcs_table).rate
        dense = ultra_dense_unique_mcs_throughput(5.0, terminals, n_rb, mcs_table)
        assert dense == pytest.approx(numerical, rel=1e-4)

    @pytest.mark.parametrize("mean", [2.0, 10.0])
    def test_dense_single_terminal_many_rbs(self, mcs_table, mean):
        """Test |J| = 1 on 100 RBs: the weakest of 100 exponentials has mean E[Z]/100"""
        n_rb = 100
        edges = np.asarray(mcs_table.interval_edges())
        survival = np.exp(-edges * n_rb / mean)
        expected = n_rb * 168 / 1e-3 * float(np.asarray(mcs_table.efficiencies) @ (survival[:-1] - survival[1:]))
        rate = ultra_dense_unique_mcs_throughput(mean, 1, n_rb, mcs_table)
        assert rate > 0
        assert rate == pytest.approx(expected, rel=1e-10)

    def test_dense_two_terminals_many_rbs(self, mcs_table):
        """Test the dense closed form against the numerical model at N = 100"""
        pop = CellPopulation.from_exponential_means([10.0, 10.0], FrameConfig(n_rb=100))
        dense = ultra_dense_unique_mcs_throughput(10.0, 2, 100, mcs_table)
        assert dense == pytest.approx(unique_mcs_rate(0, pop, mcs_table).rate, rel=1e-4)
        assert dense == pytest.approx(5_050_956, rel=1e-5)

    def test_dense_cross_check_clean(self, mcs_table, mocker):
        """Test the expanded sum agrees with the survival form on every interval"""
        verdicts = []
        original = analytic.disagrees

        def recording(value, reference):
            verdicts.append(original(value, reference))
            return verdicts[-1]

        plain = ultra_dense_unique_mcs_throughput(10.0, 3, 60, mcs_table)
        mocker.patch.object(analytic, 'disagrees', side_effect=recording)
        checked = ultra_dense_unique_mcs_throughput(10.0, 3, 60, mcs_table, cross_check=True)
        assert checked == plain
        assert verdicts and not any(verdicts)

    def test_expansion_mass(self):
        """Test the alternating expansion equals (1 - F_lo)^n - (1 - F_hi)^n"""
        small = expansion_mass(0.005, 0.02, 10)
        assert small.value == pytest.approx(0.995 ** 10 - 0.98 ** 10, rel=1e-12)

        large = expansion_mass(0.5, 0.9, 100)
        assert large.value == pytest.approx(0.5 ** 100 - 0.1 ** 100, rel=1e-9)
        assert large.condition > analytic_config.EXTENDED_PRECISION_THRESHOLD

        powered = expansion_mass(0.3, 0.6, 40, exponent=3)
        assert powered.value == pytest.approx((1 - 0.3 ** 3) ** 40 - (1 - 0.6 ** 3) ** 40, rel=1e-9)

    def test_binomial_path_many_rbs(self, mcs_table):
        """Test the binomial method stays on the quadrature result at N = 100"""
        pop = CellPopulation.from_exponential_means([10.0, 3.0], FrameConfig(n_rb=100))
        quad = unique_mcs_throughput(pop, mcs_table, threads=1).rates
        binomial = unique_mcs_throughput(pop, mcs_table, method='binomial', threads=1).rates
        assert np.all(binomial > 0)
        np.testing.assert_allclose(binomial, quad, rtol=1e-5)

    def test_dense_monotone_in_mean(self, mcs_table):
        """Test a stronger terminal never earns less"""
        rates = [ultra_dense_unique_mcs_throughput(m, 3, 4, mcs_table) for m in (0.5, 2.0, 8.0, 30.0)]
        assert rates == sorted(rates)

    def test_inhomogeneous_population(self, mcs_table):
        """Test per-RB laws must coincide"""
        laws = CellPopulation.from_exponential_means([1.0, 2.0], FrameConfig(n_rb=2))
        rows = ((laws.distribution(0), laws.distribution(1)), (laws.distribution(1), laws.distribution(1)))
        mixed = CellPopulation(rows, FrameConfig(n_rb=2))
        with pytest.raises(ValidationError):
            unique_mcs_rate(0, mixed, mcs_table)

    def test_unknown_method(self, small_population, mcs_table):
        """Test method validation"""
        with pytest.raises(ValidationError):
            unique_mcs_rate(0, small_population, mcs_table, method='simpson')


class TestUltraDense:
    """Test exponential-limit closed forms"""

    def test_single_terminal(self, mcs_table):
        """Test |J| = 1 is the outage-weighted efficiency"""
        edges = np.asarray(mcs_table.interval_edges())
        expected = 5 * 168 / 1e-3 * float(np.asarray(mcs_table.efficiencies) @ np.diff(1.0 - np.exp(-edges / 2.0)))
        rate = ultra_dense_relaxed_throughput([2.0], 1, 5, mcs_table)[0]
        assert rate == pytest.approx(expected, rel=1e-12)
        assert ultra_dense_unique_mcs_throughput(2.0, 1, 1, mcs_table) == pytest.approx(expected / 5, rel=1e-9)

    def test_independent_of_other_terminals(self, mcs_table):
        """Test R_j depends only on its own mean and |J|"""
        first = ultra_dense_relaxed_throughput([3.0, 1.0, 1.0], None, 4, mcs_table)[0]
        second = ultra_dense_relaxed_throughput([3.0, 50.0, 0.1], None, 4, mcs_table)[0]
        assert first == second

    def test_domain(self, mcs_table):
        """Test non-positive means are rejected"""
        with pytest.raises(DomainError):
            ultra_dense_relaxed_throughput([0.0], 1, 1, mcs_table)


class TestSinrGain:
    """Test the PFS SINR gain"""

    def test_known_values(self):
        """Test G(1), G(2), G(10)"""
        assert pfs_sinr_gain(1) == 1.0
        assert pfs_sinr_gain(2) == pytest.approx(1.5, abs=1e-12)
        assert pfs_sinr_gain(10) == pytest.approx(2.928968253968254, abs=1e-12)

    def test_harmonic_identity(self):
        """Test G(J) = H_J up to 30 terminals"""
        for count in range(1, 31):
            assert abs(pfs_sinr_gain(count) - harmonic_number(count)) < 1e-12

    def test_invalid_count(self):
        """Test |J| >= 1"""
        with pytest.raises(DomainError):
            pfs_sinr_gain(0)

    def test_scheduled_mean_dense(self):
        """Test E[Z | S = 1] = E[Z]·G(J)"""
        assert scheduled_mean_dense(1.0, 0.5, 0.5, 4) == pytest.approx(2.0833333333333335, rel=1e-12)
        assert scheduled_mean_dense(2.0, 1.0, 1.0, 1) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            scheduled_mean_dense(1.0, 0.0, 0.0, 2)
