"""
Unit tests for SINR laws
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.exceptions import DegenerateRootsError, DomainError, InfiniteMeanError
from src.models.sinr import (
    DistributionForm,
    LinkProfile,
    asymptotic_distribution,
    build_distribution,
    cdf,
    cdf_product,
    exponential_distribution,
    from_parameters,
    mean_sinr,
    pdf
)
from src.numerics import integrate, integrate_piecewise


class TestLinkProfile:
    """Test link validation and derived powers"""

    def test_ian_sinr(self):
        """Test Z̃ = p0/(P + N0)"""
        link = LinkProfile(1.0, (0.5, 0.25), 0.25)
        assert link.total_interference == 0.75
        assert link.ian_sinr == pytest.approx(1.0)

    @pytest.mark.parametrize("args", [
        (0.0, (), 1.0),
        (1.0, (-0.1,), 1.0),
        (1.0, (), 0.0),
        (1.0, (0.5,), -1.0)
    ])
    def test_invalid_links(self, args):
        """Test invalid powers are rejected"""
        with pytest.raises(DomainError):
            LinkProfile(*args)

    def test_equal_split(self):
        """Test total interference is preserved"""
        split = LinkProfile(1.0, (0.6, 0.4), 0.1).equal_split(4)
        assert split.interferer_powers == (0.25,) * 4
        assert split.total_interference == pytest.approx(1.0)


class TestBuildDistribution:
    """Test construction of SINR laws"""

    def test_noise_limited(self):
        """Test no interferers gives the exponential form with λ = N0/p0"""
        dist = build_distribution(LinkProfile(1.0, (), 0.1))
        assert dist.form == DistributionForm.EXPONENTIAL
        assert dist.rate == pytest.approx(0.1)
        assert dist.mean == pytest.approx(10.0)

    def test_single_interferer(self):
        """Test I = 1 gives u = c"""
        dist = build_distribution(LinkProfile(1.0, (1.0,), 1.0))
        assert dist.c == (1.0,)
        assert dist.c0 == 1.0
        assert dist.u == (1.0,)

    def test_two_interferers(self):
        """Test 8/((2+z)(4+z)) = 4/(2+z) - 4/(4+z)"""
        dist = build_distribution(LinkProfile(1.0, (0.5, 0.25), 0.05))
        weights = dict(zip(dist.c, dist.u))
        assert sorted(weights) == [2.0, 4.0]
        assert weights[2.0] == pytest.approx(4.0, abs=1e-12)
        assert weights[4.0] == pytest.approx(-4.0, abs=1e-12)
        assert dist.c0 == pytest.approx(0.05)

    def test_from_parameters(self):
        """Test building straight from (c, c0)"""
        dist = from_parameters([2.0, 4.0], 0.05)
        z = np.linspace(0.0, 50.0, 101)
        np.testing.assert_allclose(dist.cdf(z), build_distribution(LinkProfile(1.0, (0.5, 0.25), 0.05)).cdf(z),
                                   atol=1e-12)

    def test_coincident_roots_raise(self):
        """Test many equal interferers cannot be separated"""
        with pytest.raises(DegenerateRootsError):
            build_distribution(LinkProfile(1.0, (0.125,) * 8, 0.1))

    def test_coincident_roots_product_form(self):
        """Test product mode keeps an exact, evaluable law"""
        dist = build_distribution(LinkProfile(1.0, (0.125,) * 8, 0.1), on_degenerate='product')
        z = np.linspace(0.0, 20.0, 50)
        expected = 1.0 - (1.0 + z / 8.0) ** -8 * np.exp(-0.1 * z)
        np.testing.assert_allclose(dist.cdf(z), expected, atol=1e-12)
        assert math.isfinite(dist.mean)

    def test_near_coincident_roots_perturbed(self):
        """Test close roots are spread and flagged"""
        dist = build_distribution(LinkProfile(1.0, (0.5, 0.5 * (1 + 1e-12)), 0.1), on_degenerate='product')
        assert dist.perturbed or not dist.decomposed
        z = np.linspace(0.0, 30.0, 60)
        np.testing.assert_allclose(dist.cdf(z), dist.cdf_product(z), atol=1e-6)


class TestDistributionFunctions:
    """Test cdf, pdf and mean"""

    @pytest.fixture
    def unit_law(self):
        """I = 1, c1 = 1, c0 = 1"""
        return build_distribution(LinkProfile(1.0, (1.0,), 1.0))

    def test_cdf_product_at_zero(self, unit_law):
        """Test F(0) = 0"""
        assert cdf_product(unit_law, 0.0) == 0.0

    def test_cdf_product_without_noise(self):
        """Test c0 = 0 is allowed for the CDF"""
        dist = build_distribution(LinkProfile(1.0, (1.0,), 0.0))
        assert cdf_product(dist, 1.0) == pytest.approx(0.5)

    def test_cdf_product_with_noise(self, unit_law):
        """Test 1 - 0.5·e^{-1}"""
        assert cdf_product(unit_law, 1.0) == pytest.approx(0.8160602794, rel=1e-10)

    def test_exponential_cdf(self):
        """Test λ = 2 at z = 1"""
        assert cdf(exponential_distribution(0.5), 1.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)

    def test_negative_sinr(self, unit_law):
        """Test negative z is a domain error"""
        with pytest.raises(DomainError):
            cdf_product(unit_law, -1.0)
        with pytest.raises(DomainError):
            pdf(unit_law, -0.5)

    def test_partial_fraction_identity(self, rng):
        """Test cdf and cdf_product agree on random laws"""
        z = np.linspace(0.0, 50.0, 200)
        for _ in range(100):
            count = int(rng.integers(1, 7))
            powers = 10.0 ** rng.uniform(-2.0, 1.0, size=count)
            dist = build_distribution(LinkProfile(1.0, tuple(powers), float(rng.uniform(0.0, 1.0))))
            assert np.max(np.abs(cdf(dist, z) - cdf_product(dist, z))) < 1e-9

    def test_pdf_normalised(self):
        """Test ∫ f = 1"""
        dist = build_distribution(LinkProfile(1.0, (0.5, 0.25, 0.1), 0.05))
        total = integrate(lambda z: pdf(dist, z), 0.0, math.inf, scale=1.0 / dist.c0)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_pdf_non_negative(self, rng):
        """Test f >= 0 on a grid"""
        dist = build_distribution(LinkProfile(1.0, tuple(rng.uniform(0.1, 2.0, size=4)), 0.2))
        assert np.all(pdf(dist, np.linspace(0.0, 100.0, 500)) >= 0)

    def test_pdf_is_derivative_of_cdf(self, rng):
        """Test f against central differences of F"""
        z = np.concatenate((np.linspace(0.01, 5.0, 60), np.geomspace(5.0, 500.0, 30)))
        step = 1e-5 * np.maximum(1.0, z)
        for _ in range(20):
            count = int(rng.integers(1, 5))
            dist = build_distribution(LinkProfile(1.0, tuple(rng.uniform(0.1, 2.0, size=count)),
                                                  float(rng.uniform(0.01, 0.5))))
            numeric = (cdf(dist, z + step) - cdf(dist, z - step)) / (2.0 * step)
            np.testing.assert_allclose(pdf(dist, z), numeric, atol=1e-5)

    def test_stronger_interferer_lowers_sinr(self):
        """Test raising one interferer power raises F everywhere"""
        z = np.geomspace(1e-3, 1e3, 300)
        base = build_distribution(LinkProfile(1.0, (0.5, 0.2, 0.05), 0.1))
        for i in range(3):
            powers = [0.5, 0.2, 0.05]
            powers[i] *= 1.5
            stronger = build_distribution(LinkProfile(1.0, tuple(powers), 0.1))
            assert np.all(cdf(stronger, z) >= cdf(base, z) - 1e-12)
            assert np.any(cdf(stronger, z) > cdf(base, z) + 1e-6)

    def test_scales(self):
        """Test the quadrature scales are the poles, the decay length and the mean"""
        dist = build_distribution(LinkProfile(1.0, (0.5, 0.25), 0.05))
        scales = dist.scales()
        assert scales == tuple(sorted(scales))
        for value in (2.0, 4.0, 20.0, dist.mean):
            assert min(abs(s - value) for s in scales) < 1e-12 * value
        assert exponential_distribution(3.0).scales() == pytest.approx((3.0, 3.0))

    def test_mean_interference_limited(self):
        """Test E[Z] of a law whose decay length 1/c0 is far beyond its pole"""
        dist = build_distribution(LinkProfile(1.0, (50.0,), 1e-3))
        reference = integrate_piecewise(lambda z: 1.0 - cdf_product(dist, z), 0.0, math.inf, dist.scales())
        assert mean_sinr(dist) == pytest.approx(reference, rel=1e-7)

    def test_mean_single_interferer(self, unit_law):
        """Test e·E1(1)"""
        assert mean_sinr(unit_law) == pytest.approx(0.5963473623, rel=1e-9)

    def test_mean_exponential(self):
        """Test 1/λ"""
        assert mean_sinr(exponential_distribution(0.25)) == pytest.approx(0.25)

    def test_mean_matches_quadrature(self):
        """Test E[Z] against ∫(1 - F)"""
        dist = build_distribution(LinkProfile(1.0, (0.5, 0.25), 0.05))
        reference = integrate(lambda z: 1.0 - cdf_product(dist, z), 0.0, math.inf, scale=1.0 / dist.c0)
        assert mean_sinr(dist) == pytest.approx(reference, rel=1e-8)

    def test_infinite_mean(self):
        """Test interferers without noise have no finite mean"""
        with pytest.raises(InfiniteMeanError):
            mean_sinr(build_distribution(LinkProfile(1.0, (1.0,), 0.0)))

    def test_scaled_law(self):
        """Test law of a·Z"""
        dist = build_distribution(LinkProfile(1.0, (0.5, 0.25), 0.05))
        doubled = dist.scaled(2.0)
        z = np.linspace(0.0, 20.0, 40)
        np.testing.assert_allclose(doubled.cdf(2.0 * z), dist.cdf(z), atol=1e-12)
        assert doubled.mean == pytest.approx(2.0 * dist.mean)

    def test_sampling_matches_law(self):
        """Test sampled mean within a few standard errors"""
        dist = build_distribution(LinkProfile(1.0, (0.5,), 0.5))
        draws = dist.sample(np.random.default_rng(7), 200_000)
        error = draws.std() / math.sqrt(len(draws))
        assert abs(draws.mean() - dist.mean) < 4.0 * error


class TestAsymptoticDistribution:
    """Test the exponential limit"""

    def test_no_interference(self):
        """Test p0 = 1, P = 0, n0 = 1"""
        dist = asymptotic_distribution(1.0, 0.0, 1.0)
        assert dist.rate == 1.0
        assert dist.mean == 1.0

    def test_mean(self):
        """Test p0 = 2, P = 3, n0 = 1"""
        assert asymptotic_distribution(2.0, 3.0, 1.0).mean == pytest.approx(0.5)

    def test_domain(self):
        """Test n0 must be positive"""
        with pytest.raises(DomainError):
            asymptotic_distribution(1.0, 1.0, 0.0)

    def test_equal_split_convergence(self):
        """Test 64 equal interferers are within 0.01 of the limit"""
        link = LinkProfile(1.0, (1.0,), 0.1)
        limit = asymptotic_distribution(link.p0, link.total_interference, link.n0)
        few = build_distribution(link)
        many = build_distribution(link.equal_split(64), on_degenerate='product')
        assert many.sup_distance(limit) < 0.01
        assert many.sup_distance(limit) < few.sup_distance(limit)
