"""SINR laws, MCS tables and the throughput models built on them"""

from .mcs import McsTable, spectral_efficiency, load_mcs_table
from .sinr import (
    DistributionForm,
    LinkProfile,
    SinrDistribution,
    build_distribution,
    from_parameters,
    ccdf,
    cdf,
    cdf_product,
    pdf,
    mean_sinr,
    asymptotic_distribution,
    exponential_distribution
)
from .population import FrameConfig, CellPopulation
from .partial_fractions import PoleExpansion
from .analytic import (
    CLOSED_FORM,
    EXTENDED,
    QUADRATURE,
    AntiderivativeTerms,
    IntervalResult,
    TerminalRate,
    ThroughputResult,
    normalized_laws,
    estimate_term_count,
    build_antiderivative,
    eval_antiderivative,
    definite_integral,
    joint_density,
    quadrature_integral,
    scheduling_probability,
    scheduled_sinr_pdf,
    scheduled_sinr_cdf,
    scheduled_sinr_mean,
    relaxed_mcs_rate,
    relaxed_mcs_throughput,
    unique_mcs_rate,
    unique_mcs_throughput,
    ultra_dense_relaxed_throughput,
    ultra_dense_unique_mcs_throughput,
    pfs_sinr_gain,
    scheduled_mean_dense
)
from .baselines import (
    IanSinr,
    GaussianRateParams,
    simple_throughput,
    ian_throughput,
    gaussian_rate_params,
    gaussian_throughput,
    iid_priority_throughput,
    unique_mcs_ian_throughput
)

__all__ = [
    'McsTable',
    'spectral_efficiency',
    'load_mcs_table',
    'DistributionForm',
    'LinkProfile',
    'SinrDistribution',
    'build_distribution',
    'from_parameters',
    'ccdf',
    'cdf',
    'cdf_product',
    'pdf',
    'mean_sinr',
    'asymptotic_distribution',
    'exponential_distribution',
    'FrameConfig',
    'CellPopulation',
    'PoleExpansion',
    'CLOSED_FORM',
    'EXTENDED',
    'QUADRATURE',
    'AntiderivativeTerms',
    'IntervalResult',
    'TerminalRate',
    'ThroughputResult',
    'normalized_laws',
    'estimate_term_count',
    'build_antiderivative',
    'eval_antiderivative',
    'definite_integral',
    'joint_density',
    'quadrature_integral',
    'scheduling_probability',
    'scheduled_sinr_pdf',
    'scheduled_sinr_cdf',
    'scheduled_sinr_mean',
    'relaxed_mcs_rate',
    'relaxed_mcs_throughput',
    'unique_mcs_rate',
    'unique_mcs_throughput',
    'ultra_dense_relaxed_throughput',
    'ultra_dense_unique_mcs_throughput',
    'pfs_sinr_gain',
    'scheduled_mean_dense',
    'IanSinr',
    'GaussianRateParams',
    'simple_throughput',
    'ian_throughput',
    'gaussian_rate_params',
    'gaussian_throughput',
    'iid_priority_throughput',
    'unique_mcs_ian_throughput'
]
