from .two_sample import (
    DEFAULT_S_MAX,
    TestMethod,
    TestOutcome,
    kolmogorov_cdf,
    ks_critical_value,
    ks_p_value,
    ks_statistic,
    ks_test,
    permutation_test,
    two_sample_test,
    validity_check,
)
from .meta_analysis import (
    Calibration,
    GeoNull,
    bonferroni,
    fisher_combine,
    gaussianize,
    geo_null_cdf,
    geo_null_pdf,
    geo_null_quantile,
    geometric_mean,
    mle_normal_fit,
    null_stripe,
    power_lower_tailed,
    uniformity_p,
    z_statistic,
)

__all__ = [
    'DEFAULT_S_MAX', 'TestMethod', 'TestOutcome', 'kolmogorov_cdf', 'ks_critical_value',
    'ks_p_value', 'ks_statistic', 'ks_test', 'permutation_test', 'two_sample_test',
    'validity_check', 'Calibration', 'GeoNull', 'bonferroni', 'fisher_combine',
    'gaussianize', 'geo_null_cdf', 'geo_null_pdf', 'geo_null_quantile', 'geometric_mean',
    'mle_normal_fit', 'null_stripe', 'power_lower_tailed', 'uniformity_p', 'z_statistic',
]
