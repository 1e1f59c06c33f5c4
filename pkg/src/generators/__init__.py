from . import processes
from .acf import AcfResult, acf
from .processes import (
    PolyaUrnDraws,
    gen_abs_ar1,
    gen_exp_ar1,
    gen_hawkes,
    gen_pareto_renewal,
    gen_poisson,
    gen_polya_urn,
    gen_stoch_vol,
    gen_superposition,
    hawkes_intensity,
    hawkes_mean_rate,
)
from .process_generator import (
    GENERATOR_KINDS,
    BaseProcessGenerator,
    GeneratorSpec,
    parse_inline_spec,
)

__all__ = [
    'AcfResult', 'acf', 'PolyaUrnDraws', 'gen_abs_ar1', 'gen_exp_ar1', 'gen_hawkes',
    'gen_pareto_renewal', 'gen_poisson', 'gen_polya_urn', 'gen_stoch_vol',
    'gen_superposition', 'hawkes_intensity', 'hawkes_mean_rate',
    'GENERATOR_KINDS', 'BaseProcessGenerator', 'GeneratorSpec', 'parse_inline_spec',
]
