from .grid import run_grid
from .pair_sources import GeneratorPairSource, SamplePairSource, realizations_summary, sequence_digest
from .results import AgeResult, BoxplotStats, RunWarnings, XAResult
from .single_realization import bootstrap_sample, derive_ages, run_single, split_windows
from .exact import default_config, run_exact, run_exact_on_samples

__all__ = [
    'run_grid', 'GeneratorPairSource', 'SamplePairSource', 'realizations_summary',
    'sequence_digest', 'AgeResult', 'BoxplotStats', 'RunWarnings', 'XAResult',
    'bootstrap_sample', 'derive_ages', 'run_single', 'split_windows',
    'default_config', 'run_exact', 'run_exact_on_samples',
]
