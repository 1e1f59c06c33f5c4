from .aging import AgedSample, AgingMode, age_ensemble, age_interarrivals, age_sequence, shuffled_aged
from .analytic import (
    ParetoLaw,
    aged_pdf_exponential,
    aged_pdf_exponential_window_start,
    aged_pdf_pareto,
    survival_pareto,
)
from .tail import hill_tail_index

__all__ = [
    'AgedSample', 'AgingMode', 'age_ensemble', 'age_interarrivals', 'age_sequence',
    'shuffled_aged',
    'ParetoLaw', 'aged_pdf_exponential', 'aged_pdf_exponential_window_start',
    'aged_pdf_pareto', 'survival_pareto', 'hill_tail_index',
]
