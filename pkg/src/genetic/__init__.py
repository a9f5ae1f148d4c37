from .config import GAConfig
from .genesim import TraceRow, run_genesim, write_trace_csv
from .individual import Fitness, Individual, Population, fitness_order, rank
from .operators import mutate, recombine, replace, tournament_select

__all__ = [
    "Fitness",
    "GAConfig",
    "Individual",
    "Population",
    "TraceRow",
    "fitness_order",
    "mutate",
    "rank",
    "recombine",
    "replace",
    "run_genesim",
    "tournament_select",
    "write_trace_csv",
]
