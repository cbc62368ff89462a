"""snakeopt settings."""

import os

DEFAULT_POP_SIZE = 30
DEFAULT_MAX_ITER = 500
DEFAULT_TRIALS = 20
DEFAULT_SEED = 0
BUDGET_MODES = ('uniform_pop', 'table4_pop')
DEFAULT_BUDGET_MODE = 'uniform_pop'
SUPPORTED_DIMS = (2, 10, 20)
SEARCH_BOUNDS = (-100.0, 100.0)
NPROCS_ENV = 'SNAKEOPT_NPROCS'

# Population sizes from the rival-settings table; snake variants use 30.
TABLE4_POP = {
    'so': 30,
    'pso': 30,
    'de': 50,
    'ga': 10,
    'gwo': 30,
    'woa': 30,
    'random': 30,
}


def population_size(algorithm, budget_mode=DEFAULT_BUDGET_MODE):
    """
    Population size for ``algorithm`` under ``budget_mode``.

    >>> population_size('ga'), population_size('ga', 'table4_pop')
    (30, 10)
    >>> population_size('so+gps', 'table4_pop')
    30

    """
    if budget_mode not in BUDGET_MODES:
        raise ValueError(f'Unknown budget mode {budget_mode!r}; choose from {BUDGET_MODES}.')
    if budget_mode == 'uniform_pop':
        return DEFAULT_POP_SIZE
    key = 'so' if algorithm.startswith('so') else algorithm
    return TABLE4_POP[key]


def default_workers():
    """Worker count from ``$SNAKEOPT_NPROCS`` (1 when unset or invalid)."""
    try:
        return max(1, int(os.getenv(NPROCS_ENV, '1')))
    except ValueError:
        return 1
