# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Optimizers.

.. autofunction:: run_algorithm

Algorithm identifiers:

``so``
    snake optimizer with every improvement strategy.
``so-vanilla``
    the plain snake optimizer.
``so+<strategy>[+<strategy>...]``
    an explicit subset of ``gps``, ``adaptive``, ``mutation`` and ``flight``.
``pso``, ``de``, ``ga``, ``gwo``, ``woa``
    classical rivals.
``random``
    uniform random search.

"""

from .. import conf
from .base import RunResult, SearchSpace
from .rivals import RUNNERS, RivalConfig
from .snake import SnakeConfig, StrategyToggles, run_snake

ALGORITHMS = ('so', 'so-vanilla', *RUNNERS)


def is_snake(name: str) -> bool:
    return name == 'so' or name.startswith(('so-', 'so+'))


def parse_algorithm(name: str) -> str:
    """
    Normalize and validate an algorithm identifier.

    >>> parse_algorithm(' PSO ')
    'pso'
    >>> parse_algorithm('so+flight+gps')
    'so+gps+flight'
    >>> parse_algorithm('sa')
    Traceback (most recent call last):
    ValueError: Unknown algorithm 'sa'; valid names are so, so-vanilla, pso, ...

    """
    key = name.strip().lower()
    if is_snake(key):
        try:
            return StrategyToggles.from_name(key).label()
        except ValueError:
            pass
    elif key in RUNNERS:
        return key
    raise ValueError(
        f'Unknown algorithm {name!r}; valid names are {", ".join(ALGORITHMS)}, '
        'or so+<gps|adaptive|mutation|flight>.'
    )


def run_algorithm(
    name: str,
    objective,
    space: SearchSpace,
    rng,
    *,
    pop_size: int | None = None,
    max_iter: int = conf.DEFAULT_MAX_ITER,
    budget_mode: str = conf.DEFAULT_BUDGET_MODE,
    callback=None,
) -> RunResult:
    """Dispatch a run to the snake optimizer or one of the rivals."""
    name = parse_algorithm(name)
    if pop_size is None:
        pop_size = conf.population_size(name, budget_mode)
    if is_snake(name):
        config = SnakeConfig.from_name(name, pop_size=pop_size, max_iter=max_iter)
        return run_snake(objective, space, config, rng, callback=callback)
    config = RivalConfig(name, pop_size=pop_size, max_iter=max_iter)
    return RUNNERS[name](objective, space, config, rng, callback=callback)


__all__ = [
    'ALGORITHMS',
    'is_snake',
    'parse_algorithm',
    'run_algorithm',
]
