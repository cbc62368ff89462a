# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
#
# Copyright 2025 The snakeopt Developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""
Classical comparison optimizers.

Textbook formulations of global-best PSO, DE/rand/1/bin, a real-coded GA, the grey
wolf optimizer and the whale optimization algorithm, plus a uniform random-search
baseline.
All of them honor the contracts of :mod:`snakeopt.optimizers.base`: positions are
clamped after every move and the best-so-far history never increases.

"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from nipype import logging

from .. import conf
from .base import (
    BestTracker,
    Population,
    RunResult,
    SearchSpace,
    as_objective,
    clamp,
    evaluate,
    random_init,
)

LOGGER = logging.getLogger('nipype.workflow')

DEFAULT_PARAMS = {
    'pso': {'inertia': 0.5, 'cognitive': 1.5, 'social': 1.5},
    'de': {'F': 0.5, 'CR': 0.3},
    'ga': {'crossover': 0.5, 'mutation': 0.2, 'sigma': 0.1, 'tournament': 2},
    'gwo': {},
    'woa': {'b': 0.5},
    'random': {},
}


@dataclass(frozen=True)
class RivalConfig:
    """
    Settings for one rival run.

    >>> RivalConfig.defaults('de', budget_mode='table4_pop').pop_size
    50
    >>> RivalConfig.defaults('de').pop_size
    30
    >>> RivalConfig.defaults('pso').params['social']
    1.5

    """

    algorithm: str
    pop_size: int = conf.DEFAULT_POP_SIZE
    max_iter: int = conf.DEFAULT_MAX_ITER
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in DEFAULT_PARAMS:
            raise ValueError(
                f'Unknown rival {self.algorithm!r}; choose one of {", ".join(DEFAULT_PARAMS)}.'
            )
        if self.pop_size < 2:
            raise ValueError(f'pop_size must be at least 2, got {self.pop_size}.')
        if self.max_iter < 1:
            raise ValueError(f'max_iter must be positive, got {self.max_iter}.')
        object.__setattr__(
            self, 'params', {**DEFAULT_PARAMS[self.algorithm], **(self.params or {})}
        )

    @classmethod
    def defaults(
        cls,
        algorithm: str,
        max_iter: int = conf.DEFAULT_MAX_ITER,
        budget_mode: str = conf.DEFAULT_BUDGET_MODE,
        pop_size: int | None = None,
        **params,
    ) -> RivalConfig:
        if pop_size is None:
            pop_size = conf.population_size(algorithm, budget_mode)
        return cls(algorithm, pop_size=pop_size, max_iter=max_iter, params=params)


def _finish(tracker, obj, start, name):
    result = tracker.result(obj.eval_count - start, algorithm=name)
    LOGGER.debug(
        '%s finished: best=%.6g after %d evaluations',
        name.upper(), result.best_fitness, result.evaluations,
    )
    return result


def linear_coefficient(iteration: int, max_iter: int) -> float:
    """
    Coefficient decreasing linearly from 2 to 0.

    >>> linear_coefficient(0, 100), linear_coefficient(100, 100)
    (2.0, 0.0)

    """
    return 2.0 * (1.0 - iteration / max_iter)


def pso_velocity(velocity, x, pbest, gbest, inertia, cognitive, social, r1, r2, vmax):
    velocity = inertia * velocity + cognitive * r1 * (pbest - x) + social * r2 * (gbest - x)
    return np.clip(velocity, -vmax, vmax)


def run_pso(
    obj,
    space: SearchSpace,
    config: RivalConfig,
    rng: np.random.Generator,
    callback: Callable | None = None,
) -> RunResult:
    obj = as_objective(obj, space.dim)
    start = obj.eval_count
    params = config.params
    pop = evaluate(random_init(space, config.pop_size, rng), obj)
    velocity = np.zeros_like(pop.positions)
    vmax = 0.5 * space.width
    pbest = pop.copy()
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)

    for iteration in range(1, config.max_iter + 1):
        shape = pop.positions.shape
        velocity = pso_velocity(
            velocity,
            pop.positions,
            pbest.positions,
            tracker.position,
            params['inertia'],
            params['cognitive'],
            params['social'],
            rng.random(shape),
            rng.random(shape),
            vmax,
        )
        pop = evaluate(Population(clamp(pop.positions + velocity, space)), obj)
        improved = pop.fitness < pbest.fitness
        pbest.positions[improved] = pop.positions[improved]
        pbest.fitness[improved] = pop.fitness[improved]
        tracker.update(pop.positions, pop.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, pop)
    return _finish(tracker, obj, start, 'pso')


def de_rand1_bin(positions, i, F, CR, rng):
    """Build the DE/rand/1/bin trial vector for member ``i``."""
    n, dim = positions.shape
    others = [k for k in range(n) if k != i]
    r1, r2, r3 = rng.choice(others, size=3, replace=False)
    mutant = positions[r1] + F * (positions[r2] - positions[r3])
    cross = rng.random(dim) < CR
    cross[rng.integers(dim)] = True
    return np.where(cross, mutant, positions[i])


def run_de(
    obj,
    space: SearchSpace,
    config: RivalConfig,
    rng: np.random.Generator,
    callback: Callable | None = None,
) -> RunResult:
    if config.pop_size < 4:
        raise ValueError(f'DE/rand/1 needs at least 4 individuals, got {config.pop_size}.')
    obj = as_objective(obj, space.dim)
    start = obj.eval_count
    F, CR = config.params['F'], config.params['CR']
    pop = evaluate(random_init(space, config.pop_size, rng), obj)
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)

    for iteration in range(1, config.max_iter + 1):
        trials = np.array([de_rand1_bin(pop.positions, i, F, CR, rng) for i in range(pop.size)])
        trial = evaluate(Population(clamp(trials, space)), obj)
        better = trial.fitness <= pop.fitness
        pop.positions[better] = trial.positions[better]
        pop.fitness[better] = trial.fitness[better]
        tracker.update(pop.positions, pop.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, pop)
    return _finish(tracker, obj, start, 'de')


def arithmetic_crossover(parent1, parent2, weight):
    """
    >>> arithmetic_crossover(np.array([1.0, 2.0]), np.array([1.0, 2.0]), 0.3).tolist()
    [1.0, 2.0]

    """
    return weight * parent1 + (1.0 - weight) * parent2


def _tournament(pop, size, rng):
    contenders = rng.choice(pop.size, size=size, replace=False)
    return pop.positions[contenders[np.argmin(pop.fitness[contenders])]]


def run_ga(
    obj,
    space: SearchSpace,
    config: RivalConfig,
    rng: np.random.Generator,
    callback: Callable | None = None,
) -> RunResult:
    obj = as_objective(obj, space.dim)
    start = obj.eval_count
    params = config.params
    sigma = params['sigma'] * space.width
    tournament = min(params['tournament'], config.pop_size)
    pop = evaluate(random_init(space, config.pop_size, rng), obj)
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)

    for iteration in range(1, config.max_iter + 1):
        elite = pop.best_index()
        children = []
        for _ in range(pop.size - 1):
            parent1 = _tournament(pop, tournament, rng)
            parent2 = _tournament(pop, tournament, rng)
            if rng.random() < params['crossover']:
                child = arithmetic_crossover(parent1, parent2, rng.random())
            else:
                child = parent1.copy()
            genes = rng.random(space.dim) < params['mutation']
            child = child + genes * rng.normal(0.0, 1.0, space.dim) * sigma
            children.append(child)
        offspring = evaluate(Population(clamp(np.array(children), space)), obj)
        pop = Population(
            np.vstack((pop.positions[elite], offspring.positions)),
            np.concatenate(([pop.fitness[elite]], offspring.fitness)),
        )
        tracker.update(pop.positions, pop.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, pop)
    return _finish(tracker, obj, start, 'ga')


def gwo_update(x, leaders, a, rng):
    """Average of the moves dictated by the alpha, beta and delta wolves."""
    moves = []
    for leader in leaders:
        A = 2.0 * a * rng.random(x.shape) - a
        C = 2.0 * rng.random(x.shape)
        moves.append(leader - A * np.abs(C * leader - x))
    return np.mean(moves, axis=0)


def run_gwo(
    obj,
    space: SearchSpace,
    config: RivalConfig,
    rng: np.random.Generator,
    callback: Callable | None = None,
) -> RunResult:
    obj = as_objective(obj, space.dim)
    start = obj.eval_count
    pop = evaluate(random_init(space, config.pop_size, rng), obj)
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)
    leaders = pop.take(np.argsort(pop.fitness, kind='stable')[:3])

    for iteration in range(1, config.max_iter + 1):
        a = linear_coefficient(iteration - 1, config.max_iter)
        moved = np.array([gwo_update(x, leaders.positions, a, rng) for x in pop.positions])
        pop = evaluate(Population(clamp(moved, space)), obj)
        pool = Population(
            np.vstack((leaders.positions, pop.positions)),
            np.concatenate((leaders.fitness, pop.fitness)),
        )
        leaders = pool.take(np.argsort(pool.fitness, kind='stable')[:3])
        tracker.update(pop.positions, pop.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, pop)
    return _finish(tracker, obj, start, 'gwo')


def woa_spiral(x, best, b, spiral):
    """
    Logarithmic spiral around ``best``.

    >>> woa_spiral(np.ones(2), np.ones(2), 0.5, 0.3).tolist()
    [1.0, 1.0]

    """
    distance = np.abs(best - x)
    return distance * np.exp(b * spiral) * np.cos(2.0 * np.pi * spiral) + best


def run_woa(
    obj,
    space: SearchSpace,
    config: RivalConfig,
    rng: np.random.Generator,
    callback: Callable | None = None,
) -> RunResult:
    obj = as_objective(obj, space.dim)
    start = obj.eval_count
    b = config.params['b']
    pop = evaluate(random_init(space, config.pop_size, rng), obj)
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)

    for iteration in range(1, config.max_iter + 1):
        a = linear_coefficient(iteration - 1, config.max_iter)
        best = tracker.position
        moved = np.empty_like(pop.positions)
        for i, x in enumerate(pop.positions):
            A = 2.0 * a * rng.random() - a
            C = 2.0 * rng.random()
            if rng.random() < 0.5:
                target = best if abs(A) < 1 else pop.positions[rng.integers(pop.size)]
                moved[i] = target - A * np.abs(C * target - x)
            else:
                moved[i] = woa_spiral(x, best, b, rng.uniform(-1.0, 1.0))
        pop = evaluate(Population(clamp(moved, space)), obj)
        tracker.update(pop.positions, pop.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, pop)
    return _finish(tracker, obj, start, 'woa')


def run_random(
    obj,
    space: SearchSpace,
    config: RivalConfig,
    rng: np.random.Generator,
    callback: Callable | None = None,
) -> RunResult:
    obj = as_objective(obj, space.dim)
    start = obj.eval_count
    pop = evaluate(random_init(space, config.pop_size, rng), obj)
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)
    for iteration in range(1, config.max_iter + 1):
        pop = evaluate(random_init(space, config.pop_size, rng), obj)
        tracker.update(pop.positions, pop.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, pop)
    return _finish(tracker, obj, start, 'random')


RUNNERS = {
    'pso': run_pso,
    'de': run_de,
    'ga': run_ga,
    'gwo': run_gwo,
    'woa': run_woa,
    'random': run_random,
}
