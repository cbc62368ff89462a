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
Snake Optimizer with four optional improvement strategies.

The population is split into males and females.
Each iteration computes a temperature and a food quantity and runs exactly one
behavior on both halves:

* **exploration** when food is scarce (``Q < food_threshold``),
* **food** seeking when food is available and it is hot (``Temp > temp_threshold``),
* **fight** or **mate** when it is cold, picked by a draw against ``fight_prob``.

Candidates are accepted greedily per individual.
The improvements, each switched by :class:`StrategyToggles`, are:

``gps_init``
    start from a good point set instead of uniform draws.
``adaptive_params``
    oscillate ``c1``, ``c3`` and both thresholds with period ``max_iter / 2``.
``dual_mutation``
    Cauchy (early) or Gaussian (late) mutation of the best individual, plus
    head-chaos, body-fusion or tail-splice mutation of the worst individuals.
``flight``
    add a decaying Lévy flight (early) or a uniform random walk (late) to the
    exploration moves.

"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np
from nipype import logging
from scipy.special import gamma as gamma_fn

from .base import (
    EPS,
    BestTracker,
    Individual,
    Population,
    RunResult,
    SearchSpace,
    as_objective,
    clamp,
    evaluate,
    random_init,
)
from .gps import gps_initialize

LOGGER = logging.getLogger('nipype.workflow')

COUNTER_KEYS = (
    'gps',
    'adaptive',
    'mutation',
    'aux_mutation',
    'flight',
    'exploration',
    'food',
    'fight',
    'mate',
    'hatch',
)
STRATEGY_COUNTERS = ('gps', 'adaptive', 'mutation', 'aux_mutation', 'flight')

_TOGGLE_TOKENS = {
    'gps': 'gps_init',
    'adaptive': 'adaptive_params',
    'mutation': 'dual_mutation',
    'flight': 'flight',
}


@dataclass(frozen=True)
class StrategyToggles:
    """
    On/off switches for the improvement strategies.

    >>> StrategyToggles.from_name('so+gps+flight')
    StrategyToggles(gps_init=True, adaptive_params=False, dual_mutation=False, flight=True)
    >>> StrategyToggles.from_name('so').label()
    'so'
    >>> StrategyToggles.from_name('so-vanilla').label()
    'so-vanilla'
    >>> StrategyToggles(adaptive_params=True, gps_init=True).label()
    'so+gps+adaptive'

    """

    gps_init: bool = False
    adaptive_params: bool = False
    dual_mutation: bool = False
    flight: bool = False

    @classmethod
    def full(cls) -> StrategyToggles:
        return cls(True, True, True, True)

    @classmethod
    def vanilla(cls) -> StrategyToggles:
        return cls()

    @classmethod
    def from_name(cls, name: str) -> StrategyToggles:
        name = name.strip().lower()
        if name == 'so':
            return cls.full()
        if name == 'so-vanilla':
            return cls.vanilla()
        head, *tokens = name.split('+')
        if head != 'so' or not tokens:
            raise ValueError(f'Not a snake optimizer variant: {name!r}.')
        flags = {}
        for token in tokens:
            if token not in _TOGGLE_TOKENS:
                raise ValueError(
                    f'Unknown strategy {token!r} in {name!r}; '
                    f'valid strategies are {", ".join(_TOGGLE_TOKENS)}.'
                )
            flags[_TOGGLE_TOKENS[token]] = True
        return cls(**flags)

    def enabled(self) -> tuple[str, ...]:
        return tuple(token for token, attr in _TOGGLE_TOKENS.items() if getattr(self, attr))

    def label(self) -> str:
        tokens = self.enabled()
        if len(tokens) == len(_TOGGLE_TOKENS):
            return 'so'
        if not tokens:
            return 'so-vanilla'
        return '+'.join(('so', *tokens))


@dataclass(frozen=True)
class MutationParams:
    cauchy_gamma: float = 0.05
    gauss_sigma: float = 0.1
    chaos_alpha: float = 0.1
    aux_prob: float = 0.2
    aux_fraction: float = 0.1

    def __post_init__(self):
        if min(self.cauchy_gamma, self.gauss_sigma, self.chaos_alpha) <= 0:
            raise ValueError('Mutation scales must be positive.')
        for name in ('aux_prob', 'aux_fraction'):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f'{name} must lie in (0, 1).')


@dataclass(frozen=True)
class FlightParams:
    beta: float = 1.5
    walk_sigma: float = 0.1
    switch_point: float = 0.5

    def __post_init__(self):
        if not 1 < self.beta <= 2:
            raise ValueError(f'beta must lie in (1, 2], got {self.beta}.')
        if self.walk_sigma <= 0:
            raise ValueError(f'walk_sigma must be positive, got {self.walk_sigma}.')
        if not 0 < self.switch_point < 1:
            raise ValueError(f'switch_point must lie in (0, 1), got {self.switch_point}.')


@dataclass(frozen=True)
class SnakeConfig:
    pop_size: int = 30
    max_iter: int = 500
    c1_base: float = 0.5
    c2: float = 0.05
    c3_base: float = 2.0
    food_threshold_base: float = 0.25
    temp_threshold_base: float = 0.6
    fight_prob: float = 0.6
    hatch_prob: float = 0.5
    toggles: StrategyToggles = field(default_factory=StrategyToggles)
    mutation: MutationParams = field(default_factory=MutationParams)
    flight: FlightParams = field(default_factory=FlightParams)

    def __post_init__(self):
        if self.pop_size < 4:
            raise ValueError(f'pop_size must be at least 4 (two per sex), got {self.pop_size}.')
        if self.max_iter < 2:
            raise ValueError(f'max_iter must be at least 2, got {self.max_iter}.')
        if not 0 < self.fight_prob < 1:
            raise ValueError(f'fight_prob must lie in (0, 1), got {self.fight_prob}.')

    @classmethod
    def from_name(cls, name: str, **kwargs) -> SnakeConfig:
        return cls(toggles=StrategyToggles.from_name(name), **kwargs)


@dataclass
class SnakeState:
    males: Population
    females: Population
    iteration: int = 0
    temp: float = 1.0
    q: float = 0.0
    food: Individual | None = None
    phase: str = ''

    @property
    def best_male(self) -> Individual:
        idx = self.males.best_index()
        return Individual(self.males.positions[idx].copy(), float(self.males.fitness[idx]))

    @property
    def best_female(self) -> Individual:
        idx = self.females.best_index()
        return Individual(self.females.positions[idx].copy(), float(self.females.fitness[idx]))

    def refresh_food(self):
        candidates = (self.best_male, self.best_female)
        self.food = min(candidates, key=lambda ind: ind.fitness)

    @property
    def subpopulations(self) -> tuple[Population, Population]:
        return self.males, self.females


def split_population(pop: Population) -> tuple[Population, Population]:
    """
    First ``floor(N / 2)`` members are males, the remainder females.

    >>> males, females = split_population(Population(np.zeros((7, 2))))
    >>> males.size, females.size
    (3, 4)

    """
    if pop.size < 4:
        raise ValueError(f'Splitting needs at least 4 individuals, got {pop.size}.')
    n_male = pop.size // 2
    return pop.take(range(n_male)), pop.take(range(n_male, pop.size))


def temperature(iteration: int, max_iter: int) -> float:
    """
    >>> temperature(0, 10), round(temperature(10, 10), 5)
    (1.0, 0.36788)

    """
    if max_iter <= 0:
        raise ValueError('max_iter must be positive.')
    return math.exp(-iteration / max_iter)


def food_quantity(iteration: int, max_iter: int, c1: float) -> float:
    """
    >>> food_quantity(10, 10, 0.5), round(food_quantity(0, 10, 0.5), 5)
    (0.5, 0.18394)

    """
    if max_iter <= 0:
        raise ValueError('max_iter must be positive.')
    return c1 * math.exp((iteration - max_iter) / max_iter)


def adaptive_params(iteration: int, max_iter: int) -> tuple[float, float, float, float]:
    """
    Oscillating ``(c1, c3, food_threshold, temp_threshold)`` with period ``max_iter / 2``.

    >>> adaptive_params(0, 100)
    (1.0, 2.0, 0.5, 0.7)

    """
    period = max_iter / 2
    angle = 2.0 * math.pi * iteration / period
    c1 = 0.5 * (1.0 + math.cos(angle))
    c3 = 2.0 * (1.0 + math.sin(angle))
    food_threshold = 0.5 + 0.25 * math.sin(angle)
    temp_threshold = 0.5 + 0.2 * math.cos(angle)
    return c1, c3, food_threshold, temp_threshold


def ability(f_num, f_den):
    """
    ``exp(-|f_num| / (|f_den| + eps))``, the shared form of every fitness ratio.

    >>> round(float(ability(3.0, 3.0)), 5), float(ability(0.0, 2.0))
    (0.36788, 1.0)

    """
    return np.exp(-np.abs(f_num) / (np.abs(f_den) + EPS))


def exploration_move(x_rand, c2, power, rand, sign, lower, upper):
    return x_rand + sign * c2 * power * ((upper - lower) * rand + lower)


def food_move(x, food, c3, temp, rand, sign):
    """
    >>> food_move(np.array([10.0, 10.0]), np.zeros(2), 2.0, 0.5, 0.5, 1).tolist()
    [-5.0, -5.0]

    """
    return food + sign * c3 * temp * rand * (food - x)


def fight_move(x, rival_best, c3, power, rand, sign):
    return x + sign * c3 * power * rand * (rival_best - x)


def mate_move(x, partner, c3, power, rand, sign, q):
    return x + sign * c3 * power * rand * (q * partner - x)


def _signs(rng, n):
    return np.where(rng.random(n) < 0.5, 1.0, -1.0)[:, np.newaxis]


def _accept(pop: Population, candidates, space, obj) -> int:
    """Greedy replacement; returns the number of evaluations spent."""
    trial = evaluate(Population(clamp(candidates, space)), obj)
    better = trial.fitness < pop.fitness
    pop.positions[better] = trial.positions[better]
    pop.fitness[better] = trial.fitness[better]
    return trial.size


def exploration_step(
    state: SnakeState,
    space: SearchSpace,
    obj,
    rng: np.random.Generator,
    *,
    c2: float = 0.05,
    flight: Callable[[], np.ndarray] | None = None,
) -> SnakeState:
    """
    Move each snake around a random member of its own sex.

    ``flight`` returns one displacement vector per call; it is added to every move.

    """
    for pop in state.subpopulations:
        n = pop.size
        partners = rng.integers(0, n, size=n)
        power = ability(pop.fitness[partners], pop.fitness)[:, np.newaxis]
        candidates = exploration_move(
            pop.positions[partners],
            c2,
            power,
            rng.random((n, space.dim)),
            _signs(rng, n),
            space.lower,
            space.upper,
        )
        if flight is not None:
            candidates = candidates + np.array([flight() for _ in range(n)])
        _accept(pop, candidates, space, obj)
    state.phase = 'exploration'
    return state


def food_step(
    state: SnakeState,
    space: SearchSpace,
    obj,
    rng: np.random.Generator,
    *,
    c3: float = 2.0,
) -> SnakeState:
    """Every snake jumps relative to the food (the best individual so far)."""
    food = state.food.position
    for pop in state.subpopulations:
        n = pop.size
        candidates = food_move(
            pop.positions, food, c3, state.temp, rng.random((n, space.dim)), _signs(rng, n)
        )
        _accept(pop, candidates, space, obj)
    state.phase = 'food'
    return state


def fight_step(
    state: SnakeState,
    space: SearchSpace,
    obj,
    rng: np.random.Generator,
    *,
    c3: float = 2.0,
) -> SnakeState:
    """Males move toward the best female and females toward the best male."""
    best_male, best_female = state.best_male, state.best_female
    for pop, rival in ((state.males, best_female), (state.females, best_male)):
        n = pop.size
        power = ability(rival.fitness, pop.fitness)[:, np.newaxis]
        candidates = fight_move(
            pop.positions,
            rival.position,
            c3,
            power,
            rng.random((n, space.dim)),
            _signs(rng, n),
        )
        _accept(pop, candidates, space, obj)
    state.phase = 'fight'
    return state


def mate_step(
    state: SnakeState,
    space: SearchSpace,
    obj,
    rng: np.random.Generator,
    *,
    c3: float = 2.0,
    hatch_prob: float = 0.5,
) -> SnakeState:
    """
    Pair the i-th male with the i-th female; possibly hatch eggs.

    Only ``min(N_male, N_female)`` pairs move.
    Hatching replaces the worst male and the worst female with uniform draws.

    """
    males, females = state.males, state.females
    pairs = min(males.size, females.size)
    xm, xf = males.positions[:pairs].copy(), females.positions[:pairs].copy()
    fm, ff = males.fitness[:pairs].copy(), females.fitness[:pairs].copy()

    male_moves = mate_move(
        xm,
        xf,
        c3,
        ability(ff, fm)[:, np.newaxis],
        rng.random((pairs, space.dim)),
        _signs(rng, pairs),
        state.q,
    )
    female_moves = mate_move(
        xf,
        xm,
        c3,
        ability(fm, ff)[:, np.newaxis],
        rng.random((pairs, space.dim)),
        _signs(rng, pairs),
        state.q,
    )
    for pop, moves in ((males, male_moves), (females, female_moves)):
        head = pop.take(range(pairs))
        _accept(head, moves, space, obj)
        pop.positions[:pairs] = head.positions
        pop.fitness[:pairs] = head.fitness

    state.phase = 'mate'
    if rng.random() < hatch_prob:
        for pop in (males, females):
            worst = pop.worst_index()
            egg = space.uniform(rng)
            pop.positions[worst] = egg
            pop.fitness[worst] = obj(egg)
        state.phase = 'mate+hatch'
    return state


def cauchy_mutate(x, gamma: float, rng: np.random.Generator, space: SearchSpace | None = None):
    x = np.asarray(x, dtype=float)
    mutant = x + gamma * rng.standard_cauchy(x.shape)
    return mutant if space is None else clamp(mutant, space)


def gaussian_mutate(x, sigma: float, rng: np.random.Generator, space: SearchSpace | None = None):
    x = np.asarray(x, dtype=float)
    mutant = x + rng.normal(0.0, sigma, x.shape)
    return mutant if space is None else clamp(mutant, space)


def head_length(dim: int) -> int:
    return math.ceil(dim / 3)


def chaos_head_mutate(x, alpha: float, space: SearchSpace | None = None):
    """
    Logistic-map perturbation of the head (first third) of a position.

    With a ``space``, head components are normalized to the unit box first.

    >>> chaos_head_mutate([0.5, 0.0, 1.0], 0.1).tolist()
    [0.525, 0.0, 1.0]

    """
    mutant = np.array(x, dtype=float)
    head = slice(0, head_length(mutant.size))
    if space is None:
        values = mutant[head]
        mutant[head] = values + alpha * values * (1.0 - values)
        return mutant
    lower, width = space.lower[head], space.width[head]
    unit = (mutant[head] - lower) / width
    unit = unit + alpha * unit * (1.0 - unit)
    mutant[head] = lower + unit * width
    return clamp(mutant, space)


def body_fusion_mutate(x1, x2):
    """
    >>> body_fusion_mutate([0, 0], [2, 4]).tolist()
    [1.0, 2.0]

    """
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise ValueError(f'Cannot fuse positions of shapes {x1.shape} and {x2.shape}.')
    return 0.5 * (x1 + x2)


def tail_splice_mutate(x1, x2, m: int):
    """
    Tail of ``x1`` from ``m`` on, followed by the first ``m`` components of ``x2``.

    >>> tail_splice_mutate([1, 2, 3, 4], [5, 6, 7, 8], 2).tolist()
    [3.0, 4.0, 5.0, 6.0]

    """
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise ValueError(f'Cannot splice positions of shapes {x1.shape} and {x2.shape}.')
    if not 0 <= m <= x1.size:
        raise ValueError(f'Splice point {m} outside [0, {x1.size}].')
    return np.concatenate((x1[m:], x2[:m]))


def mantegna_sigma(beta: float) -> float:
    num = gamma_fn(1 + beta) * math.sin(math.pi * beta / 2)
    den = gamma_fn((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2)
    return (num / den) ** (1 / beta)


def levy_step(
    dim: int, iteration: int, max_iter: int, params: FlightParams, rng: np.random.Generator
):
    """
    Heavy-tailed step ``u / |v|**beta`` shrunk by ``(1 - iteration / max_iter)**beta``.

    ``u`` has Mantegna's scale; the exponent on ``|v|`` is ``beta`` rather than
    Mantegna's ``1 / beta``.

    """
    if not 0 <= iteration <= max_iter:
        raise ValueError(f'iteration {iteration} outside [0, {max_iter}].')
    u = rng.normal(0.0, mantegna_sigma(params.beta), dim)
    v = rng.normal(0.0, 1.0, dim)
    decay = (1.0 - iteration / max_iter) ** params.beta
    if decay == 0:
        return np.zeros(dim)
    return decay * u / np.abs(v) ** params.beta


def random_walk_step(dim: int, params: FlightParams, rng: np.random.Generator, width=2.0):
    """Uniform step in ``[-s, s]`` with ``s = walk_sigma * width / 2``."""
    sigma_eff = params.walk_sigma * np.asarray(width, dtype=float) / 2.0
    return rng.uniform(-1.0, 1.0, dim) * sigma_eff


def _main_mutation(state, space, obj, rng, config, iteration, counters):
    early = iteration < config.flight.switch_point * config.max_iter
    pop = min(state.subpopulations, key=lambda p: p.fitness[p.best_index()])
    idx = pop.best_index()
    if early:
        mutant = cauchy_mutate(pop.positions[idx], config.mutation.cauchy_gamma, rng, space)
    else:
        mutant = gaussian_mutate(pop.positions[idx], config.mutation.gauss_sigma, rng, space)
    counters['mutation'] += 1
    value = obj(mutant)
    if value < pop.fitness[idx]:
        pop.positions[idx] = mutant
        pop.fitness[idx] = value


def _aux_mutation(state, space, obj, rng, config, counters):
    params = config.mutation
    for pop in state.subpopulations:
        n_targets = max(1, math.ceil(params.aux_fraction * pop.size))
        targets = np.argsort(pop.fitness, kind='stable')[::-1][:n_targets]
        for idx in targets:
            if rng.random() >= params.aux_prob:
                continue
            partner = rng.choice([k for k in range(pop.size) if k != idx])
            operator = rng.integers(3)
            x1, x2 = pop.positions[idx], pop.positions[partner]
            if operator == 0:
                mutant = chaos_head_mutate(x1, params.chaos_alpha, space)
            elif operator == 1:
                mutant = body_fusion_mutate(x1, x2)
            else:
                split = int(rng.integers(1, space.dim)) if space.dim > 1 else 0
                mutant = tail_splice_mutate(x1, x2, split)
            mutant = clamp(mutant, space)
            counters['aux_mutation'] += 1
            value = obj(mutant)
            if value < pop.fitness[idx]:
                pop.positions[idx] = mutant
                pop.fitness[idx] = value


def _flight_source(space, config, iteration, rng, counters):
    params = config.flight

    if iteration < params.switch_point * config.max_iter:

        def _draw():
            counters['flight'] += 1
            step = levy_step(space.dim, iteration, config.max_iter, params, rng)
            return params.walk_sigma * space.width * step

    else:

        def _draw():
            counters['flight'] += 1
            return random_walk_step(space.dim, params, rng, width=space.width)

    return _draw


def run_snake(
    obj,
    space: SearchSpace,
    config: SnakeConfig,
    rng: np.random.Generator,
    callback: Callable[[int, SnakeState], None] | None = None,
) -> RunResult:
    """
    Minimize ``obj`` over ``space``.

    ``callback(iteration, state)`` runs after each iteration's bookkeeping.

    >>> from snakeopt.optimizers.base import make_rng
    >>> res = run_snake(lambda x: float(x @ x), SearchSpace.box(2),
    ...                 SnakeConfig(pop_size=10, max_iter=20), make_rng(0))
    >>> res.history.size, bool(np.all(np.diff(res.history) <= 0))
    (20, True)

    """
    obj = as_objective(obj, space.dim)
    start_count = obj.eval_count
    toggles = config.toggles
    counters = Counter(dict.fromkeys(COUNTER_KEYS, 0))
    LOGGER.debug(
        'Snake optimizer (%s): pop=%d, iterations=%d, dim=%d',
        toggles.label(), config.pop_size, config.max_iter, space.dim,
    )

    if toggles.gps_init:
        counters['gps'] += 1
        pop = gps_initialize(space, config.pop_size)
    else:
        pop = random_init(space, config.pop_size, rng)
    evaluate(pop, obj)
    males, females = split_population(pop)
    state = SnakeState(males=males, females=females)
    tracker = BestTracker()
    tracker.update(pop.positions, pop.fitness)
    state.refresh_food()

    for iteration in range(1, config.max_iter + 1):
        state.iteration = iteration
        if toggles.adaptive_params:
            counters['adaptive'] += 1
            c1, c3, food_threshold, temp_threshold = adaptive_params(iteration, config.max_iter)
        else:
            c1, c3 = config.c1_base, config.c3_base
            food_threshold = config.food_threshold_base
            temp_threshold = config.temp_threshold_base
        state.temp = temperature(iteration, config.max_iter)
        state.q = food_quantity(iteration, config.max_iter, c1)

        if state.q < food_threshold:
            flight = (
                _flight_source(space, config, iteration, rng, counters)
                if toggles.flight
                else None
            )
            exploration_step(state, space, obj, rng, c2=config.c2, flight=flight)
        elif state.temp > temp_threshold:
            food_step(state, space, obj, rng, c3=c3)
        elif rng.random() < config.fight_prob:
            fight_step(state, space, obj, rng, c3=c3)
        else:
            mate_step(state, space, obj, rng, c3=c3, hatch_prob=config.hatch_prob)
        phase, _, hatched = state.phase.partition('+')
        counters[phase] += 1
        counters['hatch'] += bool(hatched)

        if toggles.dual_mutation:
            _main_mutation(state, space, obj, rng, config, iteration, counters)
            _aux_mutation(state, space, obj, rng, config, counters)

        for sub in state.subpopulations:
            tracker.update(sub.positions, sub.fitness)
        state.refresh_food()
        if tracker.fitness < state.food.fitness:
            state.food = Individual(tracker.position.copy(), tracker.fitness)
        tracker.record()
        if callback is not None:
            callback(iteration, state)

    result = tracker.result(
        obj.eval_count - start_count, counters=counters, algorithm=toggles.label()
    )
    LOGGER.debug(
        'Snake optimizer (%s) finished: best=%.6g after %d evaluations',
        toggles.label(), result.best_fitness, result.evaluations,
    )
    return result


def with_toggles(config: SnakeConfig, toggles: StrategyToggles) -> SnakeConfig:
    return replace(config, toggles=toggles)
