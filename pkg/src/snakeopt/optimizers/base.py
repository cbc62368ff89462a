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
Shared optimization substrate.

Every optimizer in :mod:`snakeopt.optimizers` minimizes an :class:`Objective` over a
box-shaped :class:`SearchSpace`, keeps its candidates in a :class:`Population`, and
reports a :class:`RunResult`.
Randomness always flows through a :class:`numpy.random.Generator` built with
:func:`make_rng`, seeded with :func:`derive_seed` so that any
``(trial, algorithm, function)`` triple gets its own reproducible stream.

"""

from __future__ import annotations

import hashlib
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

EPS = 1e-12
"""Guard added to fitness magnitudes before dividing."""


class NonFiniteObjectiveError(ValueError):
    """An objective returned NaN or infinity."""

    def __init__(self, position, value):
        self.position = np.array(position, dtype=float, copy=True)
        self.value = value
        super().__init__(
            f'Objective returned a non-finite value ({value!r}) at position '
            f'{np.array2string(self.position, precision=6, threshold=10)}'
        )


@dataclass(frozen=True)
class SearchSpace:
    """
    An axis-aligned box.

    >>> space = SearchSpace.box(3, -100, 100)
    >>> space.dim
    3
    >>> space.width.tolist()
    [200.0, 200.0, 200.0]
    >>> SearchSpace([0, 1], [1, 1])
    Traceback (most recent call last):
    ValueError: Lower bounds must be strictly below upper bounds (dimension 1).

    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float, ndmin=1)
        upper = np.array(self.upper, dtype=float, ndmin=1)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError('Bounds must be one-dimensional vectors of equal length.')
        if lower.size < 1:
            raise ValueError('A search space needs at least one dimension.')
        bad = np.flatnonzero(~(lower < upper))
        if bad.size:
            raise ValueError(
                f'Lower bounds must be strictly below upper bounds (dimension {bad[0]}).'
            )
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def box(cls, dim: int, low: float = -100.0, high: float = 100.0) -> SearchSpace:
        if dim < 1:
            raise ValueError(f'dim must be positive, got {dim}.')
        return cls(np.full(dim, low, dtype=float), np.full(dim, high, dtype=float))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, positions) -> bool:
        positions = np.asarray(positions, dtype=float)
        return bool(np.all(positions >= self.lower) and np.all(positions <= self.upper))

    def uniform(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        """Draw uniform points from the box (one vector if ``size`` is None)."""
        shape = (self.dim,) if size is None else (size, self.dim)
        return self.lower + rng.random(shape) * self.width


class Objective:
    """
    A counted, arity-checked wrapper around a scalar function.

    >>> obj = Objective(lambda x: float(np.sum(x**2)), 2, name='sphere')
    >>> obj([1.0, 2.0])
    5.0
    >>> obj.eval_count
    1
    >>> obj([1.0])
    Traceback (most recent call last):
    ValueError: Objective 'sphere' expects vectors of length 2, got 1.

    """

    def __init__(self, func: Callable[[np.ndarray], float], dim: int, name: str | None = None):
        self.func = func
        self.arity = int(dim)
        self.name = name or getattr(func, '__name__', 'objective')
        self.eval_count = 0

    def __call__(self, position) -> float:
        position = np.asarray(position, dtype=float)
        if position.shape != (self.arity,):
            raise ValueError(
                f'Objective {self.name!r} expects vectors of length {self.arity}, '
                f'got {position.shape[-1] if position.ndim else 0}.'
            )
        self.eval_count += 1
        value = float(self.func(position))
        if not np.isfinite(value):
            raise NonFiniteObjectiveError(position, value)
        return value

    def reset(self):
        self.eval_count = 0

    def __repr__(self):
        return f'Objective({self.name!r}, dim={self.arity}, eval_count={self.eval_count})'


@dataclass
class Individual:
    position: np.ndarray
    fitness: float = np.nan

    @property
    def evaluated(self) -> bool:
        return not np.isnan(self.fitness)


@dataclass
class Population:
    """
    Row-major candidate positions with their cached fitness.

    Unevaluated members carry ``NaN`` fitness.

    """

    positions: np.ndarray
    fitness: np.ndarray = None

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float, ndmin=2)
        if self.fitness is None:
            self.fitness = np.full(self.positions.shape[0], np.nan)
        else:
            self.fitness = np.array(self.fitness, dtype=float, ndmin=1)
        if self.fitness.shape != (self.positions.shape[0],):
            raise ValueError('One fitness value per member is required.')

    def __len__(self):
        return self.positions.shape[0]

    @property
    def size(self) -> int:
        return len(self)

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def members(self) -> list[Individual]:
        return [
            Individual(pos.copy(), float(fit))
            for pos, fit in zip(self.positions, self.fitness, strict=True)
        ]

    def best_index(self) -> int:
        return int(np.argmin(self.fitness))

    def worst_index(self) -> int:
        return int(np.argmax(self.fitness))

    def take(self, indices) -> Population:
        indices = np.asarray(indices, dtype=int)
        return Population(self.positions[indices].copy(), self.fitness[indices].copy())

    def copy(self) -> Population:
        return Population(self.positions.copy(), self.fitness.copy())


@dataclass
class RunResult:
    """Outcome of a single optimizer run."""

    best_position: np.ndarray
    best_fitness: float
    history: np.ndarray
    evaluations: int
    best_trace: np.ndarray | None = None
    counters: dict = field(default_factory=dict)
    algorithm: str = ''

    def to_dict(self) -> dict:
        return {
            'algorithm': self.algorithm,
            'best_position': [float(v) for v in self.best_position],
            'best_fitness': float(self.best_fitness),
            'history': [float(v) for v in self.history],
            'evaluations': int(self.evaluations),
            'counters': {k: int(v) for k, v in sorted(self.counters.items())},
        }


class BestTracker:
    """Best-so-far bookkeeping shared by every optimizer loop."""

    def __init__(self):
        self.position = None
        self.fitness = np.inf
        self.history = []
        self.trace = []

    def update(self, positions, fitness) -> bool:
        """Absorb a batch of evaluated candidates; return whether the best improved."""
        fitness = np.asarray(fitness, dtype=float)
        positions = np.array(positions, dtype=float, ndmin=2)
        idx = int(np.argmin(fitness))
        if fitness[idx] < self.fitness:
            self.fitness = float(fitness[idx])
            self.position = positions[idx].copy()
            return True
        return False

    def record(self):
        self.history.append(self.fitness)
        self.trace.append(self.position.copy())

    def result(self, evaluations: int, counters: dict | None = None, algorithm: str = ''):
        return RunResult(
            best_position=self.position.copy(),
            best_fitness=self.fitness,
            history=np.array(self.history, dtype=float),
            evaluations=int(evaluations),
            best_trace=np.array(self.trace, dtype=float),
            counters=dict(counters or {}),
            algorithm=algorithm,
        )


def clamp(position, space: SearchSpace) -> np.ndarray:
    """
    Saturate positions into the search box.

    Works on a single vector or on a stack of row vectors.

    >>> space = SearchSpace.box(2)
    >>> clamp([150, -150], space).tolist()
    [100.0, -100.0]
    >>> clamp([99.5, 101], space).tolist()
    [99.5, 100.0]
    >>> clamp([1, 2, 3], space)
    Traceback (most recent call last):
    ValueError: Position has 3 components but the search space has 2.

    """
    position = np.asarray(position, dtype=float)
    if position.ndim == 0 or position.shape[-1] != space.dim:
        got = position.shape[-1] if position.ndim else 0
        raise ValueError(f'Position has {got} components but the search space has {space.dim}.')
    return np.clip(position, space.lower, space.upper)


def random_init(space: SearchSpace, n: int, rng: np.random.Generator) -> Population:
    """Uniformly scatter ``n`` unevaluated individuals inside the box."""
    if n < 2:
        raise ValueError(f'A population needs at least 2 members, got {n}.')
    return Population(space.uniform(rng, n))


def evaluate(pop: Population, obj: Objective) -> Population:
    """Compute the fitness of every member in place and return the population."""
    if obj.arity != pop.dim:
        raise ValueError(
            f'Objective {obj.name!r} has arity {obj.arity} but population members '
            f'have {pop.dim} components.'
        )
    pop.fitness = np.array([obj(position) for position in pop.positions], dtype=float)
    return pop


def derive_seed(master_seed: int, trial: int, algorithm: str, function: str) -> int:
    """
    Hash a ``(trial, algorithm, function)`` triple into a 64-bit seed.

    >>> derive_seed(7, 0, 'so', 'F1') == derive_seed(7, 0, 'so', 'F1')
    True
    >>> derive_seed(7, 0, 'so', 'F1') != derive_seed(7, 0, 'pso', 'F1')
    True

    """
    key = f'{int(master_seed)}:{int(trial)}:{algorithm}:{function}'.encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), 'little')


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def as_objective(func, dim: int) -> Objective:
    """Wrap plain callables; pass :class:`Objective` instances through."""
    if isinstance(func, Objective):
        return func
    return Objective(func, dim, name=getattr(func, 'name', None))
