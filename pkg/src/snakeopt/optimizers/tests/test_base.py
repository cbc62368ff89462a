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
"""Tests for the shared optimization substrate."""

import numpy as np
import pytest

from ..base import (
    BestTracker,
    NonFiniteObjectiveError,
    Objective,
    Population,
    SearchSpace,
    as_objective,
    clamp,
    derive_seed,
    evaluate,
    make_rng,
    random_init,
)


def _sphere(x):
    return float(np.sum(x**2))


def test_search_space_uniform():
    space = SearchSpace([-1.0, 0.0], [1.0, 10.0])
    points = space.uniform(make_rng(0), 500)
    assert points.shape == (500, 2)
    assert space.contains(points)
    assert space.uniform(make_rng(0)).shape == (2,)


@pytest.mark.parametrize(
    ('lower', 'upper'),
    [
        ([0.0], [0.0]),
        ([0.0, 1.0], [1.0]),
        ([], []),
    ],
)
def test_search_space_invalid(lower, upper):
    with pytest.raises(ValueError):
        SearchSpace(lower, upper)


def test_search_space_is_read_only():
    space = SearchSpace.box(2)
    with pytest.raises(ValueError):
        space.lower[0] = 3.0


def test_objective_counts_and_rejects_nonfinite():
    obj = Objective(lambda x: np.inf if x[0] > 0 else 0.0, 1, name='step')
    assert obj([-1.0]) == 0.0
    with pytest.raises(NonFiniteObjectiveError) as excinfo:
        obj([1.0])
    assert excinfo.value.position.tolist() == [1.0]
    assert obj.eval_count == 2
    obj.reset()
    assert obj.eval_count == 0


def test_as_objective_passthrough():
    obj = Objective(_sphere, 3)
    assert as_objective(obj, 3) is obj
    wrapped = as_objective(_sphere, 3)
    assert wrapped.name == '_sphere'
    assert wrapped([1.0, 1.0, 1.0]) == 3.0


def test_population_members():
    pop = Population(np.eye(3), [3.0, 1.0, 2.0])
    assert (pop.size, pop.dim) == (3, 3)
    assert pop.best_index() == 1
    assert pop.worst_index() == 0
    sub = pop.take([2, 0])
    assert sub.fitness.tolist() == [2.0, 3.0]
    sub.positions[0, 0] = 7.0
    assert pop.positions[2, 0] == 0.0
    assert not Population(np.eye(2)).members[0].evaluated

    with pytest.raises(ValueError):
        Population(np.eye(3), [1.0, 2.0])


def test_random_init_and_evaluate():
    space = SearchSpace.box(4)
    obj = Objective(_sphere, 4)
    pop = evaluate(random_init(space, 6, make_rng(1)), obj)
    assert space.contains(pop.positions)
    assert obj.eval_count == 6
    assert np.allclose(pop.fitness, np.sum(pop.positions**2, axis=1))

    with pytest.raises(ValueError, match='at least 2'):
        random_init(space, 1, make_rng(1))
    with pytest.raises(ValueError, match='arity'):
        evaluate(pop, Objective(_sphere, 3))


def test_clamp_stack():
    space = SearchSpace([0.0, 0.0], [1.0, 2.0])
    clamped = clamp([[-1.0, 3.0], [0.5, 1.0]], space)
    assert clamped.tolist() == [[0.0, 2.0], [0.5, 1.0]]


def test_best_tracker_history_is_monotone():
    tracker = BestTracker()
    for values in ([5.0, 3.0], [4.0, 6.0], [1.0, 2.0]):
        tracker.update(np.zeros((2, 1)) + values[0], values)
        tracker.record()
    result = tracker.result(6, algorithm='demo')
    assert result.history.tolist() == [3.0, 3.0, 1.0]
    assert result.best_trace.shape == (3, 1)
    assert result.to_dict()['evaluations'] == 6


def test_derive_seed():
    seeds = {
        derive_seed(0, trial, algorithm, fn)
        for trial in range(3)
        for algorithm in ('so', 'pso')
        for fn in ('F1', 'F2')
    }
    assert len(seeds) == 12
    assert all(0 <= seed < 2**64 for seed in seeds)
    assert derive_seed(1, 0, 'so', 'F1') != derive_seed(0, 0, 'so', 'F1')
    assert make_rng(derive_seed(3, 1, 'so', 'F1')).random() == (
        make_rng(derive_seed(3, 1, 'so', 'F1')).random()
    )
