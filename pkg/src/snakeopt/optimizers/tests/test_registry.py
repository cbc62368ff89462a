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
import numpy as np
import pytest

from ... import conf
from .. import ALGORITHMS, is_snake, parse_algorithm, run_algorithm
from ..base import SearchSpace, make_rng


@pytest.mark.parametrize(
    ('name', 'expected'),
    [
        ('SO', 'so'),
        ('so+gps+adaptive+mutation+flight', 'so'),
        ('so+mutation+gps', 'so+gps+mutation'),
        ('so-vanilla', 'so-vanilla'),
        ('Random', 'random'),
    ],
)
def test_parse_algorithm(name, expected):
    assert parse_algorithm(name) == expected


@pytest.mark.parametrize('name', ['', 'so+', 'so-fast', 'pso+gps', 'cmaes'])
def test_parse_algorithm_invalid(name):
    with pytest.raises(ValueError, match='Unknown algorithm'):
        parse_algorithm(name)


def test_is_snake():
    assert [is_snake(name) for name in ALGORITHMS] == [True, True] + [False] * 6


@pytest.mark.parametrize(
    ('name', 'budget_mode', 'evaluations'),
    [
        ('pso', 'uniform_pop', 30 * 6),
        ('de', 'table4_pop', 50 * 6),
        ('ga', 'table4_pop', 10 + 5 * 9),
    ],
)
def test_run_algorithm_budget_modes(name, budget_mode, evaluations):
    result = run_algorithm(
        name,
        lambda x: float(x @ x),
        SearchSpace.box(2),
        make_rng(0),
        max_iter=5,
        budget_mode=budget_mode,
    )
    assert result.evaluations == evaluations
    assert result.history.size == 5


def test_run_algorithm_snake_population():
    sizes = []
    run_algorithm(
        'so+flight',
        lambda x: float(np.sum(np.abs(x))),
        SearchSpace.box(3),
        make_rng(0),
        pop_size=8,
        max_iter=3,
        callback=lambda it, state: sizes.append(state.males.size + state.females.size),
    )
    assert sizes == [8, 8, 8]


def test_population_size_invalid_mode():
    with pytest.raises(ValueError):
        conf.population_size('so', 'table9')
