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
import json

import numpy as np
import pandas as pd
import pytest

from ..surrogate import HYPER_BOX, PENALTY, gen_dataset
from ..tune import (
    SurrogateObjective,
    compare_tuners,
    stabilizing_iterations,
    tune,
    write_tune_outputs,
)


@pytest.fixture(scope='module', autouse=True)
def _quiet_logger():
    import logging

    logger = logging.getLogger('nipype.workflow')
    old_level = logger.getEffectiveLevel()
    logger.setLevel(logging.ERROR)
    yield
    logger.setLevel(old_level)


@pytest.fixture(scope='module')
def data():
    return gen_dataset(seed=1, n_sequences=10, length=12)


@pytest.fixture(scope='module')
def tuned(data):
    return tune('so', budget=30, seed=1, data=data)


def test_tune_contract(tuned):
    assert tuned.algorithm == 'so'
    assert HYPER_BOX.decode(HYPER_BOX.encode(tuned.best)) == tuned.best
    assert tuned.trace.shape == (2,)
    assert np.all(np.diff(tuned.trace) <= 0)
    assert tuned.loss == tuned.trace[-1]
    assert 0 < tuned.trainings <= tuned.evaluations == 30
    assert tuned.truncated >= 2
    assert tuned.divergent == 0
    assert set(tuned.stabilizing_iterations) == {'nodes', 'batch', 'lr'}
    assert all(1 <= it <= 2 for it in tuned.stabilizing_iterations.values())


def test_tune_is_deterministic(data, tuned):
    again = tune('so', budget=30, seed=1, data=data)
    assert again.best == tuned.best
    assert np.array_equal(again.trace, tuned.trace)


@pytest.mark.parametrize(('algorithm', 'budget'), [('so', 19), ('annealing', 50)])
def test_tune_invalid(data, algorithm, budget):
    with pytest.raises(ValueError):
        tune(algorithm, budget=budget, data=data)


def test_surrogate_objective_memoizes(data):
    objective = SurrogateObjective(data, seed=0)
    first = objective([16.2, 0.01, 50.3])
    second = objective([15.9, 0.01, 49.8])
    assert first == second
    assert len(objective.cache) == 1
    objective([17.0, 0.01, 50.0])
    assert len(objective.cache) == 2


def test_surrogate_objective_budget(data):
    objective = SurrogateObjective(data, seed=0, budget=2)
    objective([16.0, 0.01, 50.0])
    objective([16.0, 0.01, 50.0])
    assert objective([90.0, 0.002, 40.0]) == PENALTY
    assert (objective.evaluations, objective.truncated) == (2, 1)
    assert len(objective.cache) == 1
    assert objective.divergent == 0


@pytest.mark.parametrize(
    'algorithm', ['so', 'so-vanilla', 'so+gps', 'pso', 'de', 'ga', 'gwo', 'woa', 'random']
)
def test_tune_respects_budget(data, algorithm):
    result = tune(algorithm, budget=20, seed=3, data=data)
    assert result.evaluations == 20
    assert result.truncated > 0
    assert result.trainings <= 20
    assert result.loss < PENALTY
    assert np.all(np.diff(result.trace) <= 0)


def test_stabilizing_iterations_constant():
    trace = [[32.0, 0.01, 60.0]] * 5
    assert stabilizing_iterations(trace) == {'nodes': 1, 'batch': 1, 'lr': 1}


def test_write_tune_outputs(tuned, tmp_path):
    json_path = write_tune_outputs(tuned, tmp_path)
    summary = json.loads(json_path.read_text())
    assert summary['best'] == tuned.best
    assert summary['trace_csv_path'] == 'so_trace.csv'
    assert summary['evaluations'] == 30
    assert summary['truncated'] == tuned.truncated
    trace = pd.read_csv(tmp_path / 'so_trace.csv')
    assert trace.columns.tolist() == ['iter', 'best_loss']
    assert trace['iter'].tolist() == [1, 2]

    blocker = tmp_path / 'blocker'
    blocker.write_text('')
    with pytest.raises(OSError, match='Could not write tuning outputs'):
        write_tune_outputs(tuned, blocker / 'out')


def test_compare_tuners(data):
    results, table = compare_tuners(['random', 'so+gps'], budget=20, seed=1, data=data)
    assert set(results) == {'random', 'so+gps'}
    assert set(table.index) == {'random', 'so+gps'}
    assert {'rmse', 'mae', 'maxae', 'mape', 'r2', 'composite_rank'} <= set(table.columns)
    assert table['composite_rank'].is_monotonic_increasing


@pytest.mark.slow
def test_snake_tunes_better_than_random_search():
    data = gen_dataset(seed=0)
    losses = {
        algorithm: np.median(
            [tune(algorithm, budget=200, seed=seed, data=data).loss for seed in range(5)]
        )
        for algorithm in ('so', 'random')
    }
    assert losses['so'] <= losses['random']
