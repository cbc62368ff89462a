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
"""Hyperparameter search on the trajectory surrogate with any registered optimizer."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from nipype import logging

from ..optimizers import parse_algorithm, run_algorithm
from ..optimizers.base import Objective, derive_seed, make_rng
from ..utils.stats import UndefinedMetricError, rank_regression, regression_metrics
from .surrogate import HYPER_BOX, PENALTY, gen_dataset, predict, train_eval

LOGGER = logging.getLogger('nipype.workflow')

TUNER_POP_SIZE = 10
MIN_BUDGET = 20


@dataclass
class TuneResult:
    algorithm: str
    best: dict
    loss: float
    trace: np.ndarray
    stabilizing_iterations: dict
    evaluations: int
    trainings: int
    divergent: int
    truncated: int
    seed: int

    def to_dict(self, trace_csv_path=None) -> dict:
        return {
            'algorithm': self.algorithm,
            'best': {key: self.best[key] for key in ('nodes', 'batch', 'lr')},
            'loss': float(self.loss),
            'stabilizing_iterations': dict(self.stabilizing_iterations),
            'trace_csv_path': None if trace_csv_path is None else str(trace_csv_path),
            'evaluations': int(self.evaluations),
            'trainings': int(self.trainings),
            'divergent': int(self.divergent),
            'truncated': int(self.truncated),
            'seed': int(self.seed),
        }


class SurrogateObjective:
    """
    :func:`train_eval` over encoded vectors, memoized by decoded hyperparameters.

    Distinct continuous points that round onto the same network are trained once.
    With a ``budget``, calls beyond it return :data:`PENALTY` without training and are
    counted as ``truncated``, so the best loss found is frozen once the budget is spent.

    """

    def __init__(self, data, seed: int, budget: int | None = None):
        self.data = data
        self.seed = seed
        self.budget = budget
        self.cache = {}
        self.divergent = 0
        self.calls = 0
        self.truncated = 0

    @property
    def evaluations(self) -> int:
        """Calls charged against the budget."""
        return self.calls - self.truncated

    def __call__(self, vector) -> float:
        self.calls += 1
        if self.budget is not None and self.calls > self.budget:
            self.truncated += 1
            return PENALTY
        hp = HYPER_BOX.decode(vector)
        key = (hp['batch'], hp['lr'], hp['nodes'])
        if key not in self.cache:
            loss = train_eval(hp, self.data, self.seed)
            self.divergent += int(loss >= PENALTY)
            self.cache[key] = loss
        return self.cache[key]


def stabilizing_iterations(best_trace) -> dict:
    """
    Last (1-based) iteration at which each decoded hyperparameter changed.

    >>> trace = [[32, 0.01, 60], [32, 0.005, 60], [64, 0.005, 60], [64, 0.005, 60]]
    >>> stabilizing_iterations(trace)
    {'nodes': 1, 'batch': 3, 'lr': 2}

    """
    decoded = [HYPER_BOX.decode(position) for position in best_trace]
    result = {}
    for key in ('nodes', 'batch', 'lr'):
        last = 1
        for iteration in range(1, len(decoded)):
            if decoded[iteration][key] != decoded[iteration - 1][key]:
                last = iteration + 1
        result[key] = last
    return result


def tune(algorithm: str, budget: int = 300, seed: int = 0, data=None) -> TuneResult:
    """
    Search the hyperparameter box with ``algorithm`` for at most ``budget`` evaluations.

    Populations hold ten candidates, so the optimizer runs ``budget // 10 - 1``
    iterations after initialization (at least two). Optimizers that spend more than
    one evaluation per candidate and iteration are cut off once ``budget`` is used.

    """
    if budget < MIN_BUDGET:
        raise ValueError(f'budget must be at least {MIN_BUDGET} evaluations, got {budget}.')
    algorithm = parse_algorithm(algorithm)
    if data is None:
        data = gen_dataset(seed)
    max_iter = max(2, budget // TUNER_POP_SIZE - 1)
    surrogate = SurrogateObjective(data, seed, budget=budget)
    objective = Objective(surrogate, 3, name='surrogate')
    rng = make_rng(derive_seed(seed, 0, algorithm, 'tune-demo'))
    LOGGER.info(
        'Tuning surrogate with %s (population %d, %d iterations).',
        algorithm,
        TUNER_POP_SIZE,
        max_iter,
    )
    result = run_algorithm(
        algorithm,
        objective,
        HYPER_BOX.space,
        rng,
        pop_size=TUNER_POP_SIZE,
        max_iter=max_iter,
    )
    if surrogate.truncated:
        LOGGER.info(
            '%s reached the budget of %d evaluations; %d further calls were not trained.',
            algorithm,
            budget,
            surrogate.truncated,
        )
    best = HYPER_BOX.decode(result.best_position)
    LOGGER.info('Best %s hyperparameters %s, loss %.6g.', algorithm, best, result.best_fitness)
    return TuneResult(
        algorithm=algorithm,
        best=best,
        loss=float(result.best_fitness),
        trace=np.asarray(result.history, dtype=float),
        stabilizing_iterations=stabilizing_iterations(result.best_trace),
        evaluations=surrogate.evaluations,
        trainings=len(surrogate.cache),
        divergent=int(surrogate.divergent),
        truncated=int(surrogate.truncated),
        seed=seed,
    )


def compare_tuners(algorithms, budget: int = 300, seed: int = 0, data=None):
    """
    Tune with several optimizers on the same data and rank the resulting models.

    Validation metrics are computed on the altitude channel in original units.
    Returns the tuning results and a table sorted by composite rank.

    """
    if data is None:
        data = gen_dataset(seed)
    truth = data.denormalize(data.y_val)[:, 0]
    results, metrics = {}, {}
    for algorithm in algorithms:
        res = tune(algorithm, budget=budget, seed=seed, data=data)
        results[res.algorithm] = res
        estimate = predict(res.best, data, seed)[:, 0]
        if not np.all(np.isfinite(estimate)):
            LOGGER.warning('Tuned %s model predicts non-finite values.', res.algorithm)
            continue
        try:
            metrics[res.algorithm] = regression_metrics(truth, estimate)
        except UndefinedMetricError as exc:
            LOGGER.warning('%s (%s).', exc, res.algorithm)
            metrics[res.algorithm] = exc.metrics
    table = rank_regression(metrics) if metrics else pd.DataFrame()
    return results, table


def write_tune_outputs(result: TuneResult, out_dir, json_name: str = 'tune.json') -> Path:
    """Write ``<algorithm>_trace.csv`` and the JSON summary; return the JSON path."""
    out_dir = Path(out_dir)
    slug = result.algorithm.replace('+', '_')
    trace_path = out_dir / f'{slug}_trace.csv'
    json_path = out_dir / json_name
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(
            {'iter': np.arange(1, result.trace.size + 1), 'best_loss': result.trace}
        ).to_csv(trace_path, index=False, float_format='%.12g')
        json_path.write_text(
            json.dumps(result.to_dict(trace_path.name), indent=2, sort_keys=True) + '\n'
        )
    except OSError as exc:
        raise OSError(f'Could not write tuning outputs to {out_dir}: {exc}') from exc
    return json_path
