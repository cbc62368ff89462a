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
"""Interfaces running optimizer trials on benchmark functions."""

import json
import os
import time
from collections import Counter

from nipype import logging
from nipype.interfaces.base import (
    BaseInterfaceInputSpec,
    Directory,
    File,
    SimpleInterface,
    TraitedSpec,
    isdefined,
    traits,
)

from .. import conf
from ..benchmarks import get_function
from ..optimizers import run_algorithm
from ..optimizers.base import Objective, SearchSpace, derive_seed, make_rng

LOGGER = logging.getLogger('nipype.interface')

PAIRED_SEED_KEY = 'paired'


def cell_filename(algorithm: str, function: str) -> str:
    """
    >>> cell_filename('so+gps', 'F3')
    'cell_so+gps_F3.json'

    """
    return f'cell_{algorithm}_{function}.json'


def run_cell(
    algorithm: str,
    function: str,
    dim: int,
    trials: int = conf.DEFAULT_TRIALS,
    pop_size: int | None = None,
    max_iter: int = conf.DEFAULT_MAX_ITER,
    master_seed: int = conf.DEFAULT_SEED,
    budget_mode: str = conf.DEFAULT_BUDGET_MODE,
    paired_seeds: bool = False,
) -> dict:
    """
    Run ``trials`` independent optimizations of ``function`` with ``algorithm``.

    Seeds derive from ``(master_seed, trial, algorithm, function)``; with
    ``paired_seeds`` every algorithm draws the same stream for a given trial and
    function.
    Exceptions never propagate: the returned record carries ``error`` instead.

    """
    seed_key = PAIRED_SEED_KEY if paired_seeds else algorithm
    seeds = [derive_seed(master_seed, trial, seed_key, function) for trial in range(trials)]
    record = {
        'algorithm': algorithm,
        'function': function,
        'dim': int(dim),
        'trials': int(trials),
        'max_iter': int(max_iter),
        'seeds': seeds,
        'final': [],
        'histories': [],
        'evaluations': [],
        'counters': {},
        'optimum_value': None,
        'seconds': 0.0,
        'error': None,
    }
    start = time.perf_counter()
    try:
        test_function = get_function(function, dim)
        space = SearchSpace.box(dim, *conf.SEARCH_BOUNDS)
        counters = Counter()
        for seed in seeds:
            objective = Objective(test_function, dim, name=test_function.id)
            result = run_algorithm(
                algorithm,
                objective,
                space,
                make_rng(seed),
                pop_size=pop_size,
                max_iter=max_iter,
                budget_mode=budget_mode,
            )
            record['final'].append(float(result.best_fitness))
            record['histories'].append([float(v) for v in result.history])
            record['evaluations'].append(int(result.evaluations))
            counters.update(result.counters)
        record['counters'] = {key: int(counters[key]) for key in sorted(counters)}
        record['optimum_value'] = float(test_function.bias)
    except Exception as exc:  # noqa: BLE001
        record['error'] = f'{type(exc).__name__}: {exc}'
        LOGGER.warning('Cell %s/%s failed: %s', algorithm, function, record['error'])
    record['seconds'] = time.perf_counter() - start
    return record


class _RunCellInputSpec(BaseInterfaceInputSpec):
    algorithm = traits.Str(mandatory=True, desc='algorithm identifier')
    function = traits.Str(mandatory=True, desc='suite or base function identifier')
    dim = traits.Int(mandatory=True, desc='problem dimension')
    trials = traits.Int(conf.DEFAULT_TRIALS, usedefault=True, desc='independent runs')
    pop_size = traits.Int(desc='population size (per budget mode when undefined)')
    max_iter = traits.Int(conf.DEFAULT_MAX_ITER, usedefault=True, desc='iterations per run')
    master_seed = traits.Int(conf.DEFAULT_SEED, usedefault=True, desc='experiment seed')
    budget_mode = traits.Enum(*conf.BUDGET_MODES, usedefault=True, desc='population policy')
    paired_seeds = traits.Bool(False, usedefault=True, desc='share seeds across algorithms')
    cells_dir = Directory(desc='folder collecting cell records (node folder if undefined)')


class _RunCellOutputSpec(TraitedSpec):
    out_file = File(exists=True, desc='JSON record of every trial in the cell')
    failed = traits.Bool(desc='the cell raised an error')


class RunCell(SimpleInterface):
    """
    Run one (algorithm, function) cell of an experiment grid.

    >>> cell = RunCell(algorithm='pso', function='sphere', dim=2, trials=2, max_iter=5)
    >>> result = cell.run()
    >>> result.outputs.failed
    False
    >>> record = json.loads(open(result.outputs.out_file).read())
    >>> len(record['final']), len(record['histories'][0])
    (2, 5)

    """

    input_spec = _RunCellInputSpec
    output_spec = _RunCellOutputSpec

    def _run_interface(self, runtime):
        pop_size = self.inputs.pop_size if isdefined(self.inputs.pop_size) else None
        record = run_cell(
            self.inputs.algorithm,
            self.inputs.function,
            self.inputs.dim,
            trials=self.inputs.trials,
            pop_size=pop_size,
            max_iter=self.inputs.max_iter,
            master_seed=self.inputs.master_seed,
            budget_mode=self.inputs.budget_mode,
            paired_seeds=self.inputs.paired_seeds,
        )
        out_dir = self.inputs.cells_dir if isdefined(self.inputs.cells_dir) else runtime.cwd
        out_file = os.path.join(
            out_dir, cell_filename(self.inputs.algorithm, self.inputs.function)
        )
        with open(out_file, 'w') as f:
            json.dump(record, f, sort_keys=True)
        self._results['out_file'] = out_file
        self._results['failed'] = record['error'] is not None
        return runtime
