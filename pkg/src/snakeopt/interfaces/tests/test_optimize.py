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

import pytest

from ...optimizers.base import derive_seed
from ..optimize import PAIRED_SEED_KEY, RunCell, cell_filename, run_cell


@pytest.fixture(scope='module', autouse=True)
def _quiet_logger():
    import logging

    logger = logging.getLogger('nipype.interface')
    old_level = logger.getEffectiveLevel()
    logger.setLevel(logging.ERROR)
    yield
    logger.setLevel(old_level)


def test_run_cell_record():
    record = run_cell('so', 'F1', 2, trials=3, max_iter=6, master_seed=4)
    assert record['error'] is None
    assert record['optimum_value'] == 300.0
    assert record['seeds'] == [derive_seed(4, trial, 'so', 'F1') for trial in range(3)]
    assert len(record['final']) == 3
    assert all(len(history) == 6 for history in record['histories'])
    assert all(final >= 300.0 for final in record['final'])
    assert record['counters']['gps'] == 3
    assert record['counters']['adaptive'] == 18


def test_run_cell_paired_seeds():
    first = run_cell('so', 'sphere', 2, trials=2, max_iter=3, paired_seeds=True)
    second = run_cell('so-vanilla', 'sphere', 2, trials=2, max_iter=3, paired_seeds=True)
    assert first['seeds'] == second['seeds']
    assert first['seeds'][0] == derive_seed(0, 0, PAIRED_SEED_KEY, 'sphere')
    unpaired = run_cell('so', 'sphere', 2, trials=2, max_iter=3)
    assert unpaired['seeds'] != first['seeds']


def test_run_cell_is_deterministic():
    first, second = (
        run_cell('de', 'F5', 10, trials=2, max_iter=4, master_seed=1) for _ in range(2)
    )
    assert first['final'] == second['final']
    assert first['histories'] == second['histories']


@pytest.mark.parametrize(
    ('algorithm', 'function', 'dim', 'error'),
    [
        ('so', 'F11', 10, 'ValueError'),
        ('sa', 'F1', 10, 'ValueError'),
        ('so', 'F1', 7, 'ValueError'),
    ],
)
def test_run_cell_captures_errors(algorithm, function, dim, error):
    record = run_cell(algorithm, function, dim, trials=2, max_iter=3)
    assert record['error'].startswith(f'{error}: ')
    assert record['final'] == []
    assert record['optimum_value'] is None


def test_run_cell_interface(tmp_path):
    result = RunCell(
        algorithm='ga',
        function='rastrigin',
        dim=2,
        trials=2,
        pop_size=6,
        max_iter=4,
        budget_mode='table4_pop',
        cells_dir=str(tmp_path),
    ).run()
    assert result.outputs.out_file == str(tmp_path / cell_filename('ga', 'rastrigin'))
    assert result.outputs.failed is False
    record = json.loads((tmp_path / 'cell_ga_rastrigin.json').read_text())
    # an explicit population overrides the budget mode
    assert record['evaluations'] == [6 + 4 * 5] * 2


def test_run_cell_interface_failure(tmp_path):
    result = RunCell(
        algorithm='pso', function='nowhere', dim=2, trials=2, max_iter=3, cells_dir=str(tmp_path)
    ).run()
    assert result.outputs.failed is True
    record = json.loads(open(result.outputs.out_file).read())
    assert 'Unknown function' in record['error']
