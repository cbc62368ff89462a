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

import pandas as pd
import pytest

from ...interfaces.optimize import cell_filename
from ..base import ExperimentSpec, init_experiment_wf, load_report, run_experiment
from ..outputs import EXPORT_FORMATS, export, read_boxplot


@pytest.fixture(scope='module', autouse=True)
def _quiet_logger():
    import logging

    loggers = [logging.getLogger(name) for name in ('nipype.workflow', 'nipype.interface')]
    old_levels = [logger.getEffectiveLevel() for logger in loggers]
    for logger in loggers:
        logger.setLevel(logging.ERROR)
    yield
    for logger, level in zip(loggers, old_levels, strict=True):
        logger.setLevel(level)


@pytest.fixture(scope='module')
def small_spec():
    return ExperimentSpec(
        algorithms=['so', 'pso'],
        functions=['F1', 'F6'],
        dim=2,
        trials=3,
        max_iter=8,
        master_seed=7,
    )


@pytest.fixture(scope='module')
def small_report(small_spec, tmp_path_factory):
    return run_experiment(small_spec, work_dir=tmp_path_factory.mktemp('grid'))


@pytest.mark.parametrize(
    ('kwargs', 'message'),
    [
        ({'algorithms': []}, 'At least one algorithm'),
        ({'algorithms': ['so', 'SO']}, 'Duplicate'),
        ({'algorithms': ['so'], 'max_iter': 1}, 'max_iter'),
        ({'algorithms': ['so'], 'pop_size': 2}, 'pop_size'),
        ({'algorithms': ['so'], 'dim': 5}, 'Suite functions'),
        ({'algorithms': ['so'], 'budget_mode': 'fixed'}, 'budget mode'),
        ({'algorithms': ['sa']}, 'Unknown algorithm'),
    ],
)
def test_spec_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        ExperimentSpec(**kwargs)


def test_spec_off_suite_dimension():
    spec = ExperimentSpec(algorithms='so,de', functions='sphere,levy', dim=5)
    assert spec.algorithms == ('so', 'de')
    assert spec.cells[1] == ('so', 'levy')


def test_spec_roundtrip(small_spec):
    data = json.loads(json.dumps(small_spec.to_dict()))
    assert ExperimentSpec.from_dict(data) == small_spec
    with pytest.raises(ValueError, match='Unknown experiment settings'):
        ExperimentSpec.from_dict({**data, 'seed': 1})


def test_experiment_graph(small_spec, tmp_path):
    wf = init_experiment_wf(small_spec, tmp_path)
    node = wf.get_node('run_cell')
    assert node.inputs.algorithm == ['so', 'so', 'pso', 'pso']
    assert node.inputs.function == ['F1', 'F6', 'F1', 'F6']
    assert node.inputs.trials == 3


def test_report_shape(small_spec, small_report):
    assert small_report.ok
    assert set(small_report.cells) == set(small_spec.cells)
    for cell in small_report.cells.values():
        assert cell.final.shape == (3,)
        assert cell.histories.shape == (3, 8)
        assert len(set(cell.seeds)) == 3
        assert (cell.errors >= 0).all()
    summary = small_report.summary()
    assert len(summary) == 4
    assert summary.groupby('function')['rank'].min().tolist() == [1, 1]
    wilcoxon = small_report.wilcoxon()
    assert wilcoxon[['ref', 'rival']].drop_duplicates().values.tolist() == [['so', 'pso']]
    assert len(small_report.wilcoxon(reference='pso')) == 2


def test_report_is_reproducible(small_spec, small_report, tmp_path):
    again = run_experiment(small_spec, work_dir=tmp_path)
    assert again.equals(small_report)
    other = run_experiment(
        ExperimentSpec(**{**small_spec.to_dict(), 'master_seed': 8}), work_dir=tmp_path / 'b'
    )
    assert not other.equals(small_report)


def test_export_csv(small_report, tmp_path):
    written = export(small_report, tmp_path, timings=True)
    assert all(path.exists() for path in written)
    summary = pd.read_csv(tmp_path / 'summary.csv')
    assert summary.columns.tolist() == [
        'algorithm', 'function', 'best', 'worst', 'mean', 'std', 'rank'
    ]
    assert len(summary) == 4
    boxplot = read_boxplot(tmp_path)
    assert len(boxplot) == 4 * 3
    assert boxplot['trial'].tolist()[:3] == [0, 1, 2]
    convergence = sorted((tmp_path / 'convergence').glob('*.csv'))
    assert len(convergence) == 4 * 3
    curve = pd.read_csv(tmp_path / 'convergence' / 'so_F1_0.csv')
    assert curve['iter'].tolist() == list(range(1, 9))
    assert curve['best_so_far'].is_monotonic_decreasing
    assert pd.read_csv(tmp_path / 'wilcoxon.csv').columns.tolist() == [
        'ref', 'rival', 'function', 'p', 'verdict'
    ]
    assert len(pd.read_csv(tmp_path / 'timings.csv')) == 4
    assert not (tmp_path / 'failures.csv').exists()
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert manifest['experiment']['master_seed'] == 7
    assert [record['id'] for record in manifest['functions']] == ['F1', 'F6']
    assert manifest['seeds']['so/F1'] == small_report.cell('so', 'F1').seeds


def test_export_json(small_report, tmp_path):
    assert 'json' in EXPORT_FORMATS
    export(small_report, tmp_path, format='json')
    bundle = json.loads((tmp_path / 'report.json').read_text())
    assert len(bundle['summary']) == 4
    assert len(bundle['convergence']['pso_F6']) == 3
    assert not (tmp_path / 'summary.csv').exists()
    with pytest.raises(ValueError, match='Unknown export format'):
        export(small_report, tmp_path, format='xlsx')


def test_export_unwritable(small_report, tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('')
    with pytest.raises(OSError, match='Could not write'):
        export(small_report, blocker / 'out')


def test_missing_cells_become_failures(small_spec, tmp_path):
    report = load_report(small_spec, tmp_path)
    assert not report.ok
    assert len(report.failures) == 4
    assert report.failures[0].error.startswith('MissingCell')
    assert report.summary().empty
    export(report, tmp_path / 'out')
    failures = pd.read_csv(tmp_path / 'out' / 'failures.csv')
    assert len(failures) == 4


def test_failed_cell_is_reported(tmp_path):
    spec = ExperimentSpec(algorithms=['pso'], functions=['sphere', 'levy'], dim=2, trials=2,
                          max_iter=3)
    cells = tmp_path / 'cells' / spec.digest
    run_experiment(spec, work_dir=tmp_path)
    record = json.loads((cells / cell_filename('pso', 'levy')).read_text())
    record.update(final=[], histories=[], error='RuntimeError: boom')
    (cells / cell_filename('pso', 'levy')).write_text(json.dumps(record))
    report = load_report(spec, cells)
    assert [cell.function for cell in report.failures] == ['levy']
    assert report.summary()['function'].tolist() == ['sphere']
    with pytest.raises(FileNotFoundError):
        read_boxplot(tmp_path / 'nothing')


def test_shared_work_dir_keeps_grids_apart(tmp_path):
    first = ExperimentSpec(algorithms=['pso'], functions=['sphere'], dim=2, trials=2,
                           max_iter=3)
    second = ExperimentSpec.from_dict({**first.to_dict(), 'trials': 3})
    assert first.digest != second.digest
    assert ExperimentSpec.from_dict(first.to_dict()).digest == first.digest

    run_experiment(first, work_dir=tmp_path)
    stale = load_report(second, tmp_path / 'cells' / second.digest)
    assert [cell.error.split(':')[0] for cell in stale.failures] == ['MissingCell']

    report = run_experiment(second, work_dir=tmp_path)
    assert report.ok
    assert report.cells[('pso', 'sphere')].final.size == 3
    assert (tmp_path / 'cells' / first.digest / cell_filename('pso', 'sphere')).exists()


def test_export_is_byte_stable(small_report, tmp_path):
    export(small_report, tmp_path / 'a')
    export(small_report, tmp_path / 'b')
    for name in ('summary.csv', 'wilcoxon.csv', 'boxplot.csv', 'manifest.json'):
        assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()
    exported = pd.read_csv(tmp_path / 'a' / 'summary.csv')
    pd.testing.assert_frame_equal(
        exported, small_report.summary(), check_dtype=False, rtol=1e-12
    )
