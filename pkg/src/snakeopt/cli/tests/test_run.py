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

from ..run import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, get_parser, main


@pytest.fixture(scope='module')
def bench_dir(tmp_path_factory):
    base = tmp_path_factory.mktemp('bench')
    argv = [
        'bench',
        '--functions', 'sphere,F1',
        '--dim', '2',
        '--algos', 'so,pso',
        '--trials', '3',
        '--iters', '5',
        '--seed', '7',
        '--out', str(base / 'out'),
        '-w', str(base / 'work'),
    ]
    assert main(argv) == EXIT_OK
    return base / 'out'


def test_parser_defaults():
    opts = get_parser().parse_args(['bench'])
    assert (opts.suite, opts.format, opts.out, opts.nprocs) == ('cec-like', 'csv', None, None)
    assert get_parser().parse_args(['ablate']).suite == 'smoke'
    opts = get_parser().parse_args(['tune-demo', '--compare', 'so, pso', '--nprocs', '2'])
    assert (opts.compare, opts.nprocs) == (['so', 'pso'], 2)


@pytest.mark.parametrize(
    'argv',
    [
        ['bench', '--budget-mode', 'huge'],
        ['bench', '--workers', '0'],
        ['stats'],
        ['optimize'],
    ],
)
def test_invalid_arguments_exit_one(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == EXIT_USAGE


def test_no_command():
    assert main([]) == EXIT_USAGE


def test_bench_outputs(bench_dir):
    summary = pd.read_csv(bench_dir / 'summary.csv')
    assert len(summary) == 4
    assert set(summary['algorithm']) == {'so', 'pso'}
    assert len(list((bench_dir / 'convergence').glob('*.csv'))) == 4 * 3
    config = json.loads((bench_dir / 'config.json').read_text())
    assert config['algorithms'] == ['so', 'pso']
    assert config['functions'] == ['sphere', 'F1']
    assert config['master_seed'] == 7
    assert not (bench_dir / 'timings.csv').exists()


def test_bench_replays_config(bench_dir, tmp_path):
    argv = ['bench', '--config', str(bench_dir / 'config.json'), '--out', str(tmp_path)]
    assert main([*argv, '-w', str(tmp_path / 'work')]) == EXIT_OK
    assert pd.read_csv(tmp_path / 'boxplot.csv').equals(pd.read_csv(bench_dir / 'boxplot.csv'))


@pytest.mark.parametrize(
    'flags',
    [
        ['--algos', 'so,annealing'],
        ['--dim', '7'],
        ['--trials', '1'],
        ['--functions', 'F1,F12'],
    ],
)
def test_bench_invalid_settings(tmp_path, flags):
    assert main(['bench', *flags, '--out', str(tmp_path)]) == EXIT_USAGE
    assert not (tmp_path / 'summary.csv').exists()


@pytest.mark.parametrize(
    ('content', 'exit_code'),
    [
        ('{not json', EXIT_USAGE),
        ('[1, 2]', EXIT_USAGE),
        ('{"population": 10}', EXIT_USAGE),
    ],
)
def test_bench_bad_config(tmp_path, content, exit_code):
    config = tmp_path / 'config.json'
    config.write_text(content)
    assert main(['bench', '--config', str(config), '--out', str(tmp_path / 'out')]) == exit_code


def test_bench_missing_config(tmp_path):
    assert main(['bench', '--config', str(tmp_path / 'none.json')]) == EXIT_USAGE


def test_bench_reports_failed_cells(tmp_path, monkeypatch):
    from ...interfaces import optimize

    original = optimize.run_cell

    def _flaky(algorithm, function, *args, **kwargs):
        record = original(algorithm, function, *args, **kwargs)
        if algorithm == 'pso':
            record['error'] = 'RuntimeError: boom'
        return record

    monkeypatch.setattr(optimize, 'run_cell', _flaky)
    argv = [
        'bench', '--functions', 'sphere', '--dim', '2', '--algos', 'so,pso',
        '--trials', '2', '--iters', '3', '--out', str(tmp_path / 'out'),
        '-w', str(tmp_path / 'work'),
    ]
    assert main(argv) == EXIT_PARTIAL
    failures = pd.read_csv(tmp_path / 'out' / 'failures.csv')
    assert failures['error'].tolist() == ['RuntimeError: boom']


def test_stats(bench_dir, tmp_path):
    assert main(['stats', '--in', str(bench_dir), '--ref', 'pso', '--out', str(tmp_path)]) == 0
    wilcoxon = pd.read_csv(tmp_path / 'wilcoxon.csv')
    assert wilcoxon['rival'].tolist() == ['so', 'so']
    signs = pd.read_csv(tmp_path / 'signs.csv')
    assert signs.columns.tolist() == ['rival', 'plus', 'equal', 'minus']
    assert signs[['plus', 'equal', 'minus']].sum(axis=1).tolist() == [2]


@pytest.mark.parametrize(
    'flags',
    [
        ['--ref', 'de'],
        ['--rivals', 'so,ga'],
    ],
)
def test_stats_unknown_algorithms(bench_dir, tmp_path, flags):
    assert main(['stats', '--in', str(bench_dir), *flags, '--out', str(tmp_path)]) == 1


def test_stats_missing_results(tmp_path):
    assert main(['stats', '--in', str(tmp_path / 'nothing')]) == EXIT_USAGE


def test_ablate(tmp_path):
    argv = [
        'ablate', '--functions', 'sphere', '--dim', '2', '--trials', '2', '--iters', '4',
        '--out', str(tmp_path / 'out'), '-w', str(tmp_path / 'work'),
    ]
    assert main(argv) == EXIT_OK
    ladder = pd.read_csv(tmp_path / 'out' / 'ladder.csv')
    assert ladder['rung'].tolist() == [
        'vanilla', '+gps', '+adaptive', '+dual_mutation', '+flight', 'full'
    ]
    assert (tmp_path / 'out' / 'ladder_by_function.csv').exists()


def test_tune_demo_is_deterministic(tmp_path):
    outputs = []
    for run in ('a', 'b'):
        out = tmp_path / run
        argv = ['tune-demo', '--algo', 'pso', '--budget', '20', '--seed', '2', '--out', str(out)]
        assert main(argv) == EXIT_OK
        outputs.append(json.loads((out / 'tune.json').read_text()))
        assert (out / 'pso_trace.csv').exists()
    assert outputs[0] == outputs[1]
    assert outputs[0]['seed'] == 2
    config = json.loads((tmp_path / 'a' / 'config.json').read_text())
    assert config == {'algorithm': 'pso', 'budget': 20, 'seed': 2, 'compare': None}


def test_tune_demo_compare(tmp_path):
    argv = ['tune-demo', '--compare', 'random,so+gps', '--budget', '20', '--out', str(tmp_path)]
    assert main(argv) == EXIT_OK
    table = pd.read_csv(tmp_path / 'comparison.csv')
    assert set(table['algorithm']) == {'random', 'so+gps'}
    assert (tmp_path / 'so_gps.json').exists()
    assert (tmp_path / 'random_trace.csv').exists()


@pytest.mark.parametrize(
    'flags', [['--budget', '5'], ['--algo', 'annealing'], ['--compare', 'annealing,so']]
)
def test_tune_demo_invalid(tmp_path, flags):
    assert main(['tune-demo', *flags, '--out', str(tmp_path)]) == EXIT_USAGE
