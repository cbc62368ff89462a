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
"""snakeopt: benchmark, ablate and compare snake optimizer variants."""

import sys
from argparse import ArgumentParser, RawTextHelpFormatter

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
DEFAULT_OUT = 'snakeopt-results'

# command-line flag -> ExperimentSpec field
_EXPERIMENT_FLAGS = {
    'algos': 'algorithms',
    'functions': 'functions',
    'dim': 'dim',
    'pop': 'pop_size',
    'iters': 'max_iter',
    'trials': 'trials',
    'seed': 'master_seed',
    'budget_mode': 'budget_mode',
}
_TUNE_FLAGS = {'algo': 'algorithm', 'budget': 'budget', 'seed': 'seed', 'compare': 'compare'}


class UsageError(Exception):
    """Invalid arguments or configuration."""


class _Parser(ArgumentParser):
    """Argument parser exiting with status 1 on invalid arguments."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def main(argv=None):
    """Set an entrypoint."""
    opts = get_parser().parse_args(argv)
    if opts.command is None:
        get_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    logger = _setup_logging(opts.verbose_count)
    try:
        return COMMANDS[opts.command](opts)
    except UsageError as exc:
        print(f'snakeopt {opts.command}: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        logger.critical('%s', exc)
        return EXIT_USAGE


def _comma_list(value):
    items = [item.strip() for item in value.split(',') if item.strip()]
    if not items:
        raise ValueError('empty list')
    return items


def _positive_int(value):
    number = int(value)
    if number < 1:
        raise ValueError(f'{value} is not positive')
    return number


def get_parser():
    """Build parser object."""
    from pathlib import Path

    from .. import __version__, conf
    from ..benchmarks import SUITES

    common = ArgumentParser(add_help=False)
    g_common = common.add_argument_group('Options common to every command')
    g_common.add_argument(
        '--config',
        action='store',
        type=Path,
        metavar='JSON',
        help='JSON file with run settings; command-line flags take precedence',
    )
    g_common.add_argument(
        '--out',
        '--output-dir',
        dest='out',
        action='store',
        type=Path,
        help='folder receiving results and the resolved config.json '
        f'(default: {DEFAULT_OUT}; the input folder for stats)',
    )
    g_common.add_argument('--seed', action='store', type=int, help='master random seed')

    g_perfm = common.add_argument_group('Options to handle performance')
    g_perfm.add_argument(
        '--workers',
        '--nprocs',
        dest='nprocs',
        action='store',
        type=_positive_int,
        help=f'number of worker processes (default ${conf.NPROCS_ENV} or 1)',
    )
    g_perfm.add_argument(
        '--use-plugin',
        action='store',
        default=None,
        help='nipype plugin configuration file',
    )
    g_perfm.add_argument(
        '-w',
        '--work-dir',
        action='store',
        type=Path,
        help='path where intermediate results should be stored',
    )
    g_perfm.add_argument(
        '-v',
        '--verbose',
        dest='verbose_count',
        action='count',
        default=0,
        help='increases log verbosity for each occurrence, debug level is -vvv',
    )

    parser = _Parser(
        description='snakeopt: snake optimizer strategy experiments',
        formatter_class=RawTextHelpFormatter,
    )
    parser.add_argument('--version', action='version', version=f'snakeopt v{__version__}')
    subparsers = parser.add_subparsers(dest='command', parser_class=_Parser)

    def _grid_options(sub, suite_default):
        g_grid = sub.add_argument_group('Experiment grid')
        g_grid.add_argument(
            '--suite',
            action='store',
            choices=sorted(SUITES),
            default=suite_default,
            help='named set of benchmark functions',
        )
        g_grid.add_argument(
            '--functions',
            action='store',
            type=_comma_list,
            help='comma-separated function identifiers (overrides --suite)',
        )
        g_grid.add_argument(
            '--dim', action='store', type=int, help=f'problem dimension {conf.SUPPORTED_DIMS}'
        )
        g_grid.add_argument('--pop', action='store', type=int, help='population size')
        g_grid.add_argument('--iters', action='store', type=int, help='iterations per run')
        g_grid.add_argument('--trials', action='store', type=int, help='runs per cell')
        g_grid.add_argument(
            '--timings', action='store_true', help='also write per-cell wall-clock times'
        )

    bench = subparsers.add_parser(
        'bench', parents=[common], help='compare algorithms on a benchmark suite'
    )
    _grid_options(bench, 'cec-like')
    bench.add_argument(
        '--algos',
        action='store',
        type=_comma_list,
        help='comma-separated algorithm identifiers (default: all)',
    )
    bench.add_argument(
        '--budget-mode',
        action='store',
        choices=conf.BUDGET_MODES,
        help='uniform populations or per-algorithm sizes',
    )
    bench.add_argument(
        '--format', action='store', choices=('csv', 'json'), default='csv', help='result format'
    )

    ablate = subparsers.add_parser(
        'ablate', parents=[common], help='run the improvement-strategy ablation ladder'
    )
    _grid_options(ablate, 'smoke')

    stats = subparsers.add_parser(
        'stats', parents=[common], help='rank-sum tests against a reference algorithm'
    )
    stats.add_argument(
        '--in',
        dest='in_dir',
        action='store',
        type=Path,
        required=True,
        help='folder with bench results (boxplot.csv)',
    )
    stats.add_argument('--ref', action='store', default='so', help='reference algorithm')
    stats.add_argument(
        '--rivals', action='store', type=_comma_list, help='algorithms to test (default: all)'
    )

    tune = subparsers.add_parser(
        'tune-demo', parents=[common], help='tune the trajectory surrogate'
    )
    tune.add_argument('--algo', action='store', help='tuning algorithm (default: so)')
    tune.add_argument('--budget', action='store', type=int, help='objective evaluations')
    tune.add_argument(
        '--compare',
        action='store',
        type=_comma_list,
        help='comma-separated tuners to compare on the same data',
    )
    return parser


def _setup_logging(verbose_count):
    import logging
    import warnings

    from nipype import logging as nlogging

    logging.addLevelName(25, 'IMPORTANT')  # Add a new level between INFO and WARNING
    logging.addLevelName(15, 'VERBOSE')  # Add a new level between INFO and DEBUG
    logger = logging.getLogger('cli')
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter('%(asctime)s,%(msecs)d %(name)-2s %(message)s'))
        logger.addHandler(handler)

    def _warn_redirect(message, category, filename, lineno, file=None, line=None):
        logger.warning('Captured warning (%s): %s', category, message)

    warnings.showwarning = _warn_redirect

    # Retrieve logging level
    log_level = int(max(25 - 5 * verbose_count, logging.DEBUG))
    # Set logging
    logger.setLevel(log_level)
    nlogging.getLogger('nipype.workflow').setLevel(log_level)
    nlogging.getLogger('nipype.interface').setLevel(log_level)
    nlogging.getLogger('nipype.utils').setLevel(log_level)
    return logger


def load_config(path) -> dict:
    import json

    if path is None:
        return {}
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise UsageError(f'config file {path} does not exist') from None
    except json.JSONDecodeError as exc:
        raise UsageError(f'config file {path} is not valid JSON: {exc}') from None
    if not isinstance(data, dict):
        raise UsageError(f'config file {path} must hold a JSON object')
    return data


def _overlay(opts, flags: dict, settings: dict) -> dict:
    settings = dict(settings)
    for flag, key in flags.items():
        value = getattr(opts, flag, None)
        if value is not None:
            settings[key] = value
    return settings


def resolve_experiment(opts, **defaults):
    """Merge defaults, the config file and flags into an ``ExperimentSpec``."""
    from ..benchmarks import resolve_functions
    from ..workflows.base import ExperimentSpec

    settings = {**defaults, **load_config(opts.config)}
    if opts.functions is None and 'functions' not in settings:
        settings['functions'] = resolve_functions(opts.suite)
    settings = _overlay(opts, _EXPERIMENT_FLAGS, settings)
    try:
        return ExperimentSpec.from_dict(settings)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def build_plugin(opts):
    """Plugin settings from ``--use-plugin`` and ``--workers``."""
    from ..workflows.base import plugin_settings

    base = None
    if opts.use_plugin is not None:
        from yaml import safe_load as loadyml

        with open(opts.use_plugin) as f:
            base = loadyml(f) or {}
        base.setdefault('plugin_args', {})
    return plugin_settings(opts.nprocs, base=base)


def _prepare_dirs(opts):
    import tempfile
    from pathlib import Path

    from nipype import config as ncfg

    output_dir = (opts.out or Path(DEFAULT_OUT)).absolute()
    work_dir = (opts.work_dir or Path(tempfile.mkdtemp(prefix='snakeopt_work_'))).absolute()
    log_dir = work_dir / 'logs'
    output_dir.mkdir(parents=True, exist_ok=True)
    log_dir.mkdir(parents=True, exist_ok=True)

    # Nipype config (logs and execution)
    ncfg.update_config(
        {
            'logging': {'log_directory': str(log_dir), 'log_to_file': True},
            'execution': {
                'crashdump_dir': str(log_dir),
                'crashfile_format': 'txt',
                'get_linked_libs': False,
            },
        }
    )
    return output_dir, work_dir


def _snapshot(settings: dict, output_dir):
    from ..workflows.outputs import write_json

    return write_json(settings, output_dir / 'config.json')


def cmd_bench(opts):
    import logging

    from ..optimizers import ALGORITHMS
    from ..workflows.base import run_experiment
    from ..workflows.outputs import export

    logger = logging.getLogger('cli')
    spec = resolve_experiment(opts, algorithms=list(ALGORITHMS))
    plugin = build_plugin(opts)
    output_dir, work_dir = _prepare_dirs(opts)
    _snapshot(spec.to_dict(), output_dir)
    logger.log(
        25,
        'Benchmarking %s on %s (dim=%d, %d trials).',
        ', '.join(spec.algorithms),
        ', '.join(spec.functions),
        spec.dim,
        spec.trials,
    )
    report = run_experiment(spec, work_dir=work_dir, plugin=plugin)
    export(report, output_dir, format=opts.format, timings=opts.timings)
    if not report.ok:
        logger.error('%d of %d cells failed:', len(report.failures), len(report.cells))
        for cell in report.failures:
            logger.error('  %s/%s: %s', cell.algorithm, cell.function, cell.error)
        return EXIT_PARTIAL
    logger.log(25, 'snakeopt bench finished without errors')
    return EXIT_OK


def cmd_ablate(opts):
    import logging

    from ..workflows.ablation import export_ablation, run_ablation

    logger = logging.getLogger('cli')
    spec = resolve_experiment(opts, algorithms=['so'])
    plugin = build_plugin(opts)
    output_dir, work_dir = _prepare_dirs(opts)
    _snapshot(spec.to_dict(), output_dir)
    try:
        ablation = run_ablation(spec, work_dir=work_dir, plugin=plugin)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    export_ablation(ablation, output_dir, timings=opts.timings)
    for row in ablation.ladder.itertuples():
        logger.log(25, '%-16s mean error %.6g (%+.2f%%)', row.rung, row.mean, row.improvement_pct)
    if not ablation.experiment.ok:
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_stats(opts):
    import logging

    from ..utils.stats import compare_reference
    from ..workflows.outputs import read_boxplot, write_csv

    logger = logging.getLogger('cli')
    try:
        boxplot = read_boxplot(opts.in_dir)
        wilcoxon, signs = compare_reference(boxplot, opts.ref, opts.rivals)
    except (FileNotFoundError, ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    output_dir = opts.out or opts.in_dir
    write_csv(wilcoxon, output_dir / 'wilcoxon.csv')
    write_csv(signs, output_dir / 'signs.csv')
    for row in signs.itertuples():
        logger.log(25, '%s vs %s: +%d =%d -%d', opts.ref, row.rival, row.plus, row.equal, row.minus)
    return EXIT_OK


def cmd_tune_demo(opts):
    import logging
    from pathlib import Path

    from ..tuning import compare_tuners, gen_dataset, tune, write_tune_outputs
    from ..workflows.outputs import write_csv

    logger = logging.getLogger('cli')
    settings = {'algorithm': 'so', 'budget': 300, 'seed': 0, 'compare': None}
    settings.update(load_config(opts.config))
    settings = _overlay(opts, _TUNE_FLAGS, settings)
    unknown = sorted(set(settings) - set(_TUNE_FLAGS.values()))
    if unknown:
        raise UsageError(f'unknown tune-demo settings: {", ".join(unknown)}')
    output_dir = Path(opts.out or DEFAULT_OUT).absolute()
    try:
        if settings['compare']:
            data = gen_dataset(settings['seed'])
            results, table = compare_tuners(
                settings['compare'], budget=settings['budget'], seed=settings['seed'], data=data
            )
        else:
            results = {
                settings['algorithm']: tune(
                    settings['algorithm'], budget=settings['budget'], seed=settings['seed']
                )
            }
            table = None
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    output_dir.mkdir(parents=True, exist_ok=True)
    _snapshot(settings, output_dir)
    for name, result in results.items():
        json_name = 'tune.json' if table is None else f'{name.replace("+", "_")}.json'
        write_tune_outputs(result, output_dir, json_name=json_name)
        logger.log(25, '%s: best %s, loss %.6g', name, result.best, result.loss)
    if table is not None:
        write_csv(table.rename_axis('algorithm').reset_index(), output_dir / 'comparison.csv')
    return EXIT_OK


COMMANDS = {
    'bench': cmd_bench,
    'ablate': cmd_ablate,
    'stats': cmd_stats,
    'tune-demo': cmd_tune_demo,
}


if __name__ == '__main__':
    raise RuntimeError(
        'snakeopt/cli/run.py should not be run directly;\n'
        'Please `pip install` snakeopt and use the `snakeopt` command'
    )
