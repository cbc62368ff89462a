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
Writing outputs.

Layout of an exported experiment::

    <out>/
        summary.csv         algorithm, function, best, worst, mean, std, rank
        wilcoxon.csv        ref, rival, function, p, verdict
        boxplot.csv         algorithm, function, trial, final_value
        convergence/        <algo>_<fn>_<trial>.csv with iter, best_so_far
        manifest.json       experiment settings, seeds and suite digests
        timings.csv         algorithm, function, seconds (on request)
        failures.csv        algorithm, function, error (only with failed cells)

"""

from __future__ import annotations

import json
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pandas as pd
from nipype import logging

from ..__about__ import __version__

LOGGER = logging.getLogger('nipype.workflow')

FLOAT_FORMAT = '%.17g'
EXPORT_FORMATS = ('csv', 'json')


@contextmanager
def _writing(path):
    try:
        yield
    except OSError as exc:
        raise OSError(f'Could not write {path}: {exc.strerror or exc}') from exc


def write_csv(table: pd.DataFrame, path) -> Path:
    path = Path(path)
    with _writing(path):
        path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path


def write_json(data, path) -> Path:
    path = Path(path)
    with _writing(path):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + '\n')
    return path


def manifest(report) -> dict:
    return {
        'snakeopt_version': __version__,
        'experiment': report.spec.to_dict(),
        'functions': report.manifest,
        'seeds': {
            f'{cell.algorithm}/{cell.function}': cell.seeds for cell in report.cells.values()
        },
    }


def boxplot_table(report) -> pd.DataFrame:
    rows = [
        {
            'algorithm': cell.algorithm,
            'function': cell.function,
            'trial': trial,
            'final_value': value,
        }
        for cell in report.cells.values()
        if not cell.failed
        for trial, value in enumerate(cell.final)
    ]
    return pd.DataFrame(rows, columns=['algorithm', 'function', 'trial', 'final_value'])


def convergence_table(history) -> pd.DataFrame:
    history = np.asarray(history, dtype=float)
    return pd.DataFrame({'iter': np.arange(1, history.size + 1), 'best_so_far': history})


def failures_table(report) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {'algorithm': c.algorithm, 'function': c.function, 'error': c.error}
            for c in report.failures
        ],
        columns=['algorithm', 'function', 'error'],
    )


def export(report, path, format: str = 'csv', timings: bool = False) -> list[Path]:
    """
    Write an :class:`~snakeopt.workflows.base.ExperimentReport` under ``path``.

    ``format='json'`` bundles the tables into ``report.json`` instead of CSV files;
    ``manifest.json`` is always written.
    Failures to write raise :class:`OSError` naming the offending path.

    """
    if format not in EXPORT_FORMATS:
        raise ValueError(f'Unknown export format {format!r}; choose from {EXPORT_FORMATS}.')
    out = Path(path)
    written = [write_json(manifest(report), out / 'manifest.json')]
    summary, wilcoxon = report.summary(), report.wilcoxon()
    boxplot = boxplot_table(report)

    if format == 'json':
        bundle = {
            'summary': summary.to_dict(orient='records'),
            'wilcoxon': wilcoxon[['ref', 'rival', 'function', 'p', 'verdict']].to_dict(
                orient='records'
            ),
            'boxplot': boxplot.to_dict(orient='records'),
            'convergence': {
                f'{cell.algorithm}_{cell.function}': cell.histories.tolist()
                for cell in report.cells.values()
                if not cell.failed
            },
        }
        if timings:
            bundle['timings'] = report.timings().to_dict(orient='records')
        if report.failures:
            bundle['failures'] = failures_table(report).to_dict(orient='records')
        written.append(write_json(bundle, out / 'report.json'))
        return written

    written.append(write_csv(summary, out / 'summary.csv'))
    written.append(
        write_csv(wilcoxon[['ref', 'rival', 'function', 'p', 'verdict']], out / 'wilcoxon.csv')
    )
    written.append(write_csv(boxplot, out / 'boxplot.csv'))
    for cell in report.cells.values():
        if cell.failed:
            continue
        for trial, history in enumerate(cell.histories):
            name = f'{cell.algorithm}_{cell.function}_{trial}.csv'
            written.append(write_csv(convergence_table(history), out / 'convergence' / name))
    if timings:
        written.append(write_csv(report.timings(), out / 'timings.csv'))
    if report.failures:
        written.append(write_csv(failures_table(report), out / 'failures.csv'))
    LOGGER.info('Wrote %d files to %s.', len(written), out)
    return written


def read_boxplot(path) -> pd.DataFrame:
    """Load ``boxplot.csv`` from an exported experiment folder."""
    path = Path(path)
    if path.is_dir():
        path = path / 'boxplot.csv'
    if not path.exists():
        raise FileNotFoundError(f'No experiment results at {path}.')
    return pd.read_csv(path)
