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
Ablation ladder over the snake optimizer's improvement strategies.

Rungs come from the packaged ``ablation.json``.
All rungs share trial seeds, so rung ``k`` and the vanilla rung see the same
initial random streams.

"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd
from nipype import logging

from ..data import load as load_data
from ..optimizers import is_snake
from ..optimizers.snake import StrategyToggles
from ..utils.stats import convergence_points, sign_summary, wilcoxon_rank_sum
from .base import ExperimentReport, ExperimentSpec, run_experiment
from .outputs import export, write_csv

LOGGER = logging.getLogger('nipype.workflow')

LADDER_COLUMNS = [
    'rung',
    'toggles',
    'alias_of',
    'mean',
    'std',
    'improvement_pct',
    'wins',
    'ties',
    'losses',
    'band_iteration',
    'best_iteration',
]
BY_FUNCTION_COLUMNS = [
    'rung',
    'function',
    'toggles',
    'alias_of',
    'mean',
    'std',
    'improvement_pct',
    'p_vs_vanilla',
    'verdict',
    'band_iteration',
    'best_iteration',
]


@dataclass(frozen=True)
class Rung:
    name: str
    toggles: StrategyToggles
    alias_of: str | None = None

    @property
    def algorithm(self) -> str:
        return self.toggles.label()


def load_ladder() -> tuple[Rung, ...]:
    """
    The ablation ladder, from vanilla to every strategy switched on.

    Each rung adds one strategy to its predecessor. A rung repeating an earlier
    strategy set is an alias of that rung and shares its cells.

    >>> [rung.algorithm for rung in load_ladder()]
    ['so-vanilla', 'so+gps', 'so+gps+adaptive', 'so+gps+adaptive+mutation', 'so', 'so']
    >>> [rung.alias_of for rung in load_ladder()][-2:]
    [None, '+flight']

    """
    definition = json.loads(load_data.readable('ablation.json').read_text())
    rungs, seen = [], {}
    for entry in definition['rungs']:
        tokens = entry['toggles']
        name = 'so-vanilla' if not tokens else '+'.join(('so', *tokens))
        toggles = StrategyToggles.from_name(name)
        alias_of = seen.get(toggles)
        if alias_of is None and rungs:
            previous, current = set(rungs[-1].toggles.enabled()), set(toggles.enabled())
            if not previous < current or len(current - previous) != 1:
                raise ValueError(f'Rung {entry["name"]!r} must add exactly one strategy.')
        seen.setdefault(toggles, entry['name'])
        rungs.append(Rung(entry['name'], toggles, alias_of))
    return tuple(rungs)


def improvement_pct(reference: float, value: float) -> float:
    """
    Relative reduction of a mean error against the vanilla rung, in percent.

    >>> improvement_pct(10.0, 7.5), improvement_pct(0.0, 0.0)
    (25.0, 0.0)

    """
    if reference == 0:
        return 0.0
    return 100.0 * (reference - value) / reference


def _iterations(cell) -> tuple[float, float]:
    points = np.array([convergence_points(history) for history in cell.histories])
    return float(points[:, 0].mean()), float(points[:, 1].mean())


@dataclass
class AblationReport:
    experiment: ExperimentReport
    rungs: tuple[Rung, ...]
    ladder: pd.DataFrame
    by_function: pd.DataFrame


def ladder_tables(report: ExperimentReport, rungs) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Summarize an experiment over the rung algorithms into ladder tables."""
    vanilla = rungs[0].algorithm
    functions = report.spec.functions
    rows, by_function = [], []
    for rung in rungs:
        cells = [report.cell(rung.algorithm, fn) for fn in functions]
        ok = [cell for cell in cells if not cell.failed]
        toggles = '+'.join(rung.toggles.enabled()) or 'none'
        alias_of = rung.alias_of or ''
        pvalues, means = {}, {'ref': {}, 'vanilla': {}}
        improvements, band, best = [], [], []
        for cell in ok:
            base = report.cell(vanilla, cell.function)
            if base.failed:
                continue
            test = wilcoxon_rank_sum(cell.errors, base.errors)
            mean, ref_mean = float(cell.errors.mean()), float(base.errors.mean())
            gain = improvement_pct(ref_mean, mean)
            band_iter, best_iter = _iterations(cell)
            pvalues[cell.function] = test.p_value
            means['ref'][cell.function] = mean
            means['vanilla'][cell.function] = ref_mean
            improvements.append(gain)
            band.append(band_iter)
            best.append(best_iter)
            by_function.append(
                {
                    'rung': rung.name,
                    'function': cell.function,
                    'toggles': toggles,
                    'alias_of': alias_of,
                    'mean': mean,
                    'std': float(cell.errors.std(ddof=1)),
                    'improvement_pct': gain,
                    'p_vs_vanilla': test.p_value,
                    'verdict': test.verdict,
                    'band_iteration': band_iter,
                    'best_iteration': best_iter,
                }
            )
        if not improvements:
            LOGGER.warning('Rung %s has no usable cells.', rung.name)
            continue
        errors = np.concatenate([cell.errors for cell in ok])
        wins, ties, losses = sign_summary('ref', ['vanilla'], {'vanilla': pvalues}, means)[
            'vanilla'
        ]
        rows.append(
            {
                'rung': rung.name,
                'toggles': toggles,
                'alias_of': alias_of,
                'mean': float(errors.mean()),
                'std': float(errors.std(ddof=1)),
                'improvement_pct': float(np.median(improvements)),
                'wins': wins,
                'ties': ties,
                'losses': losses,
                'band_iteration': float(np.mean(band)),
                'best_iteration': float(np.mean(best)),
            }
        )
    return (
        pd.DataFrame(rows, columns=LADDER_COLUMNS),
        pd.DataFrame(by_function, columns=BY_FUNCTION_COLUMNS),
    )


def run_ablation(base_spec: ExperimentSpec, work_dir=None, plugin=None) -> AblationReport:
    """
    Run every ladder rung on ``base_spec``'s functions with shared seeds.

    Rungs with identical strategy sets share one experiment cell.
    Errors are final values minus each function's optimum value; the ladder's
    ``improvement_pct`` is the median over functions of the reduction of the mean
    error against the vanilla rung.

    """
    if not all(is_snake(name) for name in base_spec.algorithms):
        raise ValueError(
            f'Ablation needs a snake optimizer experiment, got {", ".join(base_spec.algorithms)}.'
        )
    rungs = load_ladder()
    algorithms = tuple(dict.fromkeys(rung.algorithm for rung in rungs))
    spec = replace(base_spec, algorithms=algorithms, paired_seeds=True)
    LOGGER.info('Ablation ladder with %d rungs on %s.', len(rungs), ', '.join(spec.functions))
    report = run_experiment(spec, work_dir=work_dir, plugin=plugin)
    ladder, by_function = ladder_tables(report, rungs)
    return AblationReport(report, rungs, ladder, by_function)


def export_ablation(ablation: AblationReport, path, timings: bool = False) -> list[Path]:
    out = Path(path)
    written = export(ablation.experiment, out, timings=timings)
    written.append(write_csv(ablation.ladder, out / 'ladder.csv'))
    written.append(write_csv(ablation.by_function, out / 'ladder_by_function.csv'))
    return written
