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
"""Descriptive statistics, rankings, rank-sum tests and regression metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats
from sklearn import metrics as skm

ALPHA = 0.05


class UndefinedMetricError(ValueError):
    """A regression metric has a zero denominator; the others are kept in ``metrics``."""

    def __init__(self, name, metrics):
        self.name = name
        self.metrics = metrics
        super().__init__(f'Metric {name!r} is undefined for these inputs.')


@dataclass(frozen=True)
class TrialSample:
    algorithm: str
    function: str
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, ndmin=1)
        if values.size == 0:
            raise ValueError('A trial sample needs at least one value.')
        if not np.all(np.isfinite(values)):
            raise ValueError(f'Non-finite values in sample {self.algorithm}/{self.function}.')
        object.__setattr__(self, 'values', values)


@dataclass(frozen=True)
class WilcoxonResult:
    u_statistic: float
    p_value: float
    method: str
    verdict: str


def _values(sample) -> np.ndarray:
    if isinstance(sample, TrialSample):
        return sample.values
    return np.asarray(sample, dtype=float)


def describe(sample) -> tuple[float, float, float, float]:
    """
    Best, worst, mean and sample standard deviation.

    >>> describe([1, 2, 3, 4])
    (1.0, 4.0, 2.5, 1.2909944487358056)
    >>> describe([3])
    Traceback (most recent call last):
    ValueError: The standard deviation needs at least two values.

    """
    values = _values(sample)
    if values.size < 2:
        raise ValueError('The standard deviation needs at least two values.')
    return (
        float(values.min()),
        float(values.max()),
        float(values.mean()),
        float(values.std(ddof=1)),
    )


def rank_algorithms(means: dict) -> dict:
    """
    Competition ranking by ascending mean; near-equal means share the better rank.

    ``means`` maps algorithm names to a mean or to a sample.

    >>> rank_algorithms({'a': 300.0, 'b': 300.0, 'c': 346.0})
    {'a': 1, 'b': 1, 'c': 3}

    """
    if len(means) < 2:
        raise ValueError('Ranking needs at least two algorithms.')
    centers = {
        name: float(value) if np.isscalar(value) else float(np.mean(_values(value)))
        for name, value in means.items()
    }
    order = sorted(centers, key=lambda name: centers[name])
    ranks = {}
    for position, name in enumerate(order, start=1):
        ranks[name] = position
        if position > 1:
            previous = order[position - 2]
            tolerance = 1e-9 * max(1.0, abs(centers[previous]))
            if abs(centers[name] - centers[previous]) < tolerance:
                ranks[name] = ranks[previous]
    return {name: ranks[name] for name in means}


def wilcoxon_rank_sum(x, y, alpha: float = ALPHA) -> WilcoxonResult:
    """
    Two-sided rank-sum test of ``x`` (reference) against ``y``.

    The exact null distribution is used for small tie-free samples
    (``n + m <= 20``); otherwise the normal approximation with tie and continuity
    corrections.
    The verdict is ``plus`` when the reference is significantly better (lower),
    ``minus`` when significantly worse, and ``equal`` otherwise.

    >>> res = wilcoxon_rank_sum([1, 2, 3], [4, 5, 6])
    >>> res.method, round(res.p_value, 12), res.verdict
    ('exact', 0.1, 'equal')

    """
    x, y = _values(x), _values(y)
    if x.size == 0 or y.size == 0:
        raise ValueError('Both samples must be non-empty.')
    pooled = np.concatenate((x, y))
    if np.all(pooled == pooled[0]):
        u = x.size * y.size / 2.0
        return WilcoxonResult(u, 1.0, 'exact', 'equal')

    ties = np.unique(pooled).size < pooled.size
    method = 'exact' if pooled.size <= 20 and not ties else 'asymptotic'
    res = stats.mannwhitneyu(
        x, y, alternative='two-sided', use_continuity=True, method=method
    )
    p_value = float(min(1.0, res.pvalue))
    verdict = 'equal'
    if p_value < alpha:
        verdict = 'plus' if x.mean() < y.mean() else 'minus'
    return WilcoxonResult(
        u_statistic=float(res.statistic),
        p_value=p_value,
        method='exact' if method == 'exact' else 'normal_approx',
        verdict=verdict,
    )


def sign_summary(reference: str, others, pvalues: dict, means: dict, alpha: float = ALPHA):
    """
    Count (better, equal, worse) functions of ``reference`` against each rival.

    ``pvalues[rival][function]`` holds rank-sum p-values and
    ``means[algorithm][function]`` the mean final values.

    >>> sign_summary('so', ['pso'], {'pso': {'F1': 0.01, 'F2': 0.3}},
    ...              {'so': {'F1': 1.0, 'F2': 1.0}, 'pso': {'F1': 2.0, 'F2': 0.5}})
    {'pso': (1, 1, 0)}

    """
    summary = {}
    for rival in others:
        plus = equal = minus = 0
        functions = pvalues[rival]
        if set(functions) - set(means[reference]) or set(functions) - set(means[rival]):
            raise ValueError(f'Function sets of {reference!r} and {rival!r} differ.')
        for function, p_value in functions.items():
            if p_value >= alpha:
                equal += 1
            elif means[reference][function] < means[rival][function]:
                plus += 1
            else:
                minus += 1
        summary[rival] = (plus, equal, minus)
    return summary


def regression_metrics(y_true, y_pred) -> dict:
    """
    RMSE, MAPE (percent), MAE, maximum absolute error and R².

    MAPE is the mean of ``|y_true - y_pred| / |y_true|`` times 100, so a single 100% miss
    out of two samples reports 50%.

    >>> m = regression_metrics([1, 2], [2, 2])
    >>> round(m['rmse'], 5), m['mae'], m['maxae'], m['mape']
    (0.70711, 0.5, 1.0, 50.0)

    """
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape or y_true.size < 2:
        raise ValueError('Need two equally long vectors with at least two entries.')
    result = {
        'rmse': float(np.sqrt(skm.mean_squared_error(y_true, y_pred))),
        'mae': float(skm.mean_absolute_error(y_true, y_pred)),
        'maxae': float(skm.max_error(y_true, y_pred)),
    }
    undefined = []
    if np.any(y_true == 0):
        undefined.append('mape')
    else:
        result['mape'] = 100.0 * float(skm.mean_absolute_percentage_error(y_true, y_pred))
    if np.all(y_true == y_true[0]):
        undefined.append('r2')
    else:
        result['r2'] = float(skm.r2_score(y_true, y_pred))
    if undefined:
        raise UndefinedMetricError(undefined[0], result)
    return result


def summarize(samples) -> pd.DataFrame:
    """
    Per-function table of best, worst, mean, std and rank.

    ``samples`` is an iterable of :class:`TrialSample`.

    """
    rows = []
    by_function = {}
    for sample in samples:
        best, worst, mean, std = describe(sample)
        rows.append(
            {
                'algorithm': sample.algorithm,
                'function': sample.function,
                'best': best,
                'worst': worst,
                'mean': mean,
                'std': std,
            }
        )
        by_function.setdefault(sample.function, {})[sample.algorithm] = mean
    ranks = {
        function: rank_algorithms(means) if len(means) > 1 else dict.fromkeys(means, 1)
        for function, means in by_function.items()
    }
    table = pd.DataFrame(
        rows, columns=['algorithm', 'function', 'best', 'worst', 'mean', 'std']
    )
    table['rank'] = [ranks[row['function']][row['algorithm']] for row in rows]
    return table


def convergence_points(history, band: float = 0.1) -> tuple[int, int]:
    """
    Iterations at which a best-so-far curve settles.

    Returns the first (1-based) iteration within ``band`` of the total improvement
    from the final value, and the first iteration reaching the final value.

    >>> convergence_points([10.0, 5.0, 2.0, 1.05, 1.0, 1.0])
    (4, 5)

    """
    history = np.asarray(history, dtype=float)
    final, start = history[-1], history[0]
    span = start - final
    band_iter = int(np.argmax(history <= final + band * span)) + 1
    best_iter = int(np.argmax(history <= final)) + 1
    return band_iter, best_iter


_HIGHER_IS_BETTER = {'r2'}


def rank_regression(results: dict) -> pd.DataFrame:
    """
    Rank candidates across regression metrics and average the ranks.

    ``results`` maps a candidate name to its :func:`regression_metrics` output.

    """
    table = pd.DataFrame(results).T
    ranks = pd.DataFrame(index=table.index)
    for column in table.columns:
        ascending = column not in _HIGHER_IS_BETTER
        ranks[column] = table[column].rank(method='min', ascending=ascending)
    table['composite_rank'] = ranks.mean(axis=1)
    return table.sort_values('composite_rank', kind='stable')


def compare_reference(boxplot: pd.DataFrame, reference: str, rivals=None, alpha: float = ALPHA):
    """
    Rank-sum tests and sign counts of ``reference`` against ``rivals``.

    ``boxplot`` holds one row per trial with ``algorithm``, ``function`` and
    ``final_value`` columns.
    Returns the per-function test table and the ``(+, =, -)`` counts per rival.

    """
    algorithms = list(dict.fromkeys(boxplot['algorithm']))
    if reference not in algorithms:
        raise ValueError(
            f'Reference {reference!r} not found; results hold {", ".join(algorithms)}.'
        )
    if rivals is None:
        rivals = [name for name in algorithms if name != reference] or [reference]
    missing = [name for name in rivals if name not in algorithms]
    if missing:
        raise ValueError(f'No results for {", ".join(missing)}.')
    grouped = {
        key: group['final_value'].to_numpy(dtype=float)
        for key, group in boxplot.groupby(['algorithm', 'function'], sort=False)
    }
    functions = list(dict.fromkeys(boxplot['function']))
    rows, pvalues = [], {}
    means = {name: {} for name in {reference, *rivals}}
    for rival in rivals:
        pvalues[rival] = {}
        for function in functions:
            if (reference, function) not in grouped or (rival, function) not in grouped:
                continue
            ref_values, rival_values = grouped[reference, function], grouped[rival, function]
            res = wilcoxon_rank_sum(ref_values, rival_values, alpha)
            rows.append(
                {
                    'ref': reference,
                    'rival': rival,
                    'function': function,
                    'p': res.p_value,
                    'verdict': res.verdict,
                }
            )
            pvalues[rival][function] = res.p_value
            means[reference][function] = float(ref_values.mean())
            means[rival][function] = float(rival_values.mean())
    signs = sign_summary(reference, rivals, pvalues, means, alpha)
    return (
        pd.DataFrame(rows, columns=['ref', 'rival', 'function', 'p', 'verdict']),
        pd.DataFrame(
            [(rival, *counts) for rival, counts in signs.items()],
            columns=['rival', 'plus', 'equal', 'minus'],
        ),
    )
