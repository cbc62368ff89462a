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
"""*snakeopt* experiment workflows: algorithm × function × trial grids."""

from __future__ import annotations

import hashlib
import json
import tempfile
from dataclasses import asdict, dataclass, field, fields
from itertools import combinations
from pathlib import Path

import numpy as np
import pandas as pd
from nipype import logging
from nipype.interfaces import utility as niu
from nipype.pipeline import engine as pe

from .. import conf
from ..benchmarks import SUITE_IDS, resolve_functions, suite_manifest
from ..interfaces.optimize import RunCell, cell_filename
from ..optimizers import parse_algorithm
from ..utils.stats import TrialSample, summarize, wilcoxon_rank_sum

LOGGER = logging.getLogger('nipype.workflow')


@dataclass(frozen=True)
class ExperimentSpec:
    """
    An experiment grid.

    ``pop_size=None`` picks population sizes from ``budget_mode`` (30 for every
    algorithm under ``uniform_pop``).

    >>> spec = ExperimentSpec(algorithms=['SO', 'pso'], functions=['f1', 'sphere'], dim=2)
    >>> spec.algorithms, spec.functions, len(spec.cells)
    (('so', 'pso'), ('F1', 'sphere'), 4)
    >>> ExperimentSpec(algorithms=['so'], trials=1)
    Traceback (most recent call last):
    ValueError: trials must be at least 2, got 1.

    """

    algorithms: tuple[str, ...]
    functions: tuple[str, ...] = SUITE_IDS
    dim: int = 10
    pop_size: int | None = None
    max_iter: int = conf.DEFAULT_MAX_ITER
    trials: int = conf.DEFAULT_TRIALS
    master_seed: int = conf.DEFAULT_SEED
    budget_mode: str = conf.DEFAULT_BUDGET_MODE
    paired_seeds: bool = False

    def __post_init__(self):
        algorithms = self.algorithms
        if isinstance(algorithms, str):
            algorithms = algorithms.split(',')
        algorithms = tuple(parse_algorithm(name) for name in algorithms)
        if not algorithms:
            raise ValueError('At least one algorithm is required.')
        if len(set(algorithms)) != len(algorithms):
            raise ValueError(f'Duplicate algorithms in {algorithms}.')
        object.__setattr__(self, 'algorithms', algorithms)
        object.__setattr__(self, 'functions', resolve_functions(functions=self.functions))
        if self.trials < 2:
            raise ValueError(f'trials must be at least 2, got {self.trials}.')
        if self.max_iter < 2:
            raise ValueError(f'max_iter must be at least 2, got {self.max_iter}.')
        if self.pop_size is not None and self.pop_size < 4:
            raise ValueError(f'pop_size must be at least 4, got {self.pop_size}.')
        if self.dim < 2:
            raise ValueError(f'dim must be at least 2, got {self.dim}.')
        suite_functions = [fn for fn in self.functions if fn in SUITE_IDS]
        if suite_functions and self.dim not in conf.SUPPORTED_DIMS:
            raise ValueError(
                f'Suite functions need dim in {conf.SUPPORTED_DIMS}, got {self.dim}.'
            )
        if self.budget_mode not in conf.BUDGET_MODES:
            raise ValueError(
                f'Unknown budget mode {self.budget_mode!r}; choose from {conf.BUDGET_MODES}.'
            )

    @property
    def cells(self) -> list[tuple[str, str]]:
        return [(algo, fn) for algo in self.algorithms for fn in self.functions]

    @property
    def digest(self) -> str:
        """Short hash of the settings; names the folder holding this grid's cell records."""
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:12]

    def to_dict(self) -> dict:
        data = asdict(self)
        data['algorithms'] = list(self.algorithms)
        data['functions'] = list(self.functions)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentSpec:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f'Unknown experiment settings: {", ".join(unknown)}.')
        data = dict(data)
        for key in ('algorithms', 'functions'):
            if key in data and not isinstance(data[key], str):
                data[key] = tuple(data[key])
        return cls(**data)


@dataclass
class CellResult:
    """Trials of one (algorithm, function) cell."""

    algorithm: str
    function: str
    final: np.ndarray
    histories: np.ndarray
    seeds: list
    evaluations: list
    counters: dict = field(default_factory=dict)
    optimum_value: float | None = None
    seconds: float = 0.0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def errors(self) -> np.ndarray:
        """Final values minus the function's optimum value."""
        return self.final - (self.optimum_value or 0.0)

    @classmethod
    def from_record(cls, record: dict) -> CellResult:
        return cls(
            algorithm=record['algorithm'],
            function=record['function'],
            final=np.asarray(record['final'], dtype=float),
            histories=np.asarray(record['histories'], dtype=float),
            seeds=list(record['seeds']),
            evaluations=list(record['evaluations']),
            counters=dict(record.get('counters') or {}),
            optimum_value=record.get('optimum_value'),
            seconds=float(record.get('seconds', 0.0)),
            error=record.get('error'),
        )

    def same_outcome(self, other: CellResult) -> bool:
        return (
            (self.algorithm, self.function, self.error, self.seeds, self.evaluations)
            == (other.algorithm, other.function, other.error, other.seeds, other.evaluations)
            and self.counters == other.counters
            and np.array_equal(self.final, other.final)
            and np.array_equal(self.histories, other.histories)
        )


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    cells: dict
    manifest: list

    @property
    def failures(self) -> list[CellResult]:
        return [cell for cell in self.cells.values() if cell.failed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def cell(self, algorithm: str, function: str) -> CellResult:
        return self.cells[(algorithm, function)]

    def samples(self) -> list[TrialSample]:
        return [
            TrialSample(cell.algorithm, cell.function, cell.final)
            for cell in self.cells.values()
            if not cell.failed
        ]

    def summary(self) -> pd.DataFrame:
        return summarize(self.samples())

    def wilcoxon(self, reference: str | None = None) -> pd.DataFrame:
        """
        Rank-sum tests per function.

        With ``reference`` set, it is tested against every other algorithm;
        otherwise every pair is tested, the earlier listed algorithm as reference.

        """
        if reference is None:
            pairs = list(combinations(self.spec.algorithms, 2))
        else:
            pairs = [(reference, rival) for rival in self.spec.algorithms if rival != reference]
        rows = []
        for ref, rival in pairs:
            for function in self.spec.functions:
                a, b = self.cells[(ref, function)], self.cells[(rival, function)]
                if a.failed or b.failed:
                    continue
                res = wilcoxon_rank_sum(a.final, b.final)
                rows.append(
                    {
                        'ref': ref,
                        'rival': rival,
                        'function': function,
                        'p': res.p_value,
                        'verdict': res.verdict,
                        'u': res.u_statistic,
                        'method': res.method,
                    }
                )
        columns = ['ref', 'rival', 'function', 'p', 'verdict', 'u', 'method']
        return pd.DataFrame(rows, columns=columns)

    def timings(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {'algorithm': c.algorithm, 'function': c.function, 'seconds': c.seconds}
                for c in self.cells.values()
            ],
            columns=['algorithm', 'function', 'seconds'],
        )

    def equals(self, other: ExperimentReport) -> bool:
        """Compare everything but wall-clock timings."""
        return (
            self.spec == other.spec
            and self.manifest == other.manifest
            and self.cells.keys() == other.cells.keys()
            and all(cell.same_outcome(other.cells[key]) for key, cell in self.cells.items())
        )


def plugin_settings(workers: int | None = None, base: dict | None = None) -> dict:
    """
    Nipype execution plugin for ``workers`` processes.

    >>> plugin_settings(1)
    {'plugin': 'Linear', 'plugin_args': {}}
    >>> plugin_settings(4)['plugin_args']['n_procs']
    4

    """
    if base is not None:
        settings = {'plugin': base.get('plugin', 'MultiProc')}
        settings['plugin_args'] = dict(base.get('plugin_args') or {})
        if workers is not None:
            settings['plugin_args']['n_procs'] = workers
        return settings
    if workers is None:
        workers = conf.default_workers()
    if workers <= 1:
        return {'plugin': 'Linear', 'plugin_args': {}}
    return {
        'plugin': 'MultiProc',
        'plugin_args': {'n_procs': workers, 'raise_insufficient': False},
    }


def init_experiment_wf(spec: ExperimentSpec, cells_dir, name='experiment_wf'):
    """
    Build the experiment graph: one :class:`RunCell` per (algorithm, function).

    Workflow Graph
        .. workflow::
            :graph2use: orig
            :simple_form: yes

            from snakeopt.workflows.base import ExperimentSpec, init_experiment_wf
            wf = init_experiment_wf(ExperimentSpec(algorithms=['so', 'pso']), '.')

    Parameters
    ----------
    spec : :obj:`ExperimentSpec`
        The experiment grid.
    cells_dir : :obj:`str`
        Folder collecting one JSON record per cell.

    Outputs
    -------
    cell_files
        List of cell records, in grid order.
    failed
        Per-cell failure flags.

    """
    workflow = pe.Workflow(name=name)
    algorithms, functions = zip(*spec.cells, strict=True)

    run_cell = pe.MapNode(
        RunCell(
            dim=spec.dim,
            trials=spec.trials,
            max_iter=spec.max_iter,
            master_seed=spec.master_seed,
            budget_mode=spec.budget_mode,
            paired_seeds=spec.paired_seeds,
            cells_dir=str(cells_dir),
        ),
        iterfield=['algorithm', 'function'],
        name='run_cell',
    )
    run_cell.inputs.algorithm = list(algorithms)
    run_cell.inputs.function = list(functions)
    if spec.pop_size is not None:
        run_cell.inputs.pop_size = spec.pop_size

    outputnode = pe.Node(niu.IdentityInterface(fields=['cell_files', 'failed']), name='outputnode')

    # fmt:off
    workflow.connect([
        (run_cell, outputnode, [('out_file', 'cell_files'),
                                ('failed', 'failed')]),
    ])
    # fmt:on
    return workflow


def load_report(spec: ExperimentSpec, cells_dir) -> ExperimentReport:
    """Assemble a report from the cell records of a finished grid."""
    cells_dir = Path(cells_dir)
    cells = {}
    for algorithm, function in spec.cells:
        path = cells_dir / cell_filename(algorithm, function)
        try:
            record = json.loads(path.read_text())
        except FileNotFoundError:
            record = {
                'algorithm': algorithm,
                'function': function,
                'final': [],
                'histories': [],
                'seeds': [],
                'evaluations': [],
                'error': f'MissingCell: no record at {path}',
            }
        cells[(algorithm, function)] = CellResult.from_record(record)
    return ExperimentReport(
        spec=spec,
        cells=cells,
        manifest=suite_manifest(spec.dim, spec.functions),
    )


def run_experiment(spec: ExperimentSpec, work_dir=None, plugin: dict | None = None):
    """
    Execute every cell of ``spec`` and assemble the report.

    Cells run through nipype (``Linear`` unless ``plugin`` says otherwise) and write
    their JSON records under ``work_dir/cells/<spec digest>``, so grids sharing a
    ``work_dir`` never read each other's records. The report is reduced from those
    records in grid order.

    >>> spec = ExperimentSpec(algorithms=['pso', 'random'], functions=['sphere'],
    ...                       dim=2, trials=2, max_iter=5)
    >>> report = run_experiment(spec, work_dir=testdir)
    >>> report.ok, len(report.cells), report.summary().shape
    (True, 2, (2, 7))

    """
    if work_dir is None:
        work_dir = tempfile.mkdtemp(prefix='snakeopt_')
    work_dir = Path(work_dir).absolute()
    cells_dir = work_dir / 'cells' / spec.digest
    cells_dir.mkdir(parents=True, exist_ok=True)

    workflow = init_experiment_wf(spec, cells_dir)
    workflow.base_dir = str(work_dir)
    settings = plugin or plugin_settings(1)
    LOGGER.info(
        'Running %d cells (%d trials each) with the %s plugin.',
        len(spec.cells),
        spec.trials,
        settings['plugin'],
    )
    try:
        workflow.run(**settings)
    except RuntimeError as exc:
        LOGGER.error('Experiment graph did not finish cleanly: %s', exc)
    report = load_report(spec, cells_dir)
    for cell in report.failures:
        LOGGER.warning('Cell %s/%s failed: %s', cell.algorithm, cell.function, cell.error)
    return report
