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
Shifted, rotated, hybrid and composition test functions.

Every suite function has the form ``f(x) = g(x) + bias`` with ``g >= 0`` and
``g(optimum) = 0``.
Shifts, rotations and dimension permutations are drawn from per-slot seeds listed
in the packaged ``suite.json``, so :func:`make_suite` is fully reproducible.

>>> suite = make_suite(10)
>>> [fn.id for fn in suite][:3], suite[0].bias, suite[-1].bias
(['F1', 'F2', 'F3'], 300.0, 2700.0)

"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .. import conf
from ..data import load as load_data
from .functions import BASE_FUNCTIONS, BaseFunction, get_base


def _frozen(array) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def random_rotation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Orthogonal matrix from the QR factorization of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True)
class HybridSpec:
    components: tuple[tuple[BaseFunction, float], ...]
    permutation: np.ndarray

    def __post_init__(self):
        fractions = [fraction for _, fraction in self.components]
        if not np.isclose(sum(fractions), 1.0):
            raise ValueError(f'Hybrid fractions must sum to 1, got {sum(fractions)}.')
        perm = np.asarray(self.permutation, dtype=int)
        if not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise ValueError('Hybrid permutation must use every dimension exactly once.')
        perm.setflags(write=False)
        object.__setattr__(self, 'permutation', perm)

    def segments(self) -> list[slice]:
        """Contiguous index ranges of the permuted vector, one per component."""
        fractions = np.array([fraction for _, fraction in self.components])
        bounds = np.rint(np.cumsum(fractions) * self.permutation.size).astype(int)
        bounds[-1] = self.permutation.size
        starts = np.concatenate(([0], bounds[:-1]))
        return [slice(int(a), int(b)) for a, b in zip(starts, bounds, strict=True)]

    def __call__(self, z) -> float:
        z = np.asarray(z, dtype=float)[self.permutation]
        total = 0.0
        for (base, _), seg in zip(self.components, self.segments(), strict=True):
            part = z[seg]
            if part.size:
                total += base(base.shrink * part + base.optimum)
        return total


@dataclass(frozen=True)
class CompositionComponent:
    function: TestFunction
    sigma: float
    lam: float


@dataclass(frozen=True)
class CompositionSpec:
    components: tuple[CompositionComponent, ...]

    def __post_init__(self):
        if len(self.components) < 2:
            raise ValueError('A composition needs at least two components.')


@dataclass(frozen=True)
class TestFunction:
    """
    A benchmark objective on ``[-100, 100]^dim``.

    ``kind`` is one of ``base``, ``shifted_rotated``, ``hybrid`` or ``composition``.

    """

    __test__ = False  # keep pytest from collecting this class

    id: str
    name: str
    kind: str
    base: BaseFunction | HybridSpec | CompositionSpec
    dim: int
    bias: float
    seed: int | None
    shift: np.ndarray
    rotation: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'shift', _frozen(self.shift))
        object.__setattr__(self, 'rotation', _frozen(self.rotation))
        object.__setattr__(self, 'bias', float(self.bias))

    @property
    def optimum(self) -> np.ndarray:
        """Position where the function attains ``bias``."""
        return self.shift.copy()

    def raw(self, x) -> float:
        """Value without bias (nonnegative)."""
        x = np.asarray(x, dtype=float)
        if self.kind == 'base':
            return self.base(x)
        if self.kind == 'composition':
            return eval_composition(self.base, x)
        z = self.rotation @ (x - self.shift)
        if self.kind == 'hybrid':
            return self.base(z)
        return self.base(self.base.shrink * z + self.base.optimum)

    def __call__(self, x) -> float:
        return self.raw(x) + self.bias

    def digest(self) -> str:
        sha = hashlib.sha256()
        sha.update(self.shift.tobytes())
        sha.update(self.rotation.tobytes())
        if self.kind == 'hybrid':
            sha.update(self.base.permutation.tobytes())
        elif self.kind == 'composition':
            for comp in self.base.components:
                sha.update(comp.function.digest().encode())
        return sha.hexdigest()

    def describe(self) -> dict:
        record = {
            'id': self.id,
            'name': self.name,
            'kind': self.kind,
            'dim': self.dim,
            'bias': self.bias,
            'seed': self.seed,
            'sha256': self.digest(),
        }
        if self.kind in ('base', 'shifted_rotated'):
            record['base'] = self.base.id
        elif self.kind == 'hybrid':
            record['components'] = [
                {'base': base.id, 'fraction': fraction} for base, fraction in self.base.components
            ]
            record['permutation'] = self.base.permutation.tolist()
        else:
            record['components'] = [
                {
                    'base': comp.function.base.id,
                    'sigma': comp.sigma,
                    'lambda': comp.lam,
                    'bias': comp.function.bias,
                    'seed': comp.function.seed,
                }
                for comp in self.base.components
            ]
        return record


def _resolve(base) -> BaseFunction:
    return base if isinstance(base, BaseFunction) else get_base(base)


def make_shifted_rotated(
    base,
    dim: int,
    bias: float,
    seed: int,
    *,
    fn_id: str | None = None,
    name: str | None = None,
    shift_range: float = 80.0,
) -> TestFunction:
    """
    ``f(x) = base(shrink * R (x - shift) + optimum) + bias``.

    >>> fn = make_shifted_rotated('zakharov', 5, 300.0, seed=3)
    >>> fn(fn.optimum)
    300.0

    """
    if dim < 2:
        raise ValueError(f'Shifted and rotated functions need dim >= 2, got {dim}.')
    base = _resolve(base)
    rng = np.random.default_rng(seed)
    shift = rng.uniform(-shift_range, shift_range, dim)
    rotation = random_rotation(dim, rng)
    return TestFunction(
        id=fn_id or base.id,
        name=name or f'Shifted and Rotated {base.name}',
        kind='shifted_rotated',
        base=base,
        dim=dim,
        bias=bias,
        seed=seed,
        shift=shift,
        rotation=rotation,
    )


def make_hybrid(
    components,
    dim: int,
    bias: float,
    seed: int,
    *,
    fn_id: str = 'hybrid',
    name: str = 'Hybrid Function',
    shift_range: float = 80.0,
) -> TestFunction:
    rng = np.random.default_rng(seed)
    shift = rng.uniform(-shift_range, shift_range, dim)
    rotation = random_rotation(dim, rng)
    spec = HybridSpec(
        components=tuple((_resolve(base), float(fraction)) for base, fraction in components),
        permutation=rng.permutation(dim),
    )
    return TestFunction(fn_id, name, 'hybrid', spec, dim, bias, seed, shift, rotation)


def composition_weights(spec: CompositionSpec, x) -> np.ndarray:
    """
    Normalized distance weights of each component at ``x``.

    A component whose optimum coincides with ``x`` takes all the weight.

    """
    x = np.asarray(x, dtype=float)
    dim = x.size
    dist2 = np.array([np.sum((x - comp.function.shift) ** 2) for comp in spec.components])
    exact = np.flatnonzero(dist2 == 0)
    if exact.size:
        weights = np.zeros(dist2.size)
        weights[exact[0]] = 1.0
        return weights
    sigmas = np.array([comp.sigma for comp in spec.components], dtype=float)
    weights = np.exp(-dist2 / (2.0 * dim * sigmas**2)) / np.sqrt(dist2)
    total = weights.sum()
    if total == 0 or not np.isfinite(total):
        return np.full(dist2.size, 1.0 / dist2.size)
    return weights / total


def eval_composition(spec: CompositionSpec, x) -> float:
    """``sum_k w_k (lam_k (f_k(x) - b_k) + b_k)`` over the components."""
    weights = composition_weights(spec, x)
    values = np.array(
        [
            comp.lam * comp.function.raw(x) + comp.function.bias
            for comp in spec.components
        ]
    )
    return float(np.dot(weights, values))


def make_composition(
    components,
    dim: int,
    bias: float,
    seed: int | None = None,
    *,
    fn_id: str = 'composition',
    name: str = 'Composition Function',
) -> TestFunction:
    """
    Compose ``(TestFunction, sigma, lambda)`` triples.

    The first component is the designated optimum; its own bias should be 0 so
    that the composition evaluates to ``bias`` there.

    """
    spec = CompositionSpec(
        tuple(CompositionComponent(fn, float(sigma), float(lam)) for fn, sigma, lam in components)
    )
    return TestFunction(
        id=fn_id,
        name=name,
        kind='composition',
        base=spec,
        dim=dim,
        bias=bias,
        seed=seed,
        shift=spec.components[0].function.shift,
        rotation=np.eye(dim),
    )


def load_suite_definition() -> dict:
    return json.loads(load_data.readable('suite.json').read_text())


def _build(entry: dict, dim: int, shift_range: float) -> TestFunction:
    kind, seed, bias = entry['kind'], int(entry['seed']), float(entry['bias'])
    common = {'fn_id': entry['id'], 'name': entry['name']}
    if kind == 'shifted_rotated':
        return make_shifted_rotated(
            entry['base'], dim, bias, seed, shift_range=shift_range, **common
        )
    if kind == 'hybrid':
        parts = [(comp['base'], comp['fraction']) for comp in entry['components']]
        return make_hybrid(parts, dim, bias, seed, shift_range=shift_range, **common)
    if kind == 'composition':
        parts = [
            (
                make_shifted_rotated(
                    comp['base'],
                    dim,
                    comp['bias'],
                    seed * 100 + k,
                    fn_id=f'{entry["id"]}.{k}',
                    shift_range=shift_range,
                ),
                comp['sigma'],
                comp['lambda'],
            )
            for k, comp in enumerate(entry['components'])
        ]
        return make_composition(parts, dim, bias, seed, **common)
    raise ValueError(f'Unknown function kind {kind!r} for {entry["id"]}.')


@lru_cache(maxsize=8)
def make_suite(dim: int) -> tuple[TestFunction, ...]:
    """The ten suite functions ``F1`` to ``F10`` at dimension ``dim``."""
    if dim not in conf.SUPPORTED_DIMS:
        raise ValueError(
            f'Unsupported suite dimension {dim}; choose one of {conf.SUPPORTED_DIMS}.'
        )
    definition = load_suite_definition()
    shift_range = float(definition.get('shift_range', 80.0))
    return tuple(_build(entry, dim, shift_range) for entry in definition['functions'])


SUITE_IDS = tuple(f'F{k}' for k in range(1, 11))


def get_function(fn_id: str, dim: int) -> TestFunction:
    """
    Look up a suite function (``F1`` .. ``F10``) or a plain base function.

    >>> get_function('sphere', 3)(np.zeros(3))
    0.0

    """
    key = fn_id.strip()
    if key.upper() in SUITE_IDS:
        return make_suite(dim)[SUITE_IDS.index(key.upper())]
    key = key.lower()
    if key in BASE_FUNCTIONS:
        base = BASE_FUNCTIONS[key]
        return TestFunction(
            id=key,
            name=base.name,
            kind='base',
            base=base,
            dim=dim,
            bias=0.0,
            seed=None,
            shift=np.full(dim, base.optimum),
            rotation=np.eye(dim),
        )
    raise ValueError(
        f'Unknown function {fn_id!r}; use F1..F10 or one of {", ".join(BASE_FUNCTIONS)}.'
    )


def suite_manifest(dim: int, function_ids=None) -> list[dict]:
    ids = function_ids or SUITE_IDS
    return [get_function(fn_id, dim).describe() for fn_id in ids]


SUITES = {
    'cec-like': SUITE_IDS,
    'smoke': ('sphere', 'rastrigin'),
}


def resolve_functions(suite: str = 'cec-like', functions=None) -> tuple[str, ...]:
    """
    Function identifiers selected by a suite name or an explicit list.

    >>> resolve_functions('smoke')
    ('sphere', 'rastrigin')
    >>> resolve_functions(functions='f2, sphere')
    ('F2', 'sphere')

    """
    if functions:
        if isinstance(functions, str):
            functions = functions.split(',')
        ids = []
        for fn_id in functions:
            key = fn_id.strip()
            if key.upper() in SUITE_IDS:
                ids.append(key.upper())
            elif key.lower() in BASE_FUNCTIONS:
                ids.append(key.lower())
            else:
                raise ValueError(
                    f'Unknown function {fn_id!r}; use F1..F10 or one of '
                    f'{", ".join(BASE_FUNCTIONS)}.'
                )
        return tuple(ids)
    try:
        return SUITES[suite]
    except KeyError:
        raise ValueError(
            f'Unknown suite {suite!r}; choose one of {", ".join(SUITES)}.'
        ) from None
