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
"""Analytic base functions, each with minimum 0 at a known point."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np


def sphere(x):
    return float(np.sum(x**2))


def zakharov(x):
    """
    >>> zakharov(np.array([1.0, 1.0]))
    9.3125

    """
    weighted = np.sum(0.5 * np.arange(1, x.size + 1) * x)
    return float(np.sum(x**2) + weighted**2 + weighted**4)


def rosenbrock(x):
    """
    >>> rosenbrock(np.zeros(2)), rosenbrock(np.ones(5))
    (1.0, 0.0)

    """
    head, tail = x[:-1], x[1:]
    return float(np.sum(100.0 * (tail - head**2) ** 2 + (head - 1.0) ** 2))


def _schaffer_pair(x, y):
    r2 = x**2 + y**2
    return 0.5 + (np.sin(np.sqrt(r2)) ** 2 - 0.5) / (1.0 + 0.001 * r2) ** 2


def schaffer_f6_expanded(x):
    """Schaffer's F6 summed over consecutive pairs, wrapping the last onto the first."""
    return float(np.sum(_schaffer_pair(x, np.roll(x, -1))))


def levy(x):
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[0]) ** 2
    body = np.sum((w[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[:-1] + 1.0) ** 2))
    tail = (w[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[-1]) ** 2)
    return float(head + body + tail)


def rastrigin(x):
    return float(10.0 * x.size + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x)))


def high_conditioned_elliptic(x):
    if x.size == 1:
        return float(x[0] ** 2)
    exponents = np.arange(x.size) / (x.size - 1)
    return float(np.sum(1e6**exponents * x**2))


@dataclass(frozen=True)
class BaseFunction:
    """
    A base landscape.

    ``optimum`` is the per-component location of the minimum, and ``shrink`` maps the
    ``[-100, 100]`` search range onto the function's natural domain.

    """

    id: str
    name: str
    func: Callable[[np.ndarray], float]
    optimum: float = 0.0
    shrink: float = 1.0

    def __call__(self, x) -> float:
        return self.func(np.asarray(x, dtype=float))

    def optimum_point(self, dim: int) -> np.ndarray:
        return np.full(dim, self.optimum)


BASE_FUNCTIONS = {
    fn.id: fn
    for fn in (
        BaseFunction('sphere', 'Sphere', sphere),
        BaseFunction('zakharov', 'Zakharov', zakharov),
        BaseFunction('rosenbrock', "Rosenbrock's", rosenbrock, optimum=1.0, shrink=0.02048),
        BaseFunction('schaffer_f6', "Expanded Schaffer's F6", schaffer_f6_expanded),
        BaseFunction('levy', 'Levy', levy, optimum=1.0),
        BaseFunction('rastrigin', 'Rastrigin', rastrigin, shrink=0.0512),
        BaseFunction('elliptic', 'High Conditioned Elliptic', high_conditioned_elliptic),
    )
}


def get_base(fn_id: str) -> BaseFunction:
    try:
        return BASE_FUNCTIONS[fn_id]
    except KeyError:
        raise ValueError(
            f'Unknown base function {fn_id!r}; choose one of {", ".join(BASE_FUNCTIONS)}.'
        ) from None


def eval_base(fn_id: str, x) -> float:
    """
    Evaluate a base function by identifier.

    >>> eval_base('zakharov', [0.0, 0.0]), eval_base('schaffer_f6', [0.0, 0.0])
    (0.0, 0.0)

    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError('Base functions are defined on finite vectors only.')
    return get_base(fn_id)(x)
