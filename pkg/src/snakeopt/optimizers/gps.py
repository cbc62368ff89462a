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
"""Good-point-set initialization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .base import Population, SearchSpace


@dataclass(frozen=True)
class GoodPointParams:
    n: int
    s: int
    p: int
    r: np.ndarray


def is_prime(n: int) -> bool:
    """
    Trial-division primality.

    >>> [k for k in range(20) if is_prime(k)]
    [2, 3, 5, 7, 11, 13, 17, 19]

    """
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def smallest_prime(s: int) -> int:
    """
    Smallest prime ``p`` with ``(p - 3) / 2 > s``.

    >>> smallest_prime(1), smallest_prime(3), smallest_prime(10)
    (7, 11, 29)

    """
    if s < 1:
        raise ValueError(f'Dimension must be positive, got {s}.')
    p = 2 * s + 4  # (p - 3) / 2 > s  <=>  p >= 2s + 4
    while not is_prime(p):
        p += 1
    return p


def good_point_generators(n: int, s: int) -> GoodPointParams:
    p = smallest_prime(s)
    r = 2.0 * np.cos(2.0 * np.pi * np.arange(1, s + 1) / p)
    return GoodPointParams(n=n, s=s, p=p, r=r)


def good_point_set(n: int, s: int) -> np.ndarray:
    """
    ``n`` good points in the unit cube ``[0, 1)^s``.

    >>> np.round(good_point_set(1, 1), 5)
    array([[0.24698]])

    """
    if n < 1 or s < 1:
        raise ValueError(f'Need n >= 1 and s >= 1, got n={n}, s={s}.')
    params = good_point_generators(n, s)
    values = np.arange(1, n + 1)[:, np.newaxis] * params.r[np.newaxis, :]
    # generators can be negative; x - floor(x) keeps every coordinate in [0, 1)
    points = values - np.floor(values)
    points[points >= 1.0] = 0.0
    return points


def gps_initialize(space: SearchSpace, n: int) -> Population:
    """Map the good point set affinely into ``space``; no randomness involved."""
    if n < 2:
        raise ValueError(f'A population needs at least 2 members, got {n}.')
    points = good_point_set(n, space.dim)
    return Population(space.lower + points * space.width)


def centered_discrepancy(points) -> float:
    """Centered L2 discrepancy of points in the unit cube."""
    return float(qmc.discrepancy(np.asarray(points, dtype=float), method='CD'))
