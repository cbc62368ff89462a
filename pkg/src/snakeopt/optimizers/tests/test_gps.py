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
"""Tests for good-point-set initialization."""

import numpy as np
import pytest
from scipy.stats import qmc

from ..base import SearchSpace
from ..gps import (
    centered_discrepancy,
    good_point_generators,
    good_point_set,
    gps_initialize,
    is_prime,
    smallest_prime,
)


@pytest.mark.parametrize('dim', [1, 2, 5, 10, 20, 30])
def test_smallest_prime(dim):
    p = smallest_prime(dim)
    assert is_prime(p)
    assert (p - 3) / 2 > dim
    assert not any(is_prime(q) and (q - 3) / 2 > dim for q in range(2, p))


def test_generators():
    params = good_point_generators(30, 10)
    assert params.p == 29
    assert np.allclose(params.r, 2 * np.cos(2 * np.pi * np.arange(1, 11) / 29))


@pytest.mark.parametrize(('n', 'dim'), [(30, 2), (50, 10), (100, 20)])
def test_good_point_set_in_unit_cube(n, dim):
    points = good_point_set(n, dim)
    assert points.shape == (n, dim)
    assert np.all(points >= 0.0)
    assert np.all(points < 1.0)
    assert np.array_equal(points, good_point_set(n, dim))


def test_good_point_set_invalid():
    with pytest.raises(ValueError):
        good_point_set(0, 3)
    with pytest.raises(ValueError):
        smallest_prime(0)


def test_gps_initialize_maps_into_space():
    space = SearchSpace([-5.0, 0.0, 10.0], [5.0, 1.0, 20.0])
    pop = gps_initialize(space, 40)
    assert pop.size == 40
    assert space.contains(pop.positions)
    assert np.all(np.isnan(pop.fitness))


@pytest.mark.parametrize('dim', [2, 5, 10])
def test_gps_is_more_uniform_than_random(dim):
    n = 30
    gps = centered_discrepancy(good_point_set(n, dim))
    assert gps == pytest.approx(qmc.discrepancy(good_point_set(n, dim), method='CD'))
    wins = 0
    for repetition in range(20):
        rng = np.random.default_rng([dim, repetition])
        random = np.median([centered_discrepancy(rng.random((n, dim))) for _ in range(100)])
        wins += gps < random
    assert wins >= 18
