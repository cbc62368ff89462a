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
import numpy as np
import pytest

from ..suite import (
    SUITE_IDS,
    composition_weights,
    get_function,
    make_hybrid,
    make_suite,
    resolve_functions,
    suite_manifest,
)

BIASES = [300, 400, 600, 900, 2000, 2200, 2300, 2400, 2600, 2700]


@pytest.mark.parametrize('dim', [2, 10, 20])
def test_suite_optimum(dim):
    suite = make_suite(dim)
    assert [fn.id for fn in suite] == list(SUITE_IDS)
    assert [fn.bias for fn in suite] == BIASES
    for fn in suite:
        assert fn.dim == dim
        assert abs(fn(fn.optimum) - fn.bias) <= 1e-9
        assert np.all(np.abs(fn.optimum) <= 100.0)


@pytest.mark.parametrize('dim', [10, 20])
def test_suite_bias_is_a_floor(dim):
    rng = np.random.default_rng(0)
    points = rng.uniform(-100.0, 100.0, (50, dim))
    for fn in make_suite(dim):
        values = np.array([fn(x) for x in points])
        assert np.all(np.isfinite(values))
        assert np.all(values >= fn.bias)
        assert np.isfinite(fn(np.zeros(dim)))


def test_suite_is_reproducible():
    make_suite.cache_clear()
    first = [fn.digest() for fn in make_suite(10)]
    make_suite.cache_clear()
    assert [fn.digest() for fn in make_suite(10)] == first
    assert len(set(first)) == len(first)


def test_rotations_are_orthogonal():
    for fn in make_suite(10)[:5]:
        assert np.allclose(fn.rotation @ fn.rotation.T, np.eye(10))
        assert not fn.shift.flags.writeable


def test_hybrid_uses_every_dimension():
    fn = make_hybrid([('sphere', 0.3), ('rastrigin', 0.7)], 10, 100.0, seed=1)
    segments = fn.base.segments()
    assert [seg.stop - seg.start for seg in segments] == [3, 7]
    assert sorted(fn.base.permutation.tolist()) == list(range(10))
    with pytest.raises(ValueError, match='sum to 1'):
        make_hybrid([('sphere', 0.3), ('rastrigin', 0.3)], 10, 100.0, seed=1)


def test_composition_weights():
    fn = get_function('F8', 10)
    weights = composition_weights(fn.base, fn.optimum)
    assert weights.tolist() == [1.0, 0.0, 0.0, 0.0]
    weights = composition_weights(fn.base, np.full(10, 50.0))
    assert weights.sum() == pytest.approx(1.0)
    assert np.all(weights >= 0)


def test_get_function_lookup():
    assert get_function('f3', 10) is make_suite(10)[2]
    sphere = get_function('Sphere', 4)
    assert sphere.kind == 'base'
    assert sphere(np.ones(4)) == 4.0
    with pytest.raises(ValueError, match='Unknown function'):
        get_function('F11', 10)
    with pytest.raises(ValueError, match='Unsupported suite dimension'):
        get_function('F1', 7)


def test_manifest_records():
    records = suite_manifest(10)
    assert [record['id'] for record in records] == list(SUITE_IDS)
    assert records[0]['base'] == 'zakharov'
    assert records[4]['kind'] == 'hybrid'
    assert len(records[4]['permutation']) == 10
    assert records[5]['components'][1]['lambda'] == 1e-6
    assert all(len(record['sha256']) == 64 for record in records)


def test_resolve_functions():
    assert resolve_functions() == SUITE_IDS
    assert resolve_functions('cec-like', ['F1', 'levy']) == ('F1', 'levy')
    with pytest.raises(ValueError):
        resolve_functions(functions='F1,ackley')
    with pytest.raises(ValueError):
        resolve_functions('cec2017')
