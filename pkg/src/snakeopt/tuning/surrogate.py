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
A small trajectory-prediction task used as a black-box tuning objective.

Synthetic flights (altitude, longitude, latitude) follow a climb, cruise and descent
profile with smooth lateral drift and measurement noise.
Six consecutive fixes predict the next one with a one-hidden-layer perceptron whose
batch size, learning rate and hidden width are the tuned hyperparameters.

"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.metrics import mean_squared_error
from sklearn.neural_network import MLPRegressor
from sklearn.preprocessing import MinMaxScaler

from ..optimizers.base import SearchSpace

WINDOW = 6
EPOCHS = 30
PENALTY = 1e6
FEATURES = ('altitude', 'longitude', 'latitude')


@dataclass(frozen=True)
class HyperBox:
    """
    Hyperparameter ranges, encoded as ``(batch, lr, nodes)`` vectors.

    >>> box = HyperBox()
    >>> box.decode([15.2, 0.5, 120.6])
    {'batch': 16, 'lr': 0.02, 'nodes': 121}
    >>> box.encode({'batch': 32, 'lr': 0.001, 'nodes': 64}).tolist()
    [32.0, 0.001, 64.0]

    """

    batch: tuple[int, int] = (16, 128)
    lr: tuple[float, float] = (0.0001, 0.02)
    nodes: tuple[int, int] = (50, 200)

    @property
    def space(self) -> SearchSpace:
        return SearchSpace(
            [self.batch[0], self.lr[0], self.nodes[0]],
            [self.batch[1], self.lr[1], self.nodes[1]],
        )

    def decode(self, vector) -> dict:
        batch, lr, nodes = np.asarray(vector, dtype=float)
        return {
            'batch': int(np.clip(np.rint(batch), *self.batch)),
            'lr': float(np.clip(lr, *self.lr)),
            'nodes': int(np.clip(np.rint(nodes), *self.nodes)),
        }

    def encode(self, hp: dict) -> np.ndarray:
        return np.array([hp['batch'], hp['lr'], hp['nodes']], dtype=float)


HYPER_BOX = HyperBox()


@dataclass(frozen=True)
class SurrogateDataset:
    X_train: np.ndarray
    y_train: np.ndarray
    X_val: np.ndarray
    y_val: np.ndarray
    scaler: MinMaxScaler
    seed: int
    n_sequences: int
    n_val_sequences: int
    window: int = WINDOW

    @property
    def val_fraction(self) -> float:
        return self.X_val.shape[0] / (self.X_val.shape[0] + self.X_train.shape[0])

    def denormalize(self, y) -> np.ndarray:
        return self.scaler.inverse_transform(np.asarray(y, dtype=float).reshape(-1, 3))


def _flight(rng, length):
    t = np.linspace(0.0, 1.0, length)
    cruise = rng.uniform(8000.0, 11000.0)
    climb_end = rng.uniform(0.2, 0.35)
    descent_start = rng.uniform(0.65, 0.8)
    climb = np.clip(t / climb_end, 0.0, 1.0)
    descent = np.clip((1.0 - t) / (1.0 - descent_start), 0.0, 1.0)
    # smoothstep on both ramps
    profile = np.minimum(climb**2 * (3 - 2 * climb), descent**2 * (3 - 2 * descent))
    altitude = 300.0 + (cruise - 300.0) * profile + rng.normal(0.0, 30.0, length)
    heading = rng.uniform(0.0, 2.0 * np.pi)
    span = rng.uniform(3.0, 8.0)
    wobble = rng.uniform(0.05, 0.3) * np.sin(2.0 * np.pi * rng.uniform(0.5, 2.0) * t)
    longitude = rng.uniform(105.0, 120.0) + span * t * np.cos(heading) + wobble
    latitude = rng.uniform(25.0, 35.0) + span * t * np.sin(heading) - 0.5 * wobble
    longitude = longitude + rng.normal(0.0, 0.005, length)
    latitude = latitude + rng.normal(0.0, 0.005, length)
    return np.column_stack((altitude, longitude, latitude))


def _windows(sequences, window):
    inputs, targets = [], []
    for seq in sequences:
        for start in range(seq.shape[0] - window):
            inputs.append(seq[start : start + window].ravel())
            targets.append(seq[start + window])
    return np.array(inputs), np.array(targets)


def gen_dataset(
    seed: int = 0,
    n_sequences: int = 20,
    length: int = 30,
    val_fraction: float = 0.2,
    window: int = WINDOW,
) -> SurrogateDataset:
    """
    Generate, scale and split synthetic flights.

    Validation takes whole flights (the last ``val_fraction`` of them); the scaler
    is fitted on training flights only and validation features are clipped into
    ``[0, 1]``.

    """
    if n_sequences < 10:
        raise ValueError(f'Need at least 10 sequences, got {n_sequences}.')
    if length <= window:
        raise ValueError(f'Sequences of length {length} are too short for window {window}.')
    rng = np.random.default_rng(seed)
    flights = [_flight(rng, length) for _ in range(n_sequences)]
    n_val = max(1, int(round(val_fraction * n_sequences)))
    train, val = flights[:-n_val], flights[-n_val:]

    scaler = MinMaxScaler().fit(np.vstack(train))
    train = [scaler.transform(seq) for seq in train]
    val = [np.clip(scaler.transform(seq), 0.0, 1.0) for seq in val]
    X_train, y_train = _windows(train, window)
    X_val, y_val = _windows(val, window)
    return SurrogateDataset(
        X_train=X_train,
        y_train=y_train,
        X_val=X_val,
        y_val=y_val,
        scaler=scaler,
        seed=seed,
        n_sequences=n_sequences,
        n_val_sequences=n_val,
        window=window,
    )


def build_model(hp: dict, seed: int) -> MLPRegressor:
    return MLPRegressor(
        hidden_layer_sizes=(hp['nodes'],),
        activation='tanh',
        solver='sgd',
        learning_rate='constant',
        learning_rate_init=hp['lr'],
        momentum=0.0,
        batch_size=hp['batch'],
        max_iter=EPOCHS,
        n_iter_no_change=EPOCHS,
        tol=0.0,
        shuffle=True,
        random_state=seed,
    )


def parameter_count(nodes: int, window: int = WINDOW) -> int:
    """
    >>> parameter_count(50)
    1103

    """
    inputs = 3 * window
    return (inputs + 1) * nodes + (nodes + 1) * 3


def _fit_predict(hp: dict, data: SurrogateDataset, seed: int):
    model = build_model(hp, seed)
    with warnings.catch_warnings(), np.errstate(all='ignore'):
        warnings.simplefilter('ignore', ConvergenceWarning)
        warnings.simplefilter('ignore', UserWarning)
        model.fit(data.X_train, data.y_train)
        return model.predict(data.X_val)


def train_eval(hp, data: SurrogateDataset, seed: int = 0) -> float:
    """
    Validation MSE of the surrogate trained with ``hp``.

    ``hp`` is a dict or an encoded vector; diverging runs cost :data:`PENALTY`.

    """
    if not isinstance(hp, dict):
        hp = HYPER_BOX.decode(hp)
    hp = HYPER_BOX.decode(HYPER_BOX.encode(hp))
    try:
        prediction = _fit_predict(hp, data, seed)
    except (ValueError, FloatingPointError, OverflowError):
        return PENALTY
    if not np.all(np.isfinite(prediction)):
        return PENALTY
    loss = float(mean_squared_error(data.y_val, prediction))
    return loss if np.isfinite(loss) else PENALTY


def predict(hp: dict, data: SurrogateDataset, seed: int = 0) -> np.ndarray:
    """Validation predictions in original units."""
    return data.denormalize(_fit_predict(hp, data, seed))
