# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
snakeopt's top-level module.

A snake optimizer with switchable improvement strategies, classical rival metaheuristics, a seeded
shifted/rotated benchmark suite and the experiment workflows comparing them.

API for developers
==================

.. autofunction:: snakeopt.optimizers.run_algorithm

"""

from .__about__ import (
    __copyright__,
    __credits__,
    __version__,
)
from .data import load as load_data

__all__ = [
    '__copyright__',
    '__credits__',
    '__version__',
    'load_data',
]
