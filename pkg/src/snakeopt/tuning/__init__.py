"""
Desk-scale hyperparameter tuning demo.

.. autofunction:: gen_dataset
.. autofunction:: train_eval
.. autofunction:: tune
.. autofunction:: compare_tuners

"""

from .surrogate import HYPER_BOX, HyperBox, SurrogateDataset, gen_dataset, train_eval
from .tune import TuneResult, compare_tuners, tune, write_tune_outputs

__all__ = [
    'HYPER_BOX',
    'HyperBox',
    'SurrogateDataset',
    'TuneResult',
    'compare_tuners',
    'gen_dataset',
    'train_eval',
    'tune',
    'write_tune_outputs',
]
