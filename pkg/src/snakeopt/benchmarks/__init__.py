"""Benchmark test functions."""

from .functions import BASE_FUNCTIONS, eval_base
from .suite import (
    SUITE_IDS,
    SUITES,
    TestFunction,
    get_function,
    make_suite,
    resolve_functions,
    suite_manifest,
)

__all__ = [
    'BASE_FUNCTIONS',
    'SUITE_IDS',
    'SUITES',
    'TestFunction',
    'eval_base',
    'get_function',
    'make_suite',
    'resolve_functions',
    'suite_manifest',
]
