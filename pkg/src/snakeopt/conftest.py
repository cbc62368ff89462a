import os

import numpy as np
import pytest

from snakeopt.data import load

os.environ['NO_ET'] = '1'


def pytest_addoption(parser):
    parser.addoption(
        '--runslow', action='store_true', default=False, help='run full-scale experiments'
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _populate_namespace(doctest_namespace, tmp_path):
    doctest_namespace['os'] = os
    doctest_namespace['np'] = np
    doctest_namespace['load'] = load
    doctest_namespace['testdir'] = tmp_path
