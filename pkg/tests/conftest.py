import pytest

import helpers


@pytest.fixture
def example1():
    return helpers.example1()


@pytest.fixture
def example1_td(example1):
    ntd, ids = helpers.fourteen_node_td(example1)
    return example1, ntd, ids
