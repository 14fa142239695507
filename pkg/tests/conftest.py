import pytest

from ultrabase import parse_newick, reciprocal_min_space, uniform_space

BALANCED_NEWICK = "((A:1,B:1):1,(C:1,D:1):1);"


@pytest.fixture
def uniform3():
    return uniform_space(3)


@pytest.fixture
def uniform4():
    return uniform_space(4)


@pytest.fixture
def recmin4():
    return reciprocal_min_space(4)


@pytest.fixture
def recmin7():
    return reciprocal_min_space(7)


@pytest.fixture
def balanced4():
    return parse_newick(BALANCED_NEWICK)
