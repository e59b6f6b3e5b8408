"""Shared fixtures: the bundled polytopes, built once per session.

Face lattices and change-of-basis caches live on the polytope objects,
so sharing them across test modules keeps the suite fast.
"""

import pytest

from polystrat.cli import fixture_spec
from polystrat.report import parse_spec


def _load(name):
    return parse_spec(fixture_spec(name))


@pytest.fixture(scope="session")
def pyramid():
    """(polytope, quasilattice, options) for the two-parameter pyramid."""
    return _load("pyramid")


@pytest.fixture(scope="session")
def tent():
    return _load("tent")


@pytest.fixture(scope="session")
def pyramid_unit():
    return _load("pyramid_unit")


@pytest.fixture(scope="session")
def tent_unit():
    return _load("tent_unit")


@pytest.fixture(scope="session")
def cube3():
    return _load("cube3")


@pytest.fixture(scope="session")
def simplex3():
    return _load("simplex3")
