"""Shared fixtures: completed straightening algebras are built once."""

import pytest

from mpqg import coeff as C
from mpqg.cartan import build_datum
from mpqg.pbw import build_pbw_algebra


def _generic_algebra(name):
    datum = build_datum(name)
    ring = C.RingDescriptor(datum, "generic", "formal")
    return build_pbw_algebra(datum, ring)


@pytest.fixture(scope="session")
def alg_a1():
    return _generic_algebra("A1")


@pytest.fixture(scope="session")
def alg_a2():
    return _generic_algebra("A2")


@pytest.fixture(scope="session")
def alg_b2():
    return _generic_algebra("B2")


@pytest.fixture(scope="session")
def alg_a3():
    return _generic_algebra("A3")


@pytest.fixture(scope="session", params=["A1", "A2", "B2"])
def alg_small(request):
    return _generic_algebra(request.param)


@pytest.fixture(scope="session", params=["A1", "A2", "B2", "A3"])
def alg_any(request):
    return _generic_algebra(request.param)
