"""Shared fixtures: the expensive root sets and assembled attractors.

Everything here is session-scoped and lazy, so running a single unit
module never pays for the degree-1000 root computation; the acceptance
module requests the large fixtures and shares them across criteria.
"""

import pytest

from attractorlab import (
    ExponentSequence,
    attractor_set,
    find_roots,
    generate,
    generate_single,
)


@pytest.fixture(scope="session")
def allp():
    return ExponentSequence.all_parts()


@pytest.fixture(scope="session")
def odd():
    return ExponentSequence.odd_parts()


@pytest.fixture(scope="session")
def r13():
    return ExponentSequence.residue(1, 3)


@pytest.fixture(scope="session")
def all_polys_400(allp):
    return generate(allp, 400)


@pytest.fixture(scope="session")
def att_all(allp):
    return attractor_set(allp)


@pytest.fixture(scope="session")
def att_odd(odd):
    return attractor_set(odd)


@pytest.fixture(scope="session")
def att_r13(r13):
    return attractor_set(r13)


def _rootset(seq, n):
    return find_roots(generate_single(seq, n))


@pytest.fixture(scope="session")
def roots_all_200(allp):
    return _rootset(allp, 200)


@pytest.fixture(scope="session")
def roots_all_500(allp):
    return _rootset(allp, 500)


@pytest.fixture(scope="session")
def roots_all_1000(allp):
    return _rootset(allp, 1000)


@pytest.fixture(scope="session")
def roots_odd_200(odd):
    return _rootset(odd, 200)


@pytest.fixture(scope="session")
def roots_odd_500(odd):
    return _rootset(odd, 500)


@pytest.fixture(scope="session")
def roots_r13_500(r13):
    return _rootset(r13, 500)
