import itertools

import numpy as np
import pytest

from tightdesigns import designs, hamming


@pytest.fixture(scope="session")
def repetition_dual():
    return designs.known_design("repetition-dual-5-2")


@pytest.fixture(scope="session")
def golay_dual():
    return designs.known_design("golay-dual-11-3")


@pytest.fixture(scope="session")
def repetition_derived(repetition_dual):
    return designs.derived_scheme(repetition_dual)


@pytest.fixture(scope="session")
def golay_derived(golay_dual):
    return designs.derived_scheme(golay_dual)


@pytest.fixture(scope="session")
def h42():
    """H(4, 2) built directly from its 16 words and Hamming distances."""
    words = list(itertools.product(range(2), repeat=4))
    arr = np.array(words)
    dist = (arr[:, None, :] != arr[None, :, :]).sum(axis=2)
    return designs.scheme_from_relations(words, dist)


@pytest.fixture
def full_space():
    def make(n, q):
        return hamming.PointSet.of(n, q, itertools.product(range(q), repeat=n))

    return make
