from __future__ import annotations

import pytest

from tw_generators import random_chain, triad

CORPUS_SIZE = 200


def corpus_chain(seed: int):
    """Seeded member of the randomized corpus: n in 4..12."""
    return random_chain(4 + seed % 9, seed=seed, sparsity=0.5, class_fractions=(0.4, 0.3, 0.3))


@pytest.fixture(scope="session")
def corpus():
    return [corpus_chain(seed) for seed in range(CORPUS_SIZE)]


@pytest.fixture()
def tri():
    return triad()
