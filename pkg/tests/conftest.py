import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lpmphf import MinimizerScheme, generate_spss, split_superkmers

from oracles import random_dna


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(0xC0FFEE)


@pytest.fixture(scope="session")
def small_spss():
    """~10^4 k-mers, k=31, m=15; distinct by construction."""
    return generate_spss(10_000 + 30, 31, seed=101)


@pytest.fixture(scope="session")
def medium_spss():
    """~10^5 k-mers, used where statistics need some mass."""
    return generate_spss(100_000 + 30, 31, seed=202)


def find_single_superkmer(k, m, size, seed=0, tries=5000):
    """Deterministically search for a string that is one super-k-mer of the
    requested size under scheme seed `seed`."""
    scheme = MinimizerScheme(k=k, m=m, seed=seed)
    rng = np.random.default_rng(1234)
    length = k + size - 1
    for _ in range(tries):
        s = random_dna(rng, length)
        recs = split_superkmers(s, scheme)
        if len(recs) == 1 and recs[0].size == size:
            return s, scheme
    raise AssertionError(f"no single super-k-mer of size {size} found")
