from fractions import Fraction

import pytest

import config
import model
import tradeoff as tr

EXAMPLE_FILES = {
    'example_s2.json': config.EXAMPLE_S2_FILE,
    'unequal_n.json': config.UNEQUAL_N_FILE,
    'equal_n3.json': config.EQUAL_N3_FILE,
}


def data_path(name):
    return EXAMPLE_FILES[name]


@pytest.fixture
def example_s2():
    return model.load_config(data_path('example_s2.json'))


@pytest.fixture
def unequal_n():
    return model.load_config(data_path('unequal_n.json'))


@pytest.fixture
def equal_n3():
    return model.load_config(data_path('equal_n3.json'))


def random_alphas(rng, size):
    weights = [rng.randint(1, 6) for _ in range(size)]
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def random_cache_size(rng, alphas, file_counts, denominator=4):
    content = sum((a * n for a, n in zip(alphas, file_counts)), Fraction(0))
    return min(Fraction(rng.randint(0, 4 * denominator), denominator), content)


def random_network(rng, max_libraries=3, max_files=4, max_users=4, equal_n=False):
    size = rng.randint(1, max_libraries)
    alphas = random_alphas(rng, size)
    if equal_n:
        file_counts = [rng.randint(1, max_files)] * size
    else:
        file_counts = [rng.randint(1, max_files) for _ in range(size)]
    num_users = rng.randint(1, max_users)
    return model.make_config(alphas, file_counts, num_users, random_cache_size(rng, alphas, file_counts))


def auto_tradeoffs(network):
    return [tr.resolve_tradeoff(tr.KIND_AUTO, lib.num_files, network.num_users) for lib in network.libraries]
