import random
from fractions import Fraction

import pytest

import converse
import model
from conftest import auto_tradeoffs, random_network
from errors import InputError

F = Fraction


def test_unequal_n_coefficients(unequal_n):
    library = converse.concatenate(unequal_n)
    assert library.num_files == 2
    assert library.betas == (F(4, 3), F(2, 3))
    assert library.file_sizes == (1, F(1, 2))
    assert library.permutation == (1, 2)


def test_equal_n_coefficients_are_one(example_s2, equal_n3):
    for network in (example_s2, equal_n3):
        library = converse.concatenate(network)
        assert set(library.betas) == {1}


def test_libraries_are_sorted_by_file_count():
    network = model.make_config(['1/2', '1/2'], [2, 1], 2, '1/2')
    library = converse.concatenate(network)
    assert library.permutation == (2, 1)
    assert library.betas == (F(4, 3), F(2, 3))


def test_subfile_level(unequal_n):
    assert converse.subfile_level(unequal_n, 1) == 1
    assert converse.subfile_level(unequal_n, 2) == 2
    with pytest.raises(InputError):
        converse.subfile_level(unequal_n, 3)


def test_betas_average_to_one():
    rng = random.Random(5)
    for _ in range(200):
        network = random_network(rng, max_libraries=4)
        library = converse.concatenate(network)
        assert sum(library.betas) / library.num_files == 1


def test_concatenated_cutset_values(unequal_n):
    bound = converse.concatenated_cutset_bound(converse.concatenate(unequal_n), unequal_n.num_users)
    assert bound(0) == F(3, 2)
    assert bound(F(1, 2)) == F(1, 2)
    assert bound(F(3, 2)) == 0


def test_unequal_n_gap_is_open(unequal_n):
    report = converse.conjecture_gap(unequal_n, auto_tradeoffs(unequal_n))
    assert report.achievable == F(3, 4)
    assert report.converse == F(1, 2)
    assert report.converse_kind == converse.KIND_CUTSET
    assert report.status == converse.STATUS_OPEN
    assert report.to_dict()['gap'] == '1/4'


def test_example_gap_is_tight(example_s2):
    report = converse.conjecture_gap(example_s2, auto_tradeoffs(example_s2))
    assert report.converse_kind == converse.KIND_EXACT
    assert report.status == converse.STATUS_TIGHT
    assert report.achievable == F(1, 2)


def test_sandwich_on_random_configs():
    rng = random.Random(7)
    for index in range(150):
        network = random_network(rng, max_libraries=3, equal_n=index % 2 == 0)
        tradeoffs = auto_tradeoffs(network)
        report = converse.conjecture_gap(network, tradeoffs)
        assert report.converse <= report.achievable
        if len(set(network.file_counts)) == 1 and all(t.exact for t in tradeoffs):
            assert report.status == converse.STATUS_TIGHT
