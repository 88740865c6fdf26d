from fractions import Fraction

import pytest

import model
import utils
from errors import EnumerationLimitError, InputError


def test_example_config_loads(example_s2):
    assert example_s2.num_libraries == 2
    assert example_s2.alphas == (Fraction(2, 5), Fraction(3, 5))
    assert example_s2.file_counts == (2, 2)
    assert example_s2.cache_size == 1
    assert model.validate(example_s2) == []


def test_bad_normalization_is_reported():
    network = model.make_config(['1/2', '1/3'], [2, 2], 2, 1)
    violations = model.validate(network)
    assert any('normalization sum = 5/6 ≠ 1' in v for v in violations)
    with pytest.raises(InputError):
        model.require_valid(network)


def test_nonpositive_fields_are_reported():
    network = model.make_config([1], [0], 0, -1)
    violations = model.validate(network)
    assert len(violations) == 3


def test_cache_above_content_is_clamped_on_load(tmp_path):
    path = tmp_path / 'big.json'
    utils.save_json(str(path), {
        'libraries': [{'num_files': 2, 'alpha': '1/2'}, {'num_files': 1, 'alpha': '1/2'}],
        'num_users': 2,
        'cache_size': '5',
    })
    network = model.load_config(str(path))
    assert network.cache_size == Fraction(3, 2)

    raw = model.config_from_dict(utils.load_json(str(path)), clamp=False)
    assert any('total content' in v for v in model.validate(raw))


def test_float_values_are_rejected():
    with pytest.raises(InputError):
        model.config_from_dict({'libraries': [{'num_files': 2, 'alpha': 1.0}], 'num_users': 1, 'cache_size': '0'})


def test_missing_field_is_input_error():
    with pytest.raises(InputError):
        model.config_from_dict({'libraries': [], 'num_users': 1})


def test_missing_file_is_input_error(tmp_path):
    with pytest.raises(InputError):
        model.load_config(str(tmp_path / 'none.json'))


def test_save_and_load_config(tmp_path, unequal_n):
    path = str(tmp_path / 'out' / 'net.json')
    model.save_config(path, unequal_n)
    assert model.load_config(path) == unequal_n


def test_demands_are_enumerated_in_lexicographic_order(example_s2):
    demands = list(model.enumerate_demands(example_s2))
    assert len(demands) == model.demand_count(example_s2) == 16
    assert demands[0].to_list() == [[1, 1], [1, 1]]
    assert demands[1].to_list() == [[1, 1], [1, 2]]
    assert demands[-1].to_list() == [[2, 2], [2, 2]]
    assert demands[5].request(1, 2) == 2


def test_enumeration_cap(example_s2):
    with pytest.raises(EnumerationLimitError) as excinfo:
        list(model.enumerate_demands(example_s2, cap=15))
    assert excinfo.value.count == 16
    assert excinfo.value.cap == 15


def test_demand_out_of_range(unequal_n):
    with pytest.raises(InputError):
        model.validate_demand(unequal_n, model.DemandVector([[2, 1], [1, 2]]))


def test_fractional_counts_are_rejected():
    for libraries, num_users in (
        ([{'num_files': 2.9, 'alpha': '1'}], 2),
        ([{'num_files': 2, 'alpha': '1'}], 1.7),
        ([{'num_files': True, 'alpha': '1'}], 2),
        ([{'num_files': 2, 'alpha': '1'}], True),
    ):
        with pytest.raises(InputError):
            model.config_from_dict({'libraries': libraries, 'num_users': num_users, 'cache_size': '0'})
