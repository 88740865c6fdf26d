import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

import allocation
import model
import sim
import tradeoff as tr
from conftest import random_alphas
from errors import DivisibilityError, InputError, VerificationError

F = Fraction


def greedy_scheme_allocation(network):
    return allocation.greedy_allocate(network, allocation.tradeoffs_for(network, tr.KIND_SCHEME)).final


def test_example_verification(example_s2):
    alloc = greedy_scheme_allocation(example_s2)
    assert alloc.per_library == (F(2, 5), F(3, 5))
    report = sim.run_verification(example_s2, alloc, seed=11)
    assert report.demands_checked == 16
    assert report.base_size == 10
    assert report.max_transcript_bits == 5
    assert report.measured_rate == F(1, 2) == report.formula_rate
    assert report.library_bits == (2, 3)
    assert report.seed == 11


def test_unequal_n_verification(unequal_n):
    alloc = greedy_scheme_allocation(unequal_n)
    assert alloc.per_library == (0, F(1, 2))
    report = sim.run_verification(unequal_n, alloc)
    assert report.base_size == 4
    assert report.max_transcript_bits == 3
    assert report.measured_rate == F(3, 4)


def test_memory_sharing_inside_a_library(example_s2):
    # M_ℓ/α không nằm ở góc: trộn t = 0 và t = 1
    network = example_s2.with_cache_size(F(1, 2))
    alloc = allocation.proportional_allocation(network)
    report = sim.run_verification(network, alloc)
    assert report.measured_rate == report.formula_rate == F(5, 4)


def test_required_base_size(example_s2):
    alloc = allocation.Allocation((F(2, 5), F(3, 5)))
    assert sim.required_base_size(example_s2, alloc) == 10
    with pytest.raises(DivisibilityError) as excinfo:
        sim.select_base_size(example_s2, alloc, base_size=15)
    assert excinfo.value.required_multiple == 10
    assert sim.select_base_size(example_s2, alloc, base_size=20) == 20
    with pytest.raises(DivisibilityError):
        sim.select_base_size(example_s2, alloc, budget=5)


def test_placement_cache_sizes(example_s2):
    alloc = allocation.Allocation((F(2, 5), F(3, 5)))
    store = sim.make_file_store(example_s2, 10, seed=1)
    placement = sim.place(store, example_s2, alloc)
    for user in (1, 2):
        assert placement.segment(user, 1).size == 4
        assert placement.segment(user, 2).size == 6
        assert placement.cache_bits(user) == example_s2.cache_size * 10


def test_file_store_is_seeded(example_s2):
    first = sim.make_file_store(example_s2, 10, seed=3)
    second = sim.make_file_store(example_s2, 10, seed=3)
    assert all(
        np.array_equal(first.file(lib, n), second.file(lib, n)) for lib in (1, 2) for n in (1, 2)
    )
    assert first.file(2, 1).size == 6


def test_libraries_are_served_independently(example_s2):
    alloc = allocation.Allocation((F(2, 5), F(3, 5)))
    store = sim.make_file_store(example_s2, 10, seed=5)
    demand = model.DemandVector([[1, 2], [2, 1]])
    placement = sim.place(store, example_s2, alloc)
    transcript = sim.deliver(store, example_s2, placement, demand)

    changed = store.replace_file(2, 1, 1 - store.file(2, 1))
    changed_placement = sim.place(changed, example_s2, alloc)
    again = sim.deliver(changed, example_s2, changed_placement, demand)
    for user in (1, 2):
        assert np.array_equal(placement.segment(user, 1), changed_placement.segment(user, 1))
        assert not np.array_equal(placement.segment(user, 2), changed_placement.segment(user, 2))
    assert np.array_equal(transcript.payload(1), again.payload(1))
    assert not np.array_equal(transcript.payload(2), again.payload(2))


def test_decode_failure_is_reported(example_s2, monkeypatch):
    alloc = allocation.Allocation((F(2, 5), F(3, 5)))
    store = sim.make_file_store(example_s2, 10)
    original = sim.deliver

    def corrupt(*args):
        transcript = original(*args)
        payloads = list(transcript.payloads)
        payloads[0] = 1 - payloads[0]
        return sim.DeliveryTranscript(transcript.demand, tuple(payloads), transcript.total_bits)

    monkeypatch.setattr(sim, 'deliver', corrupt)
    with pytest.raises(VerificationError) as excinfo:
        sim.verify_all(store, example_s2, alloc)
    assert excinfo.value.witness['demand'] == [[1, 1], [1, 1]]


def test_mismatched_allocation_rejected(example_s2):
    store = sim.make_file_store(example_s2, 10)
    with pytest.raises(InputError):
        sim.place(store, example_s2, allocation.Allocation((F(1, 5), F(3, 5))))


def _random_corner_network(rng):
    while True:
        size = rng.randint(1, 2)
        file_counts = [rng.randint(1, 3) for _ in range(size)]
        num_users = rng.randint(1, 3)
        if math.prod(n ** num_users for n in file_counts) <= 1024:
            break
    alphas = random_alphas(rng, size)
    shares = []
    for alpha, n in zip(alphas, file_counts):
        curve = tr.build_centralized_scheme_tradeoff(n, num_users)
        shares.append(rng.choice(curve.breakpoints) * alpha)
    network = model.make_config(alphas, file_counts, num_users, sum(shares, F(0)))
    return network, allocation.Allocation(tuple(shares))


def test_random_corner_allocations_decode():
    rng = random.Random(6)
    for seed in range(20):
        network, alloc = _random_corner_network(rng)
        report = sim.run_verification(network, alloc, seed=seed)
        assert report.demands_checked == model.demand_count(network)
        assert report.measured_rate == report.formula_rate


def test_reduction_recovers_concatenated_files(unequal_n):
    alloc = greedy_scheme_allocation(unequal_n)
    store = sim.make_file_store(unequal_n, 4)
    placement = sim.place(store, unequal_n, alloc)
    report = sim.reduction_demo(unequal_n, store, alloc, (2, 1), placement)
    assert report.induced_demand.to_list() == [[1, 1], [2, 1]]
    assert report.recovered_bits == (2, 4)
    assert report.discarded == 1

    induced = sim.deliver(store, unequal_n, placement, report.induced_demand)
    assert report.transcript_bits == induced.total_bits
    assert all(np.array_equal(a, b) for a, b in zip(report.transcript.payloads, induced.payloads))

    for demand_prime in itertools.product(range(1, 3), repeat=unequal_n.num_users):
        report = sim.reduction_demo(unequal_n, store, alloc, demand_prime, placement)
        expected = sim.deliver(store, unequal_n, placement, report.induced_demand)
        assert len(report.transcript.payloads) == len(expected.payloads) == unequal_n.num_libraries
        for ours, theirs in zip(report.transcript.payloads, expected.payloads):
            assert ours.dtype == theirs.dtype
            assert ours.tobytes() == theirs.tobytes()

    summary = sim.verify_reduction(unequal_n, store, alloc)
    assert summary.demands_checked == 4
    assert summary.max_transcript_bits == 3


def test_reduction_rejects_bad_demand(unequal_n):
    alloc = greedy_scheme_allocation(unequal_n)
    store = sim.make_file_store(unequal_n, 4)
    with pytest.raises(InputError):
        sim.reduction_demo(unequal_n, store, alloc, (3, 1))


def test_binary_dump_round_trip(example_s2, tmp_path):
    alloc = allocation.Allocation((F(2, 5), F(3, 5)))
    store = sim.make_file_store(example_s2, 10, seed=9)
    placement = sim.place(store, example_s2, alloc)
    demand = next(model.enumerate_demands(example_s2))
    transcript = sim.deliver(store, example_s2, placement, demand)
    path = tmp_path / 'run.bin'

    count = sim.dump_binary(str(path), store, placement, transcript)
    assert count == 4 + 4 + 2

    records = sim.load_binary_dump(str(path))
    expected = [bits for row in store.files for bits in row]
    expected += [segment for cache in placement.caches for segment in cache]
    expected += list(transcript.payloads)
    assert len(records) == count
    assert all(np.array_equal(a, b) for a, b in zip(records, expected))
    assert path.read_bytes()[:4] == b'\x00\x00\x00\x0a'


def test_nonpositive_base_size_rejected(example_s2):
    alloc = allocation.Allocation((F(2, 5), F(3, 5)))
    for base_size in (0, -10):
        with pytest.raises(InputError):
            sim.select_base_size(example_s2, alloc, base_size=base_size)
        with pytest.raises(InputError):
            sim.make_file_store(example_s2, base_size)
        with pytest.raises(InputError):
            sim.build_plans(example_s2, alloc, base_size)
