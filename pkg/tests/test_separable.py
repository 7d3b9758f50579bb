import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unitary
from qsle import (DomainError, OptConfig, Partition, ProductState, PureState, assemble,
                  basis_state, brute_force_overlap, geometric_entanglement, haar_random_state,
                  inner_product, max_overlap_for_partition, oracle_entanglement,
                  schmidt_overlap)
from qsle.errors import ConsistencyError
from qsle.partitions import enumerate_partitions
from qsle.separable import entanglement_from_overlap, entanglement_hierarchy


def test_product_input_overlap_one():
    psi = basis_state((2, 2, 2), (0, 0, 0))
    for m in (1, 2, 3):
        for p in enumerate_partitions(3, m):
            assert max_overlap_for_partition(psi, p).overlap == pytest.approx(1.0, abs=1e-12)


def test_bell_overlap_against_grid(bell):
    p = Partition.trivial(2)
    expected = brute_force_overlap(bell, p, 64)
    res = max_overlap_for_partition(bell, p)
    assert res.overlap == pytest.approx(expected, abs=1e-8)
    assert res.overlap == pytest.approx(1 / np.sqrt(2), abs=1e-8)


def test_ghz_bipartition_overlap(ghz3):
    p = Partition(((0,), (1, 2)))
    res = max_overlap_for_partition(ghz3, p)
    assert res.overlap == pytest.approx(brute_force_overlap(ghz3, p, 64), abs=1e-8)
    assert res.overlap == pytest.approx(1 / np.sqrt(2), abs=1e-8)


def test_result_overlap_matches_product(w3):
    res = max_overlap_for_partition(w3, Partition.trivial(3))
    assert abs(inner_product(w3, assemble(res.product))) == pytest.approx(res.overlap, abs=1e-10)
    assert res.converged


def test_known_values(bell, ghz3, w3):
    assert geometric_entanglement(bell, 2)[0] == pytest.approx(0.5, abs=1e-8)
    assert geometric_entanglement(w3, 3)[0] == pytest.approx(5 / 9, abs=1e-6)
    assert geometric_entanglement(w3, 2)[0] == pytest.approx(1 / 3, abs=1e-6)
    assert geometric_entanglement(ghz3, 2)[0] == pytest.approx(0.5, abs=1e-6)
    assert geometric_entanglement(ghz3, 3)[0] == pytest.approx(0.5, abs=1e-6)


def test_fully_product_input_is_faithful():
    rng = np.random.default_rng(0)
    dims = (2, 3, 2)
    p = Partition.trivial(3)
    vecs = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for d in dims]
    psi = assemble(ProductState.from_vectors(p, [v / np.linalg.norm(v) for v in vecs], dims))
    for m in (2, 3):
        assert geometric_entanglement(psi, m)[0] < 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_faithful_on_coarser_products(seed):
    dims = (2, 2, 2, 2)
    for k, p in enumerate(enumerate_partitions(4, 3)):
        rng = np.random.default_rng([seed, k])
        vecs = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for d in p.block_dims(dims)]
        psi = assemble(ProductState.from_vectors(p, [v / np.linalg.norm(v) for v in vecs], dims))
        assert geometric_entanglement(psi, 3)[0] < 1e-9
        assert geometric_entanglement(psi, 2)[0] < 1e-9


def test_domain_errors(bell, w3):
    with pytest.raises(DomainError):
        geometric_entanglement(bell, 1)
    with pytest.raises(DomainError):
        geometric_entanglement(w3, 4)


def test_clamp_and_tripwire():
    assert entanglement_from_overlap(1.0 + 1e-12) == 0.0
    with pytest.raises(ConsistencyError):
        entanglement_from_overlap(1.0 + 1e-6)


def test_config_validation():
    for kw in ({"restarts": 0}, {"max_iters": 0}, {"tol": 0.0}):
        with pytest.raises(ValueError):
            OptConfig(**kw)


@pytest.mark.parametrize("seed", range(10))
def test_sweeps_are_monotone(seed):
    psi = haar_random_state((2, 3, 2), seed)
    cfg = OptConfig(restarts=3, seed=seed)
    res = max_overlap_for_partition(psi, Partition.trivial(3), cfg)
    assert np.all(np.diff(res.history) >= -1e-12)


def test_max_iters_one_reports_not_converged():
    psi = haar_random_state((2, 2, 2), 3)
    res = max_overlap_for_partition(psi, Partition.trivial(3), OptConfig(restarts=1, max_iters=1))
    assert res.iterations_used == 1
    assert not res.converged


@pytest.mark.parametrize("seed", range(8))
def test_bipartitions_match_schmidt(seed):
    psi = haar_random_state((2, 2, 2), seed)
    for p in enumerate_partitions(3, 2):
        res = max_overlap_for_partition(psi, p)
        assert res.overlap == pytest.approx(schmidt_overlap(psi, p), abs=1e-8)


@pytest.mark.parametrize("seed", range(5))
def test_two_qubit_states_match_oracle(seed):
    psi = haar_random_state((2, 2), seed)
    assert abs(geometric_entanglement(psi, 2)[0] - oracle_entanglement(psi, 2)) < 1e-4


@pytest.mark.parametrize("seed", range(5))
def test_three_qubit_states_match_oracle(seed):
    psi = haar_random_state((2, 2, 2), 100 + seed)
    for m in (2, 3):
        assert abs(geometric_entanglement(psi, m)[0] - oracle_entanglement(psi, m, 32)) < 1e-4


def test_hierarchy_monotone_on_random_states():
    for seed in range(100):
        psi = haar_random_state((2, 2, 2), seed)
        e2 = geometric_entanglement(psi, 2, OptConfig(restarts=5))[0]
        e3 = geometric_entanglement(psi, 3, OptConfig(restarts=5))[0]
        assert 0.0 <= e2 <= 1.0 and 0.0 <= e3 <= 1.0
        assert e3 >= e2 - 1e-8


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31), site=st.integers(0, 2))
def test_local_unitary_invariance(seed, site):
    psi = haar_random_state((2, 2, 2), seed)
    u = random_unitary(2, np.random.default_rng(seed))
    t = np.moveaxis(np.tensordot(u, np.moveaxis(psi.tensor(), site, 0), axes=([1], [0])), 0, site)
    rotated = PureState(t.reshape(-1), psi.dims)
    assert abs(geometric_entanglement(psi, 3)[0] - geometric_entanglement(rotated, 3)[0]) < 1e-7


def test_serial_and_parallel_agree(w3):
    psi = haar_random_state((2, 2, 2, 2), 7)
    cfg = OptConfig(restarts=4, seed=3)
    e1, r1 = geometric_entanglement(psi, 2, cfg, workers=1)
    e4, r4 = geometric_entanglement(psi, 2, cfg, workers=4)
    assert e1 == e4
    assert r1.partition == r4.partition
    np.testing.assert_array_equal(assemble(r1.product).amplitudes, assemble(r4.product).amplitudes)


def test_ties_resolve_to_first_partition(ghz3):
    _, best = geometric_entanglement(ghz3, 2)
    assert str(best.partition) == "{0,1}|{2}"


def test_hierarchy_helper(w3):
    table = entanglement_hierarchy(w3)
    assert sorted(table) == [2, 3]
    assert table[3][0] >= table[2][0]
