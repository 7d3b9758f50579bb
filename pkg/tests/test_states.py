import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsle import (DegenerateContractionError, Partition, ProductState, PureState,
                  ShapeError, StateFileError, assemble, basis_state, contract_except,
                  haar_random_state, inner_product, state_from_json, state_to_json)
from qsle.partitions import enumerate_partitions


def brute_force_assemble(partition, vectors, dims):
    """Amplitude at every multi-index as an explicit product of factor entries."""
    out = np.zeros(math.prod(dims), dtype=complex)
    for flat, multi in enumerate(itertools.product(*(range(d) for d in dims))):
        amp = 1.0
        for block, vec in zip(partition.blocks, vectors):
            sub = 0
            for i in block:
                sub = sub * dims[i] + multi[i]
            amp *= vec[sub]
        out[flat] = amp
    return out


def random_product(dims, partition, seed):
    rng = np.random.default_rng(seed)
    vecs = []
    for d in partition.block_dims(dims):
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        vecs.append(z / np.linalg.norm(z))
    return ProductState.from_vectors(partition, vecs, dims)


def test_pure_state_rejects_bad_input():
    with pytest.raises(ShapeError):
        PureState([1, 0, 0], (2, 2))
    with pytest.raises(ShapeError):
        PureState([1], (1,))
    with pytest.raises(ShapeError):
        PureState([0, 0], (2,))


def test_pure_state_renormalizes_drift():
    psi = PureState([3, 4j], (2,))
    assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-12


def test_inner_product_examples():
    psi = haar_random_state((2, 3), seed=4)
    assert inner_product(psi, psi) == pytest.approx(1.0, abs=1e-12)
    e0, e1 = basis_state((2,), (0,)), basis_state((2,), (1,))
    assert inner_product(e0, e1) == 0
    plus = PureState(np.array([1, 1]) / np.sqrt(2), (2,))
    assert inner_product(e0, plus) == pytest.approx(1 / np.sqrt(2), abs=1e-15)


def test_inner_product_conjugate_symmetric():
    a, b = haar_random_state((2, 2), 1), haar_random_state((2, 2), 2)
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-15)


def test_inner_product_shape_error():
    with pytest.raises(ShapeError):
        inner_product(haar_random_state((2, 2), 0), haar_random_state((4,), 0))


def test_assemble_basis_product():
    p = Partition(((0,), (1,)))
    zero = np.array([1, 0])
    out = assemble(ProductState.from_vectors(p, [zero, zero], (2, 2)))
    np.testing.assert_array_equal(out.amplitudes, [1, 0, 0, 0])


def test_assemble_noncontiguous_block():
    # block {0,2} holds |01>, block {1} holds |1>  ->  |0>|1>|1>
    p = Partition(((0, 2), (1,)))
    prod = ProductState.from_vectors(p, [np.array([0, 1, 0, 0]), np.array([0, 1])], (2, 2, 2))
    out = assemble(prod)
    expected = brute_force_assemble(p, [f.amplitudes for f in prod.factors], (2, 2, 2))
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)
    np.testing.assert_allclose(out.amplitudes, basis_state((2, 2, 2), (0, 1, 1)).amplitudes)


def test_assemble_uniform():
    p = Partition(((0,), (1,)))
    plus = np.array([1, 1]) / np.sqrt(2)
    out = assemble(ProductState.from_vectors(p, [plus, plus], (2, 2)))
    np.testing.assert_allclose(out.amplitudes, np.full(4, 0.5), atol=1e-15)


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 2), (3, 2, 2, 2)])
def test_assemble_matches_brute_force_for_every_partition(dims):
    K = len(dims)
    for m in range(1, K + 1):
        for idx, p in enumerate(enumerate_partitions(K, m)):
            prod = random_product(dims, p, idx)
            out = assemble(prod)
            expected = brute_force_assemble(p, [f.amplitudes for f in prod.factors], dims)
            np.testing.assert_allclose(out.amplitudes, expected, atol=1e-13)
            assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-12


def test_assemble_contiguous_equals_kron():
    dims = (2, 3, 2)
    p = Partition(((0, 1), (2,)))
    prod = random_product(dims, p, 3)
    expected = np.kron(prod.factors[0].amplitudes, prod.factors[1].amplitudes)
    np.testing.assert_array_equal(assemble(prod).amplitudes, expected)


def test_contract_except_bell(bell):
    p = Partition(((0,), (1,)))
    prod = ProductState.from_vectors(p, [np.array([1, 0]), np.array([1, 0])], (2, 2))
    np.testing.assert_allclose(contract_except(bell, prod, 0), [1 / np.sqrt(2), 0], atol=1e-15)


def test_contract_except_ghz(ghz3):
    p = Partition(((0,), (1, 2)))
    prod = ProductState.from_vectors(p, [np.array([0, 1]), np.array([1, 0, 0, 0])], (2, 2, 2))
    np.testing.assert_allclose(contract_except(ghz3, prod, 0), [1 / np.sqrt(2), 0], atol=1e-15)


def test_contract_except_on_product_input():
    dims = (2, 3, 2)
    p = Partition(((0, 2), (1,)))
    prod = random_product(dims, p, 9)
    psi = assemble(prod)
    for j in range(2):
        v = contract_except(psi, prod, j)
        cos = abs(np.vdot(v, prod.factors[j].amplitudes)) / np.linalg.norm(v)
        assert cos == pytest.approx(1.0, abs=1e-12)


def test_contract_except_degenerate(bell):
    p = Partition(((0,), (1,)))
    prod = ProductState.from_vectors(p, [np.array([1, 0]), np.array([1, 0])], (2, 2))
    psi = basis_state((2, 2), (1, 1))
    with pytest.raises(DegenerateContractionError):
        contract_except(psi, prod, 0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), theta=st.floats(0, 2 * np.pi))
def test_contraction_identity_and_phase_invariance(seed, theta):
    dims = (2, 3, 2)
    psi = haar_random_state(dims, seed)
    for m in (2, 3):
        for p in enumerate_partitions(3, m):
            prod = random_product(dims, p, seed)
            direct = inner_product(assemble(prod), psi)
            for j in range(p.num_blocks):
                via = np.vdot(prod.factors[j].amplitudes, contract_except(psi, prod, j))
                assert abs(via - direct) < 1e-12
            rotated = list(prod.factors)
            rotated[0] = PureState(rotated[0].amplitudes * np.exp(1j * theta), rotated[0].dims)
            moved = inner_product(assemble(ProductState(p, tuple(rotated))), psi)
            assert abs(abs(moved) - abs(direct)) < 1e-12


def test_haar_state_normalized_and_deterministic():
    a = haar_random_state((2,), seed=11)
    b = haar_random_state((2,), seed=11)
    assert abs(np.linalg.norm(a.amplitudes) - 1) < 1e-12
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)


def test_haar_marginals():
    rng = np.random.default_rng(123)
    n = 10_000
    probs = np.array([np.abs(haar_random_state((2, 2, 2), rng).amplitudes) ** 2 for _ in range(n)])
    # |a_i|^2 ~ Beta(1, 7): variance 7 / (64 * 9)
    sigma = np.sqrt(7 / (64 * 9) / n)
    assert np.all(np.abs(probs.mean(axis=0) - 1 / 8) < 3 * sigma)


def test_partition_canonical_and_str():
    p = Partition(((2, 0), (1,)))
    assert p.blocks == ((0, 2), (1,))
    assert str(p) == "{0,2}|{1}"
    assert Partition.parse("{0,2}|{1}") == p
    with pytest.raises(ValueError):
        Partition(((0,), (0, 1)))
    with pytest.raises(ValueError):
        Partition(((0,), (2,)))


def test_state_file_roundtrip(tmp_path):
    psi = haar_random_state((2, 3), 5)
    back = state_from_json(state_to_json(psi))
    assert back.dims == psi.dims
    np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)


def test_state_file_normalizes_on_read():
    psi = state_from_json(json.dumps({"dims": [2], "amplitudes": [[3, 0], [0, 4]]}))
    np.testing.assert_allclose(psi.amplitudes, [0.6, 0.8j])


@pytest.mark.parametrize("doc, field", [
    ("not json", "document"),
    ("[]", "document"),
    ('{"amplitudes": [[1, 0]]}', "dims"),
    ('{"dims": [2, 1], "amplitudes": []}', "dims[1]"),
    ('{"dims": [2]}', "amplitudes"),
    ('{"dims": [2], "amplitudes": [[1, 0]]}', "amplitudes"),
    ('{"dims": [2], "amplitudes": [[1, 0], [1]]}', "amplitudes[1]"),
    ('{"dims": [2], "amplitudes": [[0, 0], [0, 0]]}', "amplitudes"),
])
def test_state_file_errors_name_field(doc, field):
    with pytest.raises(StateFileError) as info:
        state_from_json(doc)
    assert info.value.field == field
