import numpy as np
import pytest
from hypothesis import given, strategies as st

from uncertainty_kit.linalg import is_hermitian
from uncertainty_kit.sampling import make_rng, random_density, sample, spawn_seeds

seeds = st.integers(0, 2**64 - 1)


@given(seed=seeds, d=st.integers(1, 8))
def test_density_invariants(seed, d):
    rho = sample("density", d, seed=seed)
    assert np.max(np.abs(rho - rho.conj().T)) <= 1e-10
    assert np.min(np.linalg.eigvalsh(rho)) >= -1e-10
    assert abs(np.trace(rho) - 1) <= 1e-10


@given(seed=seeds, d=st.integers(1, 8))
def test_unit_state_and_hermitian(seed, d):
    assert abs(np.linalg.norm(sample("unit_state", d, seed=seed)) - 1) <= 1e-12
    assert is_hermitian(sample("hermitian", d, seed=seed), atol=0)


def test_semi_unitary_shapes():
    row = sample("semi_unitary", 1, 5, seed=3)
    assert row.shape == (1, 5) and abs(np.linalg.norm(row) - 1) <= 1e-12
    u = sample("semi_unitary", 4, 4, seed=3)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-9)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-9)


def test_semi_unitary_column_weight_monte_carlo():
    # |U[0,0]|^2 of a Haar row is uniform on average: expected 1/d_E
    vals = [abs(sample("semi_unitary", 2, 4, seed=s)[0, 0]) ** 2 for s in range(10_000)]
    assert abs(np.mean(vals) - 0.25) <= 0.02


def test_deterministic_per_seed():
    for kind, dims in [("unit_state", (3,)), ("hermitian", (3,)), ("density", (3,)), ("semi_unitary", (2, 3)), ("general", (2, 3))]:
        np.testing.assert_array_equal(sample(kind, *dims, seed=42), sample(kind, *dims, seed=42))
    assert not np.array_equal(sample("general", 2, 2, seed=1), sample("general", 2, 2, seed=2))


def test_frozen_stream():
    # PCG64 via SeedSequence: these values are fixed across platforms
    assert make_rng(0).integers(0, 2**32, 3).tolist() == [3653403231, 2735729615, 2195314465]
    assert spawn_seeds(7, 2) == [3386250816931739734, 4042502035264064771]
    np.testing.assert_allclose(sample("unit_state", 2, seed=1), [0.21424427 + 0.20485384j, 0.50936062 - 0.80788988j], atol=1e-8)
    assert spawn_seeds(7, 5)[:3] == spawn_seeds(7, 3)
    assert spawn_seeds(7, 3, start=2)[0] == spawn_seeds(7, 3)[2]
    assert len(set(spawn_seeds(7, 100))) == 100


def test_invalid_dims_and_kinds():
    with pytest.raises(ValueError):
        sample("unit_state", 0, seed=1)
    with pytest.raises(ValueError):
        sample("semi_unitary", 3, 2, seed=1)
    with pytest.raises(ValueError):
        sample("bogus", 2, seed=1)
    with pytest.raises(ValueError):
        make_rng(-1)


def test_low_rank_density():
    rho = random_density(4, seed=9, rank=1)
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 1
