import numpy as np
import pytest

from uncertainty_kit.linalg import anticommutator, commutator
from uncertainty_kit.operators import PAULI, annihilation, fock_state, momentum, pauli, position, spin_half


def test_pauli_algebra():
    for j in "xyz":
        for k in "xyz":
            expected = 2 * np.eye(2) if j == k else np.zeros((2, 2))
            np.testing.assert_array_equal(anticommutator(pauli(j), pauli(k)), expected)
    np.testing.assert_array_equal(commutator(PAULI["x"], PAULI["y"]), 2j * PAULI["z"])
    np.testing.assert_array_equal(spin_half("z", hbar=2.0), PAULI["z"])
    with pytest.raises(ValueError):
        pauli("w")


def test_truncated_canonical_commutator():
    n = 12
    c = commutator(position(n), momentum(n))
    expected = 1j * np.eye(n)
    expected[-1, -1] = -(n - 1) * 1j  # truncation edge
    np.testing.assert_allclose(c, expected, atol=1e-12)


def test_ladder_and_fock():
    a = annihilation(4)
    np.testing.assert_allclose(a @ fock_state(4, 2), np.sqrt(2) * fock_state(4, 1))
    with pytest.raises(ValueError):
        fock_state(3, 3)
