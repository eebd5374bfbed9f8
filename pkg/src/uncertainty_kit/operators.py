"""Standard observables: Pauli/spin-1/2 operators and truncated oscillator quadratures."""

from __future__ import annotations

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

KET_0 = np.array([1, 0], dtype=np.complex128)
KET_1 = np.array([0, 1], dtype=np.complex128)
KET_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=np.complex128) / np.sqrt(2)


def pauli(axis: str) -> np.ndarray:
    try:
        return PAULI[axis.lower()].copy()
    except KeyError:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}") from None


def spin_half(axis: str, hbar: float = 1.0) -> np.ndarray:
    """Spin-1/2 component ``S = (hbar / 2) sigma``."""
    return 0.5 * hbar * pauli(axis)


def annihilation(n: int) -> np.ndarray:
    """Ladder operator ``a`` truncated to the lowest ``n`` Fock states."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(np.complex128)


def position(n: int, hbar: float = 1.0) -> np.ndarray:
    a = annihilation(n)
    return np.sqrt(hbar / 2) * (a + a.conj().T)


def momentum(n: int, hbar: float = 1.0) -> np.ndarray:
    a = annihilation(n)
    return 1j * np.sqrt(hbar / 2) * (a.conj().T - a)


def fock_state(n: int, k: int) -> np.ndarray:
    if not 0 <= k < n:
        raise ValueError(f"Fock index {k} outside truncation 0..{n - 1}")
    v = np.zeros(n, dtype=np.complex128)
    v[k] = 1.0
    return v
