"""Dense complex linear algebra used throughout the package.

All matrices are plain ``numpy`` arrays of dtype ``complex128``.  Bipartite
spaces use the S-major convention: basis index ``s * d_E + e``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotHermitianError, NotPSDError, UnsupportedShapeError

HERMITIAN_ATOL = 1e-10
PSD_CLAMP = 1e-10
PSD_REJECT = 1e-6


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_square(m, name: str = "operator") -> np.ndarray:
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_vector(v, name: str = "state") -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_error(m: np.ndarray) -> float:
    """Largest elementwise deviation ``max |M - M^dagger|``."""
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    scale = max(1.0, float(np.max(np.abs(m))))
    return hermiticity_error(m) <= atol * scale


def check_hermitian(m, name: str = "operator", atol: float = HERMITIAN_ATOL) -> np.ndarray:
    m = as_square(m, name)
    if not is_hermitian(m, atol):
        raise NotHermitianError(f"{name} is not Hermitian (max |M - M^dagger| = {hermiticity_error(m):.3e})")
    return m


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt (or plain vector) inner product ``tr(a^dagger b)``."""
    return complex(np.vdot(a, b))


def partial_trace(m, dims: tuple[int, int], subsystem: str = "E") -> np.ndarray:
    """Trace out one factor of an S (x) E operator.

    Args:
        m: Square matrix of side ``d_S * d_E`` in S-major ordering.
        dims: ``(d_S, d_E)``.
        subsystem: Which factor to trace *out*, ``"E"`` or ``"S"``.

    Returns:
        The reduced ``d_S x d_S`` matrix (tracing out E) or ``d_E x d_E``
        (tracing out S).
    """
    d_s, d_e = (int(d) for d in dims)
    if d_s < 1 or d_e < 1:
        raise DimensionError(f"dims must be positive, got {dims}")
    m = as_square(m)
    side = d_s * d_e
    if m.shape[0] != side:
        raise DimensionError(f"expected side {side} for dims {dims}, got {m.shape[0]}")
    t = m.reshape(d_s, d_e, d_s, d_e)
    if subsystem in ("E", "e"):
        return np.einsum("iaja->ij", t)
    if subsystem in ("S", "s"):
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"subsystem must be 'S' or 'E', got {subsystem!r}")


def _clamped_eigh(m: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    check_hermitian(m, name)
    h = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] < -PSD_REJECT * scale:
        raise NotPSDError(f"{name} has eigenvalue {w[0]:.3e} < 0")
    return np.clip(w, 0.0, None), v


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Small negative eigenvalues from round-off are clamped to zero before the
    root is taken.
    """
    m = as_square(m)
    w, v = _clamped_eigh(m, "matrix")
    r = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (r + dagger(r))


def _polar_svd(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # thin SVD; rank-deficient inputs still get orthonormal rows/columns in U
    w, s, vh = np.linalg.svd(a, full_matrices=False)
    p = (w * s) @ dagger(w)
    p = 0.5 * (p + dagger(p))
    return p, w @ vh


def polar_decompose(l) -> tuple[np.ndarray, np.ndarray]:
    """Left polar decomposition ``L = P U`` of a wide (or square) matrix.

    Args:
        l: ``d_S x d_E`` matrix with ``d_S <= d_E``.

    Returns:
        ``(P, U)`` with ``P = sqrt(L L^dagger)`` Hermitian PSD of side ``d_S`` and
        ``U`` semi-unitary, ``U U^dagger = I``.
    """
    l = as_matrix(l, "L")
    d_s, d_e = l.shape
    if d_s > d_e:
        raise UnsupportedShapeError(f"polar_decompose needs d_S <= d_E, got {d_s} x {d_e}")
    return _polar_svd(l)


def is_semi_unitary(u, atol: float = 1e-9) -> bool:
    u = np.asarray(u)
    return u.shape[0] <= u.shape[1] and np.allclose(u @ dagger(u), np.eye(u.shape[0]), rtol=0, atol=atol)


def check_density(rho, name: str = "rho", atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate a (possibly unnormalized) density operator and return it as an array."""
    rho = check_hermitian(rho, name, atol)
    w = np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] < -atol * scale:
        raise NotPSDError(f"{name} has eigenvalue {w[0]:.3e} < 0")
    if np.real(np.trace(rho)) <= 0:
        raise NotPSDError(f"{name} has non-positive trace")
    return rho
