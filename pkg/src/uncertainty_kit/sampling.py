"""Seeded random states and operators.

Every sampler takes ``seed``: an integer (64-bit unsigned) or an existing
``numpy.random.Generator``.  Integers are expanded through ``SeedSequence``
into a PCG64 bit generator, so a given seed reproduces the same sample
stream on every platform numpy supports.  ``spawn_seeds`` derives
independent child seeds for restarts and parallel sweeps.
"""

from __future__ import annotations

import numpy as np

from .linalg import dagger


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is not None and (int(seed) < 0 or int(seed) >= 2**64):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_seeds(seed: int, n: int, start: int = 0) -> list[int]:
    """Child seeds ``start .. start+n-1`` of ``seed``; prefix-stable in ``n``."""
    return [
        int(np.random.SeedSequence(int(seed), spawn_key=(i,)).generate_state(1, np.uint64)[0])
        for i in range(start, start + n)
    ]


def _check_dims(*dims: int) -> None:
    for d in dims:
        if int(d) != d or d < 1:
            raise ValueError(f"dimensions must be positive integers, got {dims}")


def complex_gaussian(shape, seed=None) -> np.ndarray:
    """Standard complex Gaussian entries, ``E|z|^2 = 1``."""
    rng = make_rng(seed)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_state(d: int, seed=None) -> np.ndarray:
    _check_dims(d)
    v = complex_gaussian(d, seed)
    return v / np.linalg.norm(v)


def random_hermitian(d: int, seed=None) -> np.ndarray:
    _check_dims(d)
    g = complex_gaussian((d, d), seed)
    return 0.5 * (g + dagger(g))


def random_density(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    """``G G^dagger / tr(G G^dagger)`` with ``G`` of shape ``d x rank`` (default full rank)."""
    _check_dims(d)
    k = d if rank is None else rank
    _check_dims(k)
    g = complex_gaussian((d, k), seed)
    rho = g @ dagger(g)
    rho = 0.5 * (rho + dagger(rho))
    return rho / np.real(np.trace(rho))


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR with the phases of ``diag(R)`` divided out."""
    _check_dims(d)
    q, r = np.linalg.qr(complex_gaussian((d, d), seed))
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_semi_unitary(d_s: int, d_e: int, seed=None) -> np.ndarray:
    """First ``d_s`` rows of a Haar unitary of side ``d_e``; ``U U^dagger = I``."""
    _check_dims(d_s, d_e)
    if d_s > d_e:
        raise ValueError(f"semi-unitary needs d_S <= d_E, got {d_s} > {d_e}")
    return random_unitary(d_e, seed)[:d_s, :]


def random_matrix(rows: int, cols: int, seed=None) -> np.ndarray:
    _check_dims(rows, cols)
    return complex_gaussian((rows, cols), seed)


_KINDS = {
    "unit_state": random_state,
    "hermitian": random_hermitian,
    "density": random_density,
    "semi_unitary": random_semi_unitary,
    "general": random_matrix,
}


def sample(kind: str, *dims: int, seed=None) -> np.ndarray:
    """Dispatch to one of the samplers above by name.

    >>> sample("semi_unitary", 2, 4, seed=7).shape
    (2, 4)
    """
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown sample kind {kind!r}; expected one of {sorted(_KINDS)}") from None
    return fn(*dims, seed=seed)
