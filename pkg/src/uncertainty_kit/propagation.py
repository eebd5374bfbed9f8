"""Propagation of uncertainty for linear combinations and smooth functions of observables."""

from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from .av import ATOL, av_decompose, correlation
from .errors import DimensionError, NonCommutingError, UncertaintyKitError
from .linalg import anticommutator, check_hermitian, commutator
from .operators import pauli
from .sampling import random_state

RCORR_SLACK = 1e-9


def _covariance_terms(ops: Sequence[np.ndarray], psi, atol: float) -> tuple[np.ndarray, np.ndarray]:
    """Standard deviations and the ``Rcorr`` matrix (zero rows/columns for eigenstate operators)."""
    parts = [av_decompose(op, psi, atol) for op in ops]
    deltas = np.array([0.0 if p.eigenstate else p.delta for p in parts])
    live = [j for j, p in enumerate(parts) if not p.eigenstate]
    rcorr = np.diag([0.0 if p.eigenstate else 1.0 for p in parts])
    for idx, j in enumerate(live):
        for k in live[idx + 1 :]:
            rcorr[j, k] = rcorr[k, j] = correlation(ops[j], ops[k], psi, atol).rcorr
    return deltas, rcorr


def linear_variance(coefficients: Sequence[float], operators: Sequence, psi, atol: float = ATOL) -> float:
    """Variance of ``sum_j c_j A_j`` from the individual spreads and pairwise ``Rcorr``.

    ``sum_j c_j^2 dA_j^2 + sum_{j != k} c_j c_k dA_j dA_k Rcorr(A_j, A_k)``.  This
    is an exact identity; cross terms involving an operator with zero spread
    are zero.
    """
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.ndim != 1 or len(coefficients) != len(operators):
        raise DimensionError(f"{len(coefficients)} coefficients for {len(operators)} operators")
    ops = [check_hermitian(op, f"A_{j}") for j, op in enumerate(operators)]
    if len({op.shape for op in ops}) != 1:
        raise DimensionError(f"operators have mismatched shapes {[op.shape for op in ops]}")
    deltas, rcorr = _covariance_terms(ops, psi, atol)
    w = coefficients * deltas
    return float(w @ rcorr @ w)


def direct_variance(coefficients: Sequence[float], operators: Sequence, psi, atol: float = ATOL) -> float:
    """``d(sum_j c_j A_j)^2`` computed from the combined operator."""
    combo = sum(c * np.asarray(op, dtype=np.complex128) for c, op in zip(coefficients, operators))
    return av_decompose(combo, psi, atol).delta ** 2


def pauli_shortcut_variance(j: str, k: str, psi, atol: float = 1e-10) -> float:
    """``d(s_j + s_k)^2`` for two distinct Pauli axes using only single-axis statistics.

    Since ``{s_j, s_k} = 0`` for ``j != k``, the variance is
    ``ds_j^2 + ds_k^2 - 2<s_j><s_k>``.  The result is cross-checked against
    :func:`linear_variance`.
    """
    if j == k:
        raise ValueError(f"axes must differ, got {j!r} twice")
    sj, sk = pauli(j), pauli(k)
    if np.max(np.abs(anticommutator(sj, sk))) != 0.0:
        raise ArithmeticError("Pauli operators on distinct axes must anticommute")
    dj, dk = av_decompose(sj, psi), av_decompose(sk, psi)
    value = dj.delta**2 + dk.delta**2 - 2 * dj.expectation.real * dk.expectation.real
    reference = linear_variance([1.0, 1.0], [sj, sk], psi)
    if abs(value - reference) > atol:
        raise ArithmeticError(f"shortcut {value!r} disagrees with linear_variance {reference!r}")
    return value


def taylor_variance(gradient: Sequence[float], deltas: Sequence[float], rcorr) -> float:
    """First-order propagated variance ``sum_jk g_j g_k d_j d_k Rcorr_jk``.

    Args:
        gradient: Partial derivatives of ``f`` at the mean point.
        deltas: Standard deviations of the arguments, all nonnegative.
        rcorr: Symmetric matrix of real correlations with unit diagonal
            wherever the matching delta is positive.
    """
    g = np.asarray(gradient, dtype=float)
    d = np.asarray(deltas, dtype=float)
    r = np.asarray(rcorr, dtype=float)
    n = len(g)
    if d.shape != (n,) or r.shape != (n, n):
        raise DimensionError(f"gradient {g.shape}, deltas {d.shape} and rcorr {r.shape} do not match")
    if np.any(d < 0):
        raise ValueError("deltas must be nonnegative")
    if not np.allclose(r, r.T, rtol=0, atol=1e-12):
        raise ValueError("rcorr must be symmetric")
    if np.any(np.abs(r) > 1 + RCORR_SLACK):
        raise ValueError("rcorr entries must lie in [-1, 1]")
    if np.any(np.abs(np.diag(r)[d > 0] - 1.0) > RCORR_SLACK):
        raise ValueError("rcorr must have unit diagonal where delta > 0")
    w = g * d
    return max(float(w @ r @ w), 0.0)


class TaylorCheck(NamedTuple):
    exact: float
    approx: float
    rel_error: float


def _central_gradient(f, point: np.ndarray, h: float | None) -> np.ndarray:
    grad = np.empty_like(point)
    for j in range(len(point)):
        step = h if h is not None else 1e-5 * max(1.0, abs(point[j]))
        up, dn = point.copy(), point.copy()
        up[j] += step
        dn[j] -= step
        grad[j] = (f(*up) - f(*dn)) / (2 * step)
    return grad


def taylor_validate(
    f: Callable[..., float],
    ops: Sequence,
    psi,
    gradient: Sequence[float] | None = None,
    h: float | None = None,
    atol: float = ATOL,
) -> TaylorCheck:
    """Compare the first-order formula with the exact variance for commuting observables.

    The observables must be diagonal in the computational basis, so
    ``f(A_1, ..., A_n)`` is ``f`` applied to their joint eigenvalues and the
    exact variance follows from the outcome probabilities ``|psi_i|^2``.

    Args:
        f: Scalar function of ``n`` real arguments.
        ops: ``n`` diagonal Hermitian matrices.
        psi: State vector.
        gradient: Partials of ``f`` at the means; central differences when omitted.
        h: Finite-difference step; defaults to ``1e-5 * max(1, |mean|)`` per coordinate.
    """
    ops = [check_hermitian(op, f"A_{j}") for j, op in enumerate(ops)]
    for j in range(len(ops)):
        for k in range(j + 1, len(ops)):
            if np.linalg.norm(commutator(ops[j], ops[k])) > 1e-10:
                raise NonCommutingError(f"operators A_{j} and A_{k} do not commute")
    for j, op in enumerate(ops):
        if np.max(np.abs(op - np.diag(np.diag(op)))) > 1e-10:
            raise UncertaintyKitError(f"operator A_{j} is not diagonal in the computational basis")
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    probs = np.abs(psi) ** 2
    probs = probs / probs.sum()
    eig = np.array([np.real(np.diag(op)) for op in ops])  # (n, d)
    values = np.array([f(*eig[:, i]) for i in range(eig.shape[1])], dtype=float)
    mean_f = probs @ values
    exact = float(probs @ (values - mean_f) ** 2)

    means = eig @ probs
    grad = _central_gradient(f, means, h) if gradient is None else np.asarray(gradient, dtype=float)
    deltas, rcorr = _covariance_terms(ops, psi, atol)
    approx = taylor_variance(grad, deltas, rcorr)
    rel = abs(exact - approx) / max(exact, np.finfo(float).tiny)
    return TaylorCheck(exact, approx, rel)


def taylor_family(scale: float, dim: int = 4, seed: int = 0):
    """Commuting diagonal observables with spreads proportional to ``scale``.

    ``A = diag(2 + scale x)``, ``B = diag(3 + scale y)`` with fixed random
    ``x``, ``y`` and state; spreads shrink linearly in ``scale`` while the
    means stay near 2 and 3.
    """
    rng = np.random.default_rng([seed, dim])
    x, y = rng.standard_normal(dim), rng.standard_normal(dim)
    psi = random_state(dim, rng)
    return np.diag(2 + scale * x).astype(complex), np.diag(3 + scale * y).astype(complex), psi
