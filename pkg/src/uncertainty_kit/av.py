"""The Aharonov-Vaidman decomposition and the quantities built directly on it.

For a linear operator ``A`` and a nonzero vector ``psi``::

    A psi = <A> psi + dA * psi_perp

with ``psi_perp`` orthogonal to ``psi`` and of equal norm.  The residual is
fixed to the closed form ``(A - <A>) psi / dA``.  When ``dA`` vanishes (``psi``
is an eigenvector) the residual is the zero vector and ``eigenstate`` is set.

Every function here also accepts a 2-D array in place of ``psi``: an amplitude
operator ``L`` (``d_S x d_E``) with the Hilbert-Schmidt inner product
``tr(L^dagger M)``.  A vector is the ``d_E = 1`` special case, and both go
through the same arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateError, DimensionError, UncertaintyKitError
from .linalg import as_square

ATOL = 1e-10


def as_amplitude(psi, name: str = "psi") -> np.ndarray:
    arr = np.asarray(psi, dtype=np.complex128)
    if arr.ndim not in (1, 2) or arr.size == 0:
        raise DimensionError(f"{name} must be a vector or a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def norm_squared(psi) -> float:
    return float(np.real(np.vdot(psi, psi)))


def _check_pair(a, psi) -> tuple[np.ndarray, np.ndarray, float]:
    a = as_square(a, "operator")
    psi = as_amplitude(psi)
    if a.shape[1] != psi.shape[0]:
        raise DimensionError(f"operator of side {a.shape[1]} cannot act on state of dimension {psi.shape[0]}")
    n2 = norm_squared(psi)
    if n2 <= 0.0:
        raise UncertaintyKitError("state has zero norm")
    return a, psi, n2


def expectation(a, psi) -> complex:
    """``<psi|A|psi> / <psi|psi>`` (or ``tr(A L L^dagger) / tr(L L^dagger)``)."""
    a, psi, n2 = _check_pair(a, psi)
    return complex(np.vdot(psi, a @ psi)) / n2


@dataclass(frozen=True)
class AvDecomposition:
    """Result of :func:`av_decompose`.

    Attributes:
        expectation: ``<A>``; real up to round-off when ``A`` is Hermitian.
        delta: ``dA >= 0``.
        residual: ``psi_perp``, same shape as the input state.
        eigenstate: True when ``dA`` fell below the eigenstate threshold; the
            residual is then exactly zero.
    """

    expectation: complex
    delta: float
    residual: np.ndarray
    eigenstate: bool

    def reconstruct(self, psi) -> np.ndarray:
        """Right-hand side ``<A> psi + dA psi_perp``."""
        return self.expectation * np.asarray(psi) + self.delta * self.residual


def av_decompose(a, psi, atol: float = ATOL) -> AvDecomposition:
    """Split ``A psi`` into its component along ``psi`` and an orthogonal remainder.

    ``dA`` is computed as the norm of ``(A - <A>) psi`` relative to ``psi``,
    which equals ``sqrt(<A^dagger A> - |<A>|^2)`` without the cancellation of
    the difference form.  States with ``dA <= atol * max(1, ||A||_F)`` are
    treated as eigenstates.
    """
    a, psi, n2 = _check_pair(a, psi)
    a_psi = a @ psi
    mean = complex(np.vdot(psi, a_psi)) / n2
    r = a_psi - mean * psi
    # one re-projection keeps <psi|r> at round-off even for small dA
    r = r - psi * (np.vdot(psi, r) / n2)
    delta = float(np.sqrt(norm_squared(r) / n2))
    if delta <= atol * max(1.0, float(np.linalg.norm(a))):
        return AvDecomposition(mean, delta, np.zeros_like(psi), True)
    return AvDecomposition(mean, delta, r / delta, False)


def std_dev(a, psi, atol: float = ATOL) -> float:
    return av_decompose(a, psi, atol).delta


class CorrelationValue(NamedTuple):
    """Complex correlation ``<psi_perp_A|psi_perp_B>`` and its real/imaginary parts."""

    corr: complex

    @property
    def rcorr(self) -> float:
        return self.corr.real

    @property
    def imcorr(self) -> float:
        return self.corr.imag


def correlation(a, b, psi, atol: float = ATOL) -> CorrelationValue:
    """Generalized correlation ``(<A^dagger B> - <A>^* <B>) / (dA dB)``.

    Evaluated as the normalized overlap of the two residual vectors, which is
    the same number.  Raises :class:`DegenerateError` when either standard
    deviation vanishes.
    """
    da = av_decompose(a, psi, atol)
    db = av_decompose(b, psi, atol)
    for label, d in (("A", da), ("B", db)):
        if d.eigenstate:
            raise DegenerateError(f"correlation undefined: operator {label} has zero standard deviation")
    n2 = norm_squared(np.asarray(psi, dtype=np.complex128))
    return CorrelationValue(complex(np.vdot(da.residual, db.residual)) / n2)


def sum_residual_identity(ops: Sequence, psi, atol: float = ATOL) -> float:
    """Norm of ``d(sum A_j) psi_perp_sum - sum_j dA_j psi_perp_j``.

    Zero up to round-off for any operators and any nonzero ``psi``.
    """
    if len(ops) < 2:
        raise ValueError("need at least two operators")
    ops = [as_square(op) for op in ops]
    if len({op.shape for op in ops}) != 1:
        raise DimensionError(f"operators have mismatched shapes {[op.shape for op in ops]}")
    total = av_decompose(sum(ops), psi, atol)
    acc = total.delta * total.residual
    for op in ops:
        d = av_decompose(op, psi, atol)
        acc = acc - d.delta * d.residual
    return float(np.linalg.norm(acc))


class CauchySchwarzParts(NamedTuple):
    lhs: float
    rhs_sum: float
    delta_p: float


def cauchy_schwarz_identity(f, g, atol: float = ATOL, rtol: float = 1e-9) -> CauchySchwarzParts:
    """Cauchy-Schwarz through the decomposition of ``P = |g><g|`` on ``f``.

    Returns ``<f|f><g|g>``, ``|<f|g>|^2 + dP^2 <f|f>^2 / |<f|g>|^2`` and ``dP``.
    The first two agree exactly, and the second term of ``rhs_sum`` is
    nonnegative, which is the inequality.

    Raises:
        DegenerateError: ``f`` is zero or orthogonal to ``g``.  The inequality
            then holds trivially and the identity is not evaluated.
    """
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    g = np.asarray(g, dtype=np.complex128).reshape(-1)
    if f.shape != g.shape:
        raise DimensionError(f"f and g have different dimensions {f.shape[0]} and {g.shape[0]}")
    ff, gg = norm_squared(f), norm_squared(g)
    fg = complex(np.vdot(f, g))
    if ff == 0.0 or abs(fg) <= atol * np.sqrt(ff * gg):
        raise DegenerateError("f is zero or orthogonal to g; Cauchy-Schwarz holds trivially")
    dp = av_decompose(np.outer(g, g.conj()), f, atol).delta
    overlap2 = abs(fg) ** 2
    lhs = ff * gg
    rhs_sum = overlap2 + dp**2 * ff**2 / overlap2
    if abs(lhs - rhs_sum) > rtol * lhs:
        raise ArithmeticError(f"identity mismatch: {lhs!r} vs {rhs_sum!r}")
    return CauchySchwarzParts(lhs, rhs_sum, dp)
