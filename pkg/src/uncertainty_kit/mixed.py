"""Mixed states through amplitude operators.

An amplitude operator for a density operator ``rho`` on ``H_S`` is any
``d_S x d_E`` matrix ``L`` with ``L L^dagger = rho``; all of them are
``sqrt(rho) U`` with ``U`` semi-unitary.  Matrices carry the Hilbert-Schmidt
inner product ``tr(L^dagger M)``, so the vector routines in :mod:`.av` and
:mod:`.relations` apply to them unchanged; this module adds the
constructions, checks and the bound optimization that are specific to the
operator setting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .av import ATOL, AvDecomposition, av_decompose, norm_squared
from .errors import ConstraintError, DegenerateError, DimensionError, UncertaintyKitError
from .linalg import (
    _polar_svd,
    as_matrix,
    as_square,
    check_density,
    check_hermitian,
    commutator,
    dagger,
    is_semi_unitary,
    psd_sqrt,
)
from .relations import PERP_TOL, RelationReport, maccone_pati_1, maccone_pati_2
from .sampling import make_rng, spawn_seeds
from .search import nelder_mead

NORM_TOL = 1e-9


def is_normalized(l, atol: float = 1e-10) -> bool:
    return abs(norm_squared(l) - 1.0) <= atol


def amplitude_from_density(rho, u=None) -> np.ndarray:
    """``sqrt(rho) U``; ``U`` defaults to the identity (``d_E = d_S``)."""
    rho = check_density(rho)
    root = psd_sqrt(rho)
    if u is None:
        return root
    u = as_matrix(u, "u")
    if u.shape[0] != rho.shape[0]:
        raise DimensionError(f"u must have {rho.shape[0]} rows, got {u.shape[0]}")
    if not is_semi_unitary(u):
        raise ConstraintError("u is not semi-unitary (u u^dagger != I)")
    return root @ u


class AmplitudeFactors(NamedTuple):
    rho: np.ndarray
    p: np.ndarray
    u: np.ndarray


def amplitude_validate(l) -> AmplitudeFactors:
    """Density operator and polar factors ``L = P U`` of an amplitude operator.

    ``P = sqrt(L L^dagger)``.  For ``d_S <= d_E`` the factor ``U`` is
    semi-unitary; when ``d_S > d_E`` it is an isometry (``U^dagger U = I``).
    """
    l = as_matrix(l, "L")
    rho = l @ dagger(l)
    p, u = _polar_svd(l)
    return AmplitudeFactors(0.5 * (rho + dagger(rho)), p, u)


def av_operator_decompose(a, l, atol: float = ATOL) -> AvDecomposition:
    """``A L = <A> L + dA L_perp`` under the Hilbert-Schmidt inner product."""
    a = as_square(a, "A")
    l = as_matrix(l, "L")
    if a.shape[0] != l.shape[0]:
        raise DimensionError(f"A has side {a.shape[0]} but L has {l.shape[0]} rows")
    return av_decompose(a, l, atol)


def rho_perp(a, rho, atol: float = ATOL) -> np.ndarray:
    """``(A - <A>) rho (A - <A>)^dagger / dA^2``; the same for every amplitude operator of ``rho``."""
    a = as_square(a, "A")
    rho = check_density(rho)
    if a.shape != rho.shape:
        raise DimensionError(f"A has shape {a.shape} but rho has {rho.shape}")
    tr = np.real(np.trace(rho))
    mean = np.trace(a @ rho) / tr
    shifted = a - mean * np.eye(a.shape[0])
    out = shifted @ rho @ dagger(shifted)
    var = np.real(np.trace(out)) / tr
    if np.sqrt(max(var, 0.0)) <= atol * max(1.0, float(np.linalg.norm(a))):
        raise DegenerateError("rho_perp undefined: A has zero standard deviation on rho")
    out = out / var
    return 0.5 * (out + dagger(out))


def _check_amplitude_pair(a, b, l):
    a = check_hermitian(a, "A")
    b = check_hermitian(b, "B")
    l = as_matrix(l, "L")
    if a.shape != b.shape or a.shape[0] != l.shape[0]:
        raise DimensionError(f"shapes A {a.shape}, B {b.shape}, L {l.shape} are incompatible")
    if abs(norm_squared(l) - 1.0) > NORM_TOL:
        raise ConstraintError(f"L must be normalized, tr(L L^dagger) = {norm_squared(l):.12g}")
    return a, b, l


def mp1_mixed(a, b, l, l_perp, sign=1, **kw) -> RelationReport:
    """First sum-of-variances relation on ``rho = L L^dagger`` with an explicit ``L_perp``.

    ``L_perp`` must share the input space of ``L``, be Hilbert-Schmidt
    orthogonal to it and have unit norm.
    """
    a, b, l = _check_amplitude_pair(a, b, l)
    l_perp = as_matrix(l_perp, "L_perp")
    if l_perp.shape != l.shape:
        raise DimensionError(f"L_perp has shape {l_perp.shape}, expected {l.shape}")
    if abs(norm_squared(l_perp) - 1.0) > PERP_TOL:
        raise ConstraintError(f"L_perp must be normalized, tr = {norm_squared(l_perp):.12g}")
    overlap = abs(np.vdot(l, l_perp))
    if overlap > PERP_TOL:
        raise ConstraintError(f"L_perp is not orthogonal to L (|tr(L^dagger L_perp)| = {overlap:.3e})")
    return maccone_pati_1(a, b, l, l_perp, sign=sign, **kw)


def mp2_mixed(a, b, l, **kw) -> RelationReport:
    """Second sum-of-variances relation; ``L_perp`` is the residual of ``(A + B) L``."""
    a, b, l = _check_amplitude_pair(a, b, l)
    return maccone_pati_2(a, b, l, **kw)


def purify(l) -> np.ndarray:
    """``(I_S (x) L^T) |Phi+>`` with ``|Phi+> = sum_j |j>|j>``, a vector on S (x) E.

    In the S-major basis this is ``L`` read row by row.
    """
    l = as_matrix(l, "L")
    if not is_normalized(l, NORM_TOL):
        raise ConstraintError(f"L must be normalized, tr(L L^dagger) = {norm_squared(l):.12g}")
    d_s = l.shape[0]
    phi = np.eye(d_s, dtype=np.complex128).reshape(-1)
    return np.kron(np.eye(d_s), l.T) @ phi


def amplitude_from_purification(psi_se, dims: tuple[int, int]) -> np.ndarray:
    """``L[j, k]`` = amplitude of ``|j>_S |k>_E``; ``L L^dagger = tr_E |psi><psi|``."""
    d_s, d_e = (int(d) for d in dims)
    psi_se = np.asarray(psi_se, dtype=np.complex128).reshape(-1)
    if psi_se.size != d_s * d_e:
        raise DimensionError(f"state of length {psi_se.size} does not factor as {d_s} x {d_e}")
    return psi_se.reshape(d_s, d_e).copy()


# --- bound maximization -------------------------------------------------------


def _semi_unitary_from(x: np.ndarray) -> np.ndarray:
    # symmetric (polar) orthonormalization of the rows; fixed point on semi-unitaries
    return _polar_svd(x)[1]


def _project_out(y: np.ndarray, l: np.ndarray) -> np.ndarray | None:
    y = y - l * (np.vdot(l, y) / np.vdot(l, l))
    n = np.sqrt(norm_squared(y))
    if n <= 1e-12:
        return None
    return y / n


@dataclass
class _Problem:
    relation: str
    a: np.ndarray
    b: np.ndarray
    root: np.ndarray
    d_e: int
    sign: int
    commutator_term: float
    lhs: float

    @property
    def d_s(self) -> int:
        return self.root.shape[0]

    @property
    def n_params(self) -> int:
        block = 2 * self.d_s * self.d_e
        return 2 * block if self.relation == "mp1" else block

    def unpack(self, x: np.ndarray):
        block = self.d_s * self.d_e
        cx = (x[:block] + 1j * x[block : 2 * block]).reshape(self.d_s, self.d_e)
        l = self.root @ _semi_unitary_from(cx)
        if self.relation != "mp1":
            return l, None
        cy = (x[2 * block : 3 * block] + 1j * x[3 * block :]).reshape(self.d_s, self.d_e)
        return l, _project_out(cy, l)

    def pack(self, u: np.ndarray, l_perp: np.ndarray | None) -> np.ndarray:
        parts = [u.real.ravel(), u.imag.ravel()]
        if self.relation == "mp1":
            parts += [l_perp.real.ravel(), l_perp.imag.ravel()]
        return np.concatenate(parts)

    def rhs(self, l: np.ndarray, l_perp: np.ndarray | None) -> float:
        if self.relation == "mp1":
            if l_perp is None:
                return self.commutator_term
            m = self.a - 1j * self.sign * self.b
            return self.commutator_term + abs(np.vdot(l_perp, m @ l)) ** 2
        m = self.a + self.b
        d = av_decompose(m, l)
        return 0.0 if d.eigenstate else 0.5 * abs(np.vdot(d.residual, m @ l)) ** 2

    def value(self, x: np.ndarray) -> float:
        return self.rhs(*self.unpack(x))


def _make_problem(relation, a, b, rho, d_e, sign) -> _Problem:
    if relation not in ("mp1", "mp2"):
        raise ValueError(f"relation must be 'mp1' or 'mp2', got {relation!r}")
    a = check_hermitian(a, "A")
    b = check_hermitian(b, "B")
    rho = check_density(rho)
    if abs(np.real(np.trace(rho)) - 1.0) > NORM_TOL:
        raise ConstraintError("rho must have unit trace")
    d_s = rho.shape[0]
    if a.shape != rho.shape or b.shape != rho.shape:
        raise DimensionError(f"A {a.shape}, B {b.shape} and rho {rho.shape} must match")
    if int(d_e) < d_s:
        raise DimensionError(f"d_E = {d_e} is infeasible: need d_E >= d_S = {d_s}")
    s = 1 if sign in (1, "+") else -1
    comm = complex(np.trace(commutator(a, b) @ rho))
    var_a = np.real(np.trace(a @ a @ rho)) - np.real(np.trace(a @ rho)) ** 2
    var_b = np.real(np.trace(b @ b @ rho)) - np.real(np.trace(b @ rho)) ** 2
    return _Problem(relation, a, b, psd_sqrt(rho), int(d_e), s, float((1j * s * comm).real), float(var_a + var_b))


def _default_maxiter(problem: _Problem) -> int:
    return 200 * problem.n_params


def _local_search(problem: _Problem, x0: np.ndarray, maxiter: int):
    res = nelder_mead(lambda x: -problem.value(x), x0, maxiter, xatol=1e-9, fatol=1e-14)
    # restart the simplex once at the optimum; NM stalls in higher dimensions otherwise
    res2 = nelder_mead(lambda x: -problem.value(x), res.x, maxiter, xatol=1e-10, fatol=1e-15)
    best = res2 if res2.fun <= res.fun else res
    return -best.fun, best.x, int(res.nfev + res2.nfev)


def _start_point(problem: _Problem, seed: int) -> np.ndarray:
    rng = make_rng(seed)
    while True:
        x = rng.standard_normal(problem.n_params)
        if problem.relation != "mp1" or problem.unpack(x)[1] is not None:
            return x


@dataclass
class MixedBoundResult:
    """Best right-hand side found and where it was found."""

    relation: str
    d_e: int
    best_rhs: float
    lhs: float
    restarts: int
    best_seed: int | None
    l: np.ndarray
    l_perp: np.ndarray | None
    evaluations: int
    history: list[float] = field(default_factory=list, repr=False)

    @property
    def gap(self) -> float:
        return self.lhs - self.best_rhs


def replay_restart(relation, a, b, rho, d_e, restart_seed: int, maxiter: int | None = None, sign=1) -> float:
    """Re-run a single restart from its recorded seed; returns its rhs."""
    problem = _make_problem(relation, a, b, rho, d_e, sign)
    maxiter = maxiter or _default_maxiter(problem)
    return _local_search(problem, _start_point(problem, restart_seed), maxiter)[0]


def optimize_mixed_bound(
    relation: str,
    a,
    b,
    rho,
    d_e: int,
    budget: int = 32,
    seed: int = 0,
    sign=1,
    maxiter: int | None = None,
    warm_start: tuple[np.ndarray, np.ndarray | None] | None = None,
) -> MixedBoundResult:
    """Maximize the right-hand side of a mixed-state relation over amplitude operators.

    ``L = sqrt(rho) U`` is searched over semi-unitary ``U`` (``d_S x d_E``) and,
    for ``"mp1"``, jointly over normalized ``L_perp`` orthogonal to ``L``.
    Each of the ``budget`` restarts runs Nelder-Mead from the point drawn with
    child seed ``r`` of ``seed``, so increasing the budget only adds restarts
    and never lowers the result.

    Args:
        relation: ``"mp1"`` or ``"mp2"``.
        a, b: Hermitian observables on ``H_S``.
        rho: Normalized density operator.
        d_e: Environment dimension, at least ``d_S``.
        budget: Number of restarts.
        seed: Base seed.
        sign: Sign choice for ``"mp1"``.
        maxiter: Nelder-Mead iterations per restart (default ``200 * n_params``).
        warm_start: ``(U, L_perp)`` evaluated and refined before the random
            restarts; smaller matrices are padded with zero columns.
    """
    problem = _make_problem(relation, a, b, rho, d_e, sign)
    if budget < 1:
        raise ValueError("budget must be positive")
    maxiter = maxiter or _default_maxiter(problem)
    best_val, best_x, best_seed = -np.inf, None, None
    evaluations = 0
    history = []
    if warm_start is not None:
        u0, lp0 = warm_start
        pad = problem.d_e - u0.shape[1]
        u0 = np.pad(u0, ((0, 0), (0, pad)))
        lp0 = None if lp0 is None else np.pad(lp0, ((0, 0), (0, pad)))
        x0 = problem.pack(u0, lp0)
        start_val = problem.value(x0)
        val, x, nfev = _local_search(problem, x0, maxiter)
        if start_val > val:
            val, x = start_val, x0
        best_val, best_x, evaluations = val, x, nfev
    for child in spawn_seeds(seed, budget):
        val, x, nfev = _local_search(problem, _start_point(problem, child), maxiter)
        evaluations += nfev
        # ties keep the earlier (lower-index) restart
        if val > best_val:
            best_val, best_x, best_seed = val, x, child
        history.append(best_val)
    l, l_perp = problem.unpack(best_x)
    return MixedBoundResult(
        relation, problem.d_e, float(best_val), problem.lhs, budget, best_seed, l, l_perp, evaluations, history
    )


def amplitude_to_unitary(l: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Semi-unitary ``U`` with ``L = sqrt(rho) U`` (the polar factor of ``L``)."""
    return _polar_svd(as_matrix(l))[1]


class ConjectureSweepRow(NamedTuple):
    d_e: int
    best_rhs: float
    lhs: float
    restarts: int
    best_seed: int | None
    plateau: float | None


def conjecture_sweep(
    a, b, rho, d_e_range: Iterable[int], budget: int = 32, seed: int = 0, sign=1, maxiter: int | None = None
) -> list[ConjectureSweepRow]:
    """Best first-relation bound for each environment size, in ascending ``d_E``.

    Each size is warm-started from the previous optimum padded with a zero
    column, so the sequence of bounds is nondecreasing.  ``plateau`` is
    ``best_rhs(d_E) - best_rhs(2 d_S)`` for ``d_E >= 2 d_S`` and ``None`` below.
    """
    rho = check_density(rho)
    d_s = rho.shape[0]
    sizes = sorted(int(d) for d in d_e_range)
    if not sizes or sizes[0] < d_s or sizes[-1] > 3 * d_s:
        raise DimensionError(f"d_E range must lie within [{d_s}, {3 * d_s}], got {sizes}")
    rows = []
    warm = None
    anchor = None
    for d_e in sizes:
        res = optimize_mixed_bound("mp1", a, b, rho, d_e, budget, seed, sign, maxiter, warm)
        warm = (amplitude_to_unitary(res.l, rho), res.l_perp)
        if d_e == 2 * d_s:
            anchor = res.best_rhs
        plateau = res.best_rhs - anchor if anchor is not None else None
        rows.append(ConjectureSweepRow(d_e, res.best_rhs, res.lhs, budget, res.best_seed, plateau))
    return rows
