"""Uncertainty relations evaluated as ``lhs >= rhs`` reports.

Each evaluator returns a :class:`RelationReport`.  States are normalized on
entry, so any nonzero vector (or amplitude operator, see :mod:`.av`) is
accepted.  Auxiliary orthogonal vectors ``psi_perp`` default to the choice
that maximizes the right-hand side: the normalized component of
``(alpha A + beta B) psi`` orthogonal to ``psi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .av import ATOL, AvDecomposition, as_amplitude, av_decompose, norm_squared
from .errors import ConstraintError, DimensionError, UncertaintyKitError
from .linalg import anticommutator, as_square, check_hermitian, commutator

SATURATION_TOL = 1e-8
PERP_TOL = 1e-9


@dataclass(frozen=True)
class RelationReport:
    """Two sides of an uncertainty relation evaluated on one state.

    ``slack = lhs - rhs`` and ``saturated`` is ``|slack| <= tolerance``.
    ``witness`` carries auxiliary values (standard deviations, the
    ``psi_perp`` used, the equality-condition cross-check).
    """

    relation_id: str
    lhs: float
    rhs: float
    tolerance: float = SATURATION_TOL
    witness: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def saturated(self) -> bool:
        return abs(self.slack) <= self.tolerance


def _normalized(psi) -> np.ndarray:
    psi = as_amplitude(psi)
    n2 = norm_squared(psi)
    if n2 <= 0.0:
        raise UncertaintyKitError("state has zero norm")
    return psi / np.sqrt(n2)


def _prepare(a, b, psi, hermitian: bool = True):
    if hermitian:
        a = check_hermitian(a, "A")
        b = check_hermitian(b, "B")
    else:
        a = as_square(a, "A")
        b = as_square(b, "B")
    if a.shape != b.shape:
        raise DimensionError(f"A and B have different shapes {a.shape} and {b.shape}")
    psi = _normalized(psi)
    if psi.shape[0] != a.shape[0]:
        raise DimensionError(f"operators of side {a.shape[0]} cannot act on state of dimension {psi.shape[0]}")
    return a, b, psi


def _mean(op: np.ndarray, psi: np.ndarray) -> complex:
    # psi is already normalized
    return complex(np.vdot(psi, op @ psi))


def _corr(da: AvDecomposition, db: AvDecomposition) -> complex | None:
    if da.eigenstate or db.eigenstate:
        return None
    return complex(np.vdot(da.residual, db.residual))


def robertson(a, b, psi, tolerance: float = SATURATION_TOL, atol: float = ATOL) -> RelationReport:
    """``dA dB >= |<[A, B]>| / 2`` for Hermitian ``A``, ``B``."""
    a, b, psi = _prepare(a, b, psi)
    da, db = av_decompose(a, psi, atol), av_decompose(b, psi, atol)
    comm = _mean(commutator(a, b), psi)
    corr = _corr(da, db)
    report = RelationReport(
        "robertson",
        da.delta * db.delta,
        0.5 * abs(comm),
        tolerance,
        {
            "delta_a": da.delta,
            "delta_b": db.delta,
            "mean_a": da.expectation.real,
            "mean_b": db.expectation.real,
            "commutator": comm,
            "corr": corr,
        },
    )
    if corr is not None:
        report.witness["equality_condition"] = abs(abs(corr.imag) - 1.0) <= 10 * tolerance
    return report


def schrodinger(a, b, psi, tolerance: float = SATURATION_TOL, atol: float = ATOL) -> RelationReport:
    """``dA^2 dB^2 >= (<{A,B}>/2 - <A><B>)^2 + |<[A,B]>/2|^2``."""
    a, b, psi = _prepare(a, b, psi)
    da, db = av_decompose(a, psi, atol), av_decompose(b, psi, atol)
    mean_a, mean_b = da.expectation.real, db.expectation.real
    anti = _mean(anticommutator(a, b), psi).real
    comm = _mean(commutator(a, b), psi)
    cov = 0.5 * anti - mean_a * mean_b
    corr = _corr(da, db)
    report = RelationReport(
        "schrodinger",
        (da.delta * db.delta) ** 2,
        cov**2 + abs(0.5 * comm) ** 2,
        tolerance,
        {"delta_a": da.delta, "delta_b": db.delta, "covariance": cov, "commutator": comm, "corr": corr},
    )
    if corr is not None:
        report.witness["equality_condition"] = abs(abs(corr) ** 2 - 1.0) <= 10 * tolerance
    return report


def sum_relation(ops: Sequence, psi, tolerance: float = SATURATION_TOL, atol: float = ATOL) -> RelationReport:
    """``sum_j dA_j >= d(sum_j A_j)`` for any linear operators."""
    if len(ops) < 2:
        raise ValueError("need at least two operators")
    ops = [as_square(op, f"A_{j}") for j, op in enumerate(ops)]
    if len({op.shape for op in ops}) != 1:
        raise DimensionError(f"operators have mismatched shapes {[op.shape for op in ops]}")
    psi = _normalized(psi)
    if psi.shape[0] != ops[0].shape[0]:
        raise DimensionError(f"operators of side {ops[0].shape[0]} cannot act on state of dimension {psi.shape[0]}")
    parts = [av_decompose(op, psi, atol) for op in ops]
    total = av_decompose(sum(ops), psi, atol)
    report = RelationReport(
        "sum",
        float(sum(p.delta for p in parts)),
        total.delta,
        tolerance,
        {"deltas": [p.delta for p in parts], "delta_sum": total.delta},
    )
    if not total.eigenstate:
        rcorrs = [float(np.vdot(total.residual, p.residual).real) for p in parts if not p.eigenstate]
        report.witness["rcorr"] = rcorrs
        report.witness["equality_condition"] = all(abs(r - 1.0) <= 10 * tolerance for r in rcorrs)
    return report


def _check_perp(psi_perp, psi: np.ndarray) -> np.ndarray:
    v = as_amplitude(psi_perp, "psi_perp")
    if v.shape != psi.shape:
        raise DimensionError(f"psi_perp has shape {v.shape}, expected {psi.shape}")
    if abs(norm_squared(v) - 1.0) > PERP_TOL:
        raise ConstraintError(f"psi_perp must have unit norm, got norm^2 = {norm_squared(v):.12g}")
    overlap = abs(np.vdot(psi, v))
    if overlap > PERP_TOL:
        raise ConstraintError(f"psi_perp is not orthogonal to psi (|<psi|psi_perp>| = {overlap:.3e})")
    return v


def _projection_term(m: np.ndarray, psi: np.ndarray, psi_perp, atol: float) -> tuple[float, dict]:
    """``|<psi_perp| M |psi>|^2`` with the optimal ``psi_perp`` when none is given."""
    if psi_perp is None:
        dm = av_decompose(m, psi, atol)
        if dm.eigenstate:
            return 0.0, {"psi_perp": None, "zero_projection": True}
        psi_perp = dm.residual
    else:
        psi_perp = _check_perp(psi_perp, psi)
    return float(abs(np.vdot(psi_perp, m @ psi)) ** 2), {"psi_perp": psi_perp, "zero_projection": False}


def _general_1(alpha, beta, a, b, psi, psi_perp, tolerance, atol, relation_id) -> RelationReport:
    alpha, beta = complex(alpha), complex(beta)
    if alpha == 0 and beta == 0:
        raise ValueError("alpha and beta cannot both be zero")
    da, db = av_decompose(a, psi, atol), av_decompose(b, psi, atol)
    mean_a, mean_b = da.expectation.real, db.expectation.real
    anti = _mean(anticommutator(a, b), psi).real
    comm = _mean(commutator(a, b), psi)
    c = alpha.conjugate() * beta
    proj, extra = _projection_term(alpha * a + beta * b, psi, psi_perp, atol)
    lhs = abs(alpha) ** 2 * da.delta**2 + abs(beta) ** 2 * db.delta**2
    # -i Im(c) <[A,B]> is real because <[A,B]> is imaginary
    rhs = float(-c.real * (anti - 2 * mean_a * mean_b) + (-1j * c.imag * comm).real + proj)
    witness = {"delta_a": da.delta, "delta_b": db.delta, "commutator": comm, "projection": proj, **extra}
    return RelationReport(relation_id, lhs, rhs, tolerance, witness)


def _sign(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def weighted_general(
    alpha, beta, a, b, psi, psi_perp=None, tolerance: float = SATURATION_TOL, atol: float = ATOL
) -> RelationReport:
    """Sum-of-variances bound from the decomposition of ``alpha A + beta B``.

    ``|a|^2 dA^2 + |b|^2 dB^2 >= -Re(a* b)(<{A,B}> - 2<A><B>) - i Im(a* b)<[A,B]>
    + |<psi_perp|(alpha A + beta B)|psi>|^2``.
    """
    a, b, psi = _prepare(a, b, psi)
    return _general_1(alpha, beta, a, b, psi, psi_perp, tolerance, atol, "gen_mp1")


def maccone_pati_1(a, b, psi, psi_perp=None, sign=1, tolerance: float = SATURATION_TOL, atol: float = ATOL):
    """``dA^2 + dB^2 >= +-i<[A,B]> + |<psi_perp|(A -+ iB)|psi>|^2``.

    ``sign=+1`` selects the upper signs.  With the default ``psi_perp`` the
    bound is attained: the right-hand side then equals ``d(A -+ iB)^2``.
    """
    s = _sign(sign)
    a, b, psi = _prepare(a, b, psi)
    rid = "mp1+" if s > 0 else "mp1-"
    return _general_1(1.0, -1j * s, a, b, psi, psi_perp, tolerance, atol, rid)


def _general_2(alpha, beta, a, b, psi, tolerance, atol, relation_id) -> RelationReport:
    alpha, beta = complex(alpha), complex(beta)
    da, db = av_decompose(a, psi, atol), av_decompose(b, psi, atol)
    m = alpha * a + beta * b
    dm = av_decompose(m, psi, atol)
    rhs = 0.0 if dm.eigenstate else float(0.5 * abs(np.vdot(dm.residual, m @ psi)) ** 2)
    lhs = abs(alpha) ** 2 * da.delta**2 + abs(beta) ** 2 * db.delta**2
    witness = {"delta_a": da.delta, "delta_b": db.delta, "delta_combo": dm.delta, "zero_projection": dm.eigenstate}
    return RelationReport(relation_id, lhs, rhs, tolerance, witness)


def weighted_general_2(alpha, beta, a, b, psi, tolerance: float = SATURATION_TOL, atol: float = ATOL):
    """``|a|^2 dA^2 + |b|^2 dB^2 >= |<psi_perp_M| M |psi>|^2 / 2`` with ``M = alpha A + beta B``."""
    a, b, psi = _prepare(a, b, psi, hermitian=False)
    return _general_2(alpha, beta, a, b, psi, tolerance, atol, "gen_mp2")


def maccone_pati_2(a, b, psi, tolerance: float = SATURATION_TOL, atol: float = ATOL) -> RelationReport:
    """``dA^2 + dB^2 >= |<psi_perp_{A+B}|(A + B)|psi>|^2 / 2``."""
    a, b, psi = _prepare(a, b, psi, hermitian=False)
    return _general_2(1.0, 1.0, a, b, psi, tolerance, atol, "mp2")


def xiao_weighted(
    lam: float,
    a,
    b,
    psi,
    psi_perp_1=None,
    psi_perp_2=None,
    sign=1,
    tolerance: float = SATURATION_TOL,
    atol: float = ATOL,
) -> RelationReport:
    """Weighted relation with parameter ``lam > 0``.

    ``(1 + lam) dA^2 + (1 + 1/lam) dB^2 >= +-2i<[A,B]> + |<p1|(A -+ iB)|psi>|^2
    + |<p2|(lam A -+ iB)|psi>|^2 / lam``.  Obtained by adding the first
    relation to the ``alpha = sqrt(lam)``, ``beta = -+i / sqrt(lam)`` case of
    :func:`weighted_general`.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    s = _sign(sign)
    a, b, psi = _prepare(a, b, psi)
    r1 = _general_1(1.0, -1j * s, a, b, psi, psi_perp_1, tolerance, atol, "mp1")
    root = np.sqrt(lam)
    r2 = _general_1(root, -1j * s / root, a, b, psi, psi_perp_2, tolerance, atol, "gen_mp1")
    rid = "xiao+" if s > 0 else "xiao-"
    witness = {"lambda": lam, "parts": (r1, r2), "delta_a": r1.witness["delta_a"], "delta_b": r1.witness["delta_b"]}
    return RelationReport(rid, r1.lhs + r2.lhs, r1.rhs + r2.rhs, tolerance, witness)


def _sum_pair(a, b, psi, **kw):
    return sum_relation([a, b], psi, **kw)


def _mp1_plus(a, b, psi, **kw):
    return maccone_pati_1(a, b, psi, sign=1, **kw)


def _mp1_minus(a, b, psi, **kw):
    return maccone_pati_1(a, b, psi, sign=-1, **kw)


# two-observable relations addressable by name (CLI, intelligent-state search)
PAIR_RELATIONS = {
    "robertson": robertson,
    "schrodinger": schrodinger,
    "sum": _sum_pair,
    "mp1+": _mp1_plus,
    "mp1-": _mp1_minus,
    "mp2": maccone_pati_2,
}


def evaluate(relation_id: str, a, b, psi, **kw) -> RelationReport:
    try:
        fn = PAIR_RELATIONS[relation_id]
    except KeyError:
        raise ValueError(f"unknown relation {relation_id!r}; expected one of {sorted(PAIR_RELATIONS)}") from None
    return fn(a, b, psi, **kw)


__all__ = [
    "RelationReport",
    "robertson",
    "schrodinger",
    "sum_relation",
    "maccone_pati_1",
    "maccone_pati_2",
    "weighted_general",
    "weighted_general_2",
    "xiao_weighted",
    "evaluate",
    "PAIR_RELATIONS",
]
