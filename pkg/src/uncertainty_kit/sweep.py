"""Randomized verification sweep over every relation and identity.

Each instance ``(dim, seed)`` draws its operators and states from a PCG64
stream seeded with ``(seed, dim)`` and emits one :class:`ReportRow` per
check.  Rows whose id starts with ``identity.`` hold a residual in ``lhs``
(``rhs`` is 0) and fail when it exceeds the identity tolerance; all other
rows are inequalities ``lhs >= rhs`` and fail when ``slack`` drops below
minus the inequality tolerance.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .av import av_decompose, cauchy_schwarz_identity, sum_residual_identity
from .errors import DegenerateError
from .mixed import (
    amplitude_from_density,
    amplitude_from_purification,
    av_operator_decompose,
    mp1_mixed,
    mp2_mixed,
    purify,
    rho_perp,
)
from .propagation import direct_variance, linear_variance
from .relations import (
    SATURATION_TOL,
    maccone_pati_1,
    maccone_pati_2,
    robertson,
    schrodinger,
    sum_relation,
    weighted_general,
    weighted_general_2,
    xiao_weighted,
)
from .report import ReportRow
from .sampling import complex_gaussian, random_density, random_hermitian, random_semi_unitary, random_state

DEFAULT_DIMS = (2, 3, 4, 8)
DEFAULT_SEEDS = range(0, 1000)
DEFAULT_TOLERANCES = {"inequality": 1e-9, "identity": 1e-9, "saturation": SATURATION_TOL}
XIAO_LAMBDAS = (0.5, 1.0, 2.0)
THREADS_ENV = "UNCERTAINTY_KIT_THREADS"


class Violation(NamedTuple):
    row: ReportRow
    reason: str


def worker_count() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def _orthonormal_to(psi: np.ndarray, rng) -> np.ndarray:
    while True:
        v = complex_gaussian(psi.shape, rng)
        v = v - psi * (np.vdot(psi, v) / np.vdot(psi, psi))
        n = np.linalg.norm(v)
        if n > 1e-8:
            return v / n


def _av_residual(a, psi) -> float:
    d = av_decompose(a, psi)
    scale = max(1.0, float(np.linalg.norm(a @ psi)))
    recon = np.linalg.norm(a @ psi - d.reconstruct(psi)) / scale
    if d.eigenstate:
        return float(recon)
    ortho = abs(np.vdot(psi, d.residual)) / np.linalg.norm(psi) ** 2
    norm = abs(np.linalg.norm(d.residual) - np.linalg.norm(psi)) / np.linalg.norm(psi)
    return float(max(recon, ortho, norm))


class _Instance:
    """Collects rows for one ``(dim, seed)`` pair."""

    def __init__(self, dim: int, seed: int, saturation: float):
        self.dim, self.seed, self.saturation = dim, seed, saturation
        self.rows: list[ReportRow] = []

    def identity(self, rid: str, fn: Callable[[], float]) -> None:
        t0 = time.perf_counter_ns()
        value = float(fn())
        us = (time.perf_counter_ns() - t0) // 1000
        self.rows.append(ReportRow(f"identity.{rid}", self.dim, self.seed, value, 0.0, value, True, us))

    def relation(self, rid: str, fn: Callable, rhs_shift: Callable | None = None) -> None:
        t0 = time.perf_counter_ns()
        rep = fn()
        us = (time.perf_counter_ns() - t0) // 1000
        rhs = rep.rhs + (rhs_shift(rep) if rhs_shift else 0.0)
        slack = rep.lhs - rhs
        self.rows.append(
            ReportRow(rid, self.dim, self.seed, float(rep.lhs), float(rhs), float(slack), abs(slack) <= self.saturation, us)
        )


def instance_rows(dim: int, seed: int, negate: bool = False, saturation: float = SATURATION_TOL) -> list[ReportRow]:
    """All checks for one instance; ``negate`` flips the commutator term of the first relation's rows."""
    rng = np.random.default_rng([seed, dim])
    inst = _Instance(dim, seed, saturation)
    general = complex_gaussian((dim, dim), rng)
    a, b, c = (random_hermitian(dim, rng) for _ in range(3))
    psi = random_state(dim, rng)
    perp = _orthonormal_to(psi, rng)
    weights = complex_gaussian(2, rng)
    coeffs = rng.standard_normal(3)
    f, g = random_state(dim, rng), random_state(dim, rng)
    rho = random_density(dim, rng)
    d_e = dim + seed % (2 * dim + 1)
    l1 = amplitude_from_density(rho, random_semi_unitary(dim, d_e, rng))
    l2 = amplitude_from_density(rho, random_semi_unitary(dim, d_e, rng))
    l_perp = _orthonormal_to(l1, rng)

    inst.identity("av", lambda: _av_residual(general, psi))
    inst.identity("av_operator", lambda: _av_residual(general, l1))
    inst.identity("sum_residual", lambda: sum_residual_identity([general, a], psi))
    inst.identity(
        "linear_variance",
        lambda: abs(linear_variance(coeffs, [a, b, c], psi) - (dv := direct_variance(coeffs, [a, b, c], psi)))
        / max(1.0, dv),
    )

    def cs():
        try:
            parts = cauchy_schwarz_identity(f, g)
        except DegenerateError:
            return 0.0
        return abs(parts.lhs - parts.rhs_sum) / parts.lhs

    inst.identity("cauchy_schwarz", cs)

    def rho_perp_independence():
        target = rho_perp(a, rho)
        worst = 0.0
        for l in (l1, l2):
            r = av_operator_decompose(a, l).residual
            worst = max(worst, float(np.linalg.norm(r @ r.conj().T - target)))
        return worst

    inst.identity("rho_perp", rho_perp_independence)
    inst.identity(
        "purification", lambda: float(np.linalg.norm(amplitude_from_purification(purify(l1), l1.shape) - l1))
    )

    inst.relation("robertson", lambda: robertson(a, b, psi))
    inst.relation("schrodinger", lambda: schrodinger(a, b, psi))
    inst.relation("sum", lambda: sum_relation([a, b, general], psi))
    for s, tag in ((1, "+"), (-1, "-")):
        shift = (lambda rep, s=s: -2.0 * (1j * s * rep.witness["commutator"]).real) if negate else None
        inst.relation(f"mp1{tag}", lambda s=s: maccone_pati_1(a, b, psi, sign=s), shift)
        inst.relation(f"mp1{tag}.supplied", lambda s=s: maccone_pati_1(a, b, psi, perp, sign=s))
        inst.relation(f"gen_mp1.{tag}i", lambda s=s: weighted_general(1.0, s * 1j, a, b, psi))
    inst.relation("mp2", lambda: maccone_pati_2(a, b, psi))
    inst.relation("gen_mp1.random", lambda: weighted_general(weights[0], weights[1], a, b, psi))
    inst.relation("gen_mp1.random.supplied", lambda: weighted_general(weights[0], weights[1], a, b, psi, perp))
    inst.relation("gen_mp2.random", lambda: weighted_general_2(weights[0], weights[1], general, a, psi))
    xsign = 1 if seed % 2 == 0 else -1
    for lam in XIAO_LAMBDAS:
        tag = "+" if xsign > 0 else "-"
        inst.relation(f"xiao{tag}.lam={lam:g}", lambda lam=lam: xiao_weighted(lam, a, b, psi, sign=xsign))
    inst.relation("mp1_mixed", lambda: mp1_mixed(a, b, l1, l_perp, sign=xsign))
    inst.relation("mp2_mixed", lambda: mp2_mixed(a, b, l1))
    return inst.rows


def find_violations(rows: Iterable[ReportRow], tolerances: dict[str, float]) -> list[Violation]:
    out = []
    for row in rows:
        if row.relation_id.startswith("identity."):
            if abs(row.slack) > tolerances["identity"]:
                out.append(Violation(row, f"identity residual {row.slack:.3e} > {tolerances['identity']:g}"))
        elif row.slack < -tolerances["inequality"]:
            out.append(Violation(row, f"slack {row.slack:.3e} < -{tolerances['inequality']:g}"))
    return out


def run_verify(
    dims: Sequence[int] = DEFAULT_DIMS,
    seeds: Iterable[int] = DEFAULT_SEEDS,
    tolerances: dict[str, float] | None = None,
    negate: bool = False,
    workers: int | None = None,
) -> tuple[list[ReportRow], list[Violation]]:
    """Run every instance; rows come back ordered by ``dim`` then ``seed`` whatever the worker count."""
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    jobs = [(d, s) for d in dims for s in seeds]
    if not jobs:
        raise ValueError("empty sweep: no dims or no seeds")

    def run(idx_job):
        idx, (d, s) = idx_job
        return instance_rows(d, s, negate=negate and idx == 0, saturation=tol["saturation"])

    workers = workers or worker_count()
    if workers == 1:
        chunks = [run(j) for j in enumerate(jobs)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run, enumerate(jobs)))
    rows = [r for chunk in chunks for r in chunk]
    return rows, find_violations(rows, tol)
