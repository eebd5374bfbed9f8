"""Derivative-free search for states that saturate a relation.

The local search is scipy's Nelder-Mead simplex, restarted from seeded
random points in the parameter box.  Restart ``r`` of a search with seed
``s`` always starts from the same point, so results replay exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .relations import SATURATION_TOL, RelationReport, evaluate
from .sampling import make_rng, spawn_seeds

DEFAULT_RESTARTS = 16


@dataclass(frozen=True)
class StateFamily:
    """A map from a box of real parameters to normalized states."""

    map: Callable[[np.ndarray], np.ndarray]
    lower: np.ndarray
    upper: np.ndarray

    def __call__(self, theta) -> np.ndarray:
        return self.map(np.asarray(theta, dtype=float))

    @property
    def n_params(self) -> int:
        return len(self.lower)


def bloch_family() -> StateFamily:
    """``cos(t/2)|0> + e^{i p} sin(t/2)|1>`` over ``t in [0, pi]``, ``p in [0, 2 pi]``."""

    def state(theta):
        t, p = theta
        return np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)], dtype=np.complex128)

    return StateFamily(state, np.array([0.0, 0.0]), np.array([np.pi, 2 * np.pi]))


def sphere_family(d: int) -> StateFamily:
    """All unit vectors of dimension ``d`` via ``2 d`` real coordinates in ``[-1, 1]``."""

    def state(x):
        v = x[:d] + 1j * x[d:]
        n = np.linalg.norm(v)
        if n == 0.0:
            v = np.zeros(d, dtype=np.complex128)
            v[0] = 1.0
            return v
        return v / n

    return StateFamily(state, -np.ones(2 * d), np.ones(2 * d))


@dataclass(frozen=True)
class SearchResult:
    best_state: np.ndarray
    best_slack: float
    iterations: int
    converged: bool
    best_params: np.ndarray
    report: RelationReport


def nelder_mead(fun, x0, maxiter: int, bounds=None, xatol: float = 1e-12, fatol: float = 1e-14):
    """One bounded, adaptive Nelder-Mead run; returns scipy's ``OptimizeResult``."""
    return minimize(
        fun,
        x0,
        method="Nelder-Mead",
        bounds=bounds,
        options={"maxiter": maxiter, "maxfev": 2 * maxiter, "xatol": xatol, "fatol": fatol, "adaptive": True},
    )


def find_intelligent_state(
    relation_id: str,
    a,
    b,
    family: StateFamily,
    budget: int = 2000,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    tolerance: float = SATURATION_TOL,
) -> SearchResult:
    """Minimize ``|slack|`` of a two-observable relation over a state family.

    Args:
        relation_id: A key of :data:`uncertainty_kit.relations.PAIR_RELATIONS`.
        a, b: The two observables.
        family: Parameterized states.
        budget: Nelder-Mead iterations per restart.
        seed: Base seed; restart ``r`` uses child seed ``r``.
        restarts: Number of random starting points.
        tolerance: ``converged`` is set when the best ``|slack|`` is at most this.
    """
    bounds = list(zip(family.lower, family.upper))

    def objective(theta):
        return abs(evaluate(relation_id, a, b, family(theta), tolerance=tolerance).slack)

    best = None
    iterations = 0
    for child in spawn_seeds(seed, restarts):
        x0 = make_rng(child).uniform(family.lower, family.upper)
        res = nelder_mead(objective, x0, budget, bounds)
        iterations += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    state = family(best.x)
    report = evaluate(relation_id, a, b, state, tolerance=tolerance)
    if report.slack < -tolerance:
        raise ArithmeticError(f"{relation_id} violated at searched state: slack {report.slack:.3e}")
    return SearchResult(state, report.slack, iterations, abs(report.slack) <= tolerance, best.x, report)
