import numpy as np
import pytest

from uncertainty_kit.operators import SIGMA_X, SIGMA_Y, SIGMA_Z
from uncertainty_kit.relations import evaluate
from uncertainty_kit.sampling import random_hermitian
from uncertainty_kit.search import StateFamily, bloch_family, find_intelligent_state, sphere_family


def meridian_family():
    """cos t |0> + e^{i pi/4} sin t |1>; only the poles saturate Robertson for (sx, sy)."""

    def state(theta):
        (t,) = theta
        return np.array([np.cos(t), np.exp(1j * np.pi / 4) * np.sin(t)])

    return StateFamily(state, np.array([0.0]), np.array([np.pi]))


def test_robertson_intelligent_state_is_a_pole():
    res = find_intelligent_state("robertson", SIGMA_X, SIGMA_Y, meridian_family(), budget=400, seed=1, restarts=4)
    assert res.converged and abs(res.best_slack) <= 1e-6
    assert max(abs(res.best_state[0]), abs(res.best_state[1])) == pytest.approx(1, abs=1e-3)
    assert res.report.slack == pytest.approx(res.best_slack, abs=1e-9)


def test_robertson_bloch_search_finds_saturating_state():
    res = find_intelligent_state("robertson", SIGMA_X, SIGMA_Y, bloch_family(), budget=400, seed=0, restarts=4)
    assert res.converged
    rep = evaluate("robertson", SIGMA_X, SIGMA_Y, res.best_state)
    assert abs(rep.slack - res.best_slack) <= 1e-9


@pytest.mark.parametrize("relation,a,b", [("schrodinger", SIGMA_Z, SIGMA_Z), ("sum", SIGMA_Z, SIGMA_Z)])
def test_self_case_saturates_everywhere(relation, a, b):
    res = find_intelligent_state(relation, a, b, sphere_family(2), budget=50, seed=3, restarts=2)
    assert res.converged


def test_search_is_deterministic_and_reports_budget():
    a, b = random_hermitian(3, seed=1), random_hermitian(3, seed=2)
    r1 = find_intelligent_state("mp2", a, b, sphere_family(3), budget=60, seed=5, restarts=2)
    r2 = find_intelligent_state("mp2", a, b, sphere_family(3), budget=60, seed=5, restarts=2)
    np.testing.assert_array_equal(r1.best_state, r2.best_state)
    assert r1.best_slack >= -1e-8
    assert 0 < r1.iterations <= 120
    assert abs(np.linalg.norm(r1.best_state) - 1) <= 1e-12
