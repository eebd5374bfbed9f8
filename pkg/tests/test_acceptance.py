"""Acceptance criteria 1-10; each test reports a PASS/FAIL line in the terminal summary."""

import subprocess
import sys
import time

import numpy as np
import pytest

from uncertainty_kit import cli
from uncertainty_kit.av import av_decompose, correlation
from uncertainty_kit.mixed import (
    amplitude_from_density,
    amplitude_from_purification,
    av_operator_decompose,
    conjecture_sweep,
    mp1_mixed,
    mp2_mixed,
    purify,
    rho_perp,
)
from uncertainty_kit.operators import KET_0, KET_PLUS, SIGMA_X, SIGMA_Y, fock_state, momentum, position, spin_half
from uncertainty_kit.propagation import direct_variance, linear_variance, taylor_family, taylor_validate
from uncertainty_kit.relations import maccone_pati_1, maccone_pati_2, robertson, schrodinger
from uncertainty_kit.sampling import complex_gaussian, random_density, random_hermitian, random_semi_unitary, random_state
from uncertainty_kit.sweep import find_violations, run_verify


@pytest.mark.criterion(1, "AV identity exactness (1000 instances, dims 2-16)")
def test_av_identity_exactness(note):
    t0 = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng(1)
    for i in range(1000):
        d = (2, 3, 4, 8, 16)[i % 5]
        a = complex_gaussian((d, d), rng)
        if i % 2:
            a = 0.5 * (a + a.conj().T)
        psi = complex_gaussian(d, rng)
        dec = av_decompose(a, psi)
        n2 = np.vdot(psi, psi).real
        recon = np.linalg.norm(a @ psi - dec.reconstruct(psi)) / (np.linalg.norm(a) * np.sqrt(n2))
        ortho = abs(np.vdot(psi, dec.residual)) / n2
        norm = abs(np.vdot(dec.residual, dec.residual).real - n2) / n2
        worst = max(worst, recon, ortho, norm)
    elapsed = time.perf_counter() - t0
    note(f"[1] worst relative residual {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 10


@pytest.mark.criterion(2, "inequality sweep (10^4 instances, all relations)")
def test_inequality_sweep(note):
    t0 = time.perf_counter()
    rows, _ = run_verify((2, 3, 4, 8), range(2500))
    elapsed = time.perf_counter() - t0
    inequality_rows = [r for r in rows if not r.relation_id.startswith("identity.")]
    kinds = {r.relation_id.split(".")[0] for r in inequality_rows}
    assert kinds >= {"robertson", "schrodinger", "sum", "mp1+", "mp1-", "mp2", "gen_mp1", "gen_mp2",
                     "xiao+", "xiao-", "mp1_mixed", "mp2_mixed"}
    assert len({(r.dim, r.seed) for r in rows}) == 10_000
    violations = find_violations(inequality_rows, {"inequality": 1e-9, "identity": 1e-9})
    worst = min(r.slack for r in inequality_rows)
    note(f"[2] {len(inequality_rows)} inequality rows, worst slack {worst:.2e}, {elapsed:.1f}s")
    assert not violations
    assert elapsed < 60


@pytest.mark.criterion(3, "spin anchor on |x+>")
def test_spin_anchor():
    sx, sy = spin_half("x"), spin_half("y")
    assert abs(av_decompose(sx, KET_PLUS).delta - 0.0) <= 1e-12
    assert abs(av_decompose(sy, KET_PLUS).delta - 0.5) <= 1e-12
    assert abs(robertson(sx, sy, KET_PLUS).rhs) <= 1e-12
    assert abs(schrodinger(sx, sy, KET_PLUS).rhs) <= 1e-12
    for sign in (1, -1):
        assert abs(maccone_pati_1(sx, sy, KET_PLUS, sign=sign).rhs - 0.25) <= 1e-9


@pytest.mark.criterion(4, "Heisenberg anchor, truncated oscillator dim 50")
def test_heisenberg_anchor():
    t0 = time.perf_counter()
    n = 50
    x, p, psi = position(n), momentum(n), fock_state(n, 0)
    r = robertson(x, p, psi)
    dx, dp = av_decompose(x, psi).delta, av_decompose(p, psi).delta
    half_comm = 0.5 * abs(np.vdot(psi, (x @ p - p @ x) @ psi))
    elapsed = time.perf_counter() - t0
    assert abs(dx * dp - 0.5) <= 1e-9 and abs(r.lhs - 0.5) <= 1e-9
    assert abs(half_comm - 0.5) <= 1e-9 and abs(r.rhs - 0.5) <= 1e-9
    assert elapsed < 1


@pytest.mark.criterion(5, "linear propagation exactness (10^4 combos)")
def test_linear_propagation_exactness(note):
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(10_000):
        d = 2 + i % 7
        n = 1 + i % 5
        ops = [random_hermitian(d, rng) for _ in range(n)]
        c = rng.standard_normal(n)
        psi = random_state(d, rng)
        exact = direct_variance(c, ops, psi)
        worst = max(worst, abs(linear_variance(c, ops, psi) - exact) / max(exact, 1e-300))
    note(f"[5] worst relative error {worst:.2e}")
    assert worst <= 1e-9


def _scale_for_ratio(ratio, dim, seed):
    # spreads are linear in the scale: solve delta / mean = ratio for each operator, keep the smaller scale
    a1, b1, psi = taylor_family(1.0, dim, seed)
    a0, b0, _ = taylor_family(0.0, dim, seed)
    scales = []
    for op1, op0 in ((a1, a0), (b1, b0)):
        slope = av_decompose(op1 - op0, psi).delta
        mean0 = av_decompose(op0, psi).expectation.real
        mean_slope = av_decompose(op1 - op0, psi).expectation.real
        scales.append(ratio * mean0 / (slope - ratio * mean_slope))
    return min(scales)


@pytest.mark.criterion(6, "Taylor propagation convergence")
def test_taylor_convergence(note):
    dim, seed = 4, 0
    errors = []
    for s in (1.0, 0.5, 0.25):
        a, b, psi = taylor_family(s, dim, seed)
        chk = taylor_validate(lambda u, v: u * v, [a, b], psi)
        errors.append(abs(chk.exact - chk.approx))
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    note(f"[6] absolute errors {errors}, reduction ratios {ratios}")
    assert min(ratios) >= 3.5

    # informational: the skewed four-outcome family at delta/mean = 0.05
    s = _scale_for_ratio(0.05, dim, seed)
    a, b, psi = taylor_family(s, dim, seed)
    note(f"[6] a*b family at delta/mean 0.05: rel_error {taylor_validate(lambda u, v: u * v, [a, b], psi).rel_error:.4f}")

    # f(a) = a^2 on a balanced two-outcome observable with delta/mean = 0.05
    m, r = 3.0, 0.05
    op = np.diag([m * (1 + r), m * (1 - r)])
    dec = av_decompose(op, KET_PLUS)
    assert dec.delta / dec.expectation.real == pytest.approx(0.05, rel=1e-12)
    chk = taylor_validate(lambda u: u**2, [op], KET_PLUS)
    note(f"[6] a^2 balanced two-outcome at delta/mean 0.05: rel_error {chk.rel_error:.2e}")
    assert chk.rel_error <= 0.05

    # informational: the error at fixed delta/mean grows with the skewness of the outcome weights
    for weight in (0.4, 0.3, 0.2, 0.1):
        gap = 0.05 * m / np.sqrt(weight * (1 - weight))
        op = np.diag([m + (1 - weight) * gap, m - weight * gap])
        psi = np.array([np.sqrt(weight), np.sqrt(1 - weight)])
        note(f"[6]   weight {weight}: rel_error {taylor_validate(lambda u: u**2, [op], psi).rel_error:.4f}")


@pytest.mark.criterion(7, "mixed-state consistency")
def test_mixed_consistency(note):
    rng = np.random.default_rng(7)
    worst_perp = 0.0
    for i in range(100):
        d = 2 + i % 3
        a, rho = random_hermitian(d, rng), random_density(d, rng)
        target = rho_perp(a, rho)
        for d_e in (d, d + 1 + i % (2 * d)):
            l = amplitude_from_density(rho, random_semi_unitary(d, d_e, rng))
            r = av_operator_decompose(a, l).residual
            worst_perp = max(worst_perp, np.linalg.norm(r @ r.conj().T - target))
    assert worst_perp <= 1e-9

    worst_special = 0.0
    for _ in range(100):
        d = 3
        a, b, psi = random_hermitian(d, rng), random_hermitian(d, rng), random_state(d, rng)
        v = complex_gaussian(d, rng)
        v -= psi * np.vdot(psi, v)
        v /= np.linalg.norm(v)
        col, vcol = psi[:, None], v[:, None]
        dv, dc = av_decompose(a, psi), av_operator_decompose(a, col)
        diffs = [abs(dv.expectation - dc.expectation), abs(dv.delta - dc.delta),
                 np.max(np.abs(dv.residual - dc.residual[:, 0]))]
        for sign in (1, -1):
            m, mm = maccone_pati_1(a, b, psi, v, sign=sign), mp1_mixed(a, b, col, vcol, sign=sign)
            diffs += [abs(m.lhs - mm.lhs), abs(m.rhs - mm.rhs)]
        m2, mm2 = maccone_pati_2(a, b, psi), mp2_mixed(a, b, col)
        diffs += [abs(m2.lhs - mm2.lhs), abs(m2.rhs - mm2.rhs)]
        worst_special = max(worst_special, *diffs)
    assert worst_special <= 1e-12

    worst_trip = 0.0
    for d_s in (2, 3):
        for d_e in (2, 3):
            for _ in range(25):
                psi = random_state(d_s * d_e, rng)
                l = amplitude_from_purification(psi, (d_s, d_e))
                worst_trip = max(worst_trip, np.linalg.norm(purify(l) - psi),
                                 np.linalg.norm(amplitude_from_purification(purify(l), (d_s, d_e)) - l))
    note(f"[7] rho_perp {worst_perp:.1e}, specialization {worst_special:.1e}, round trip {worst_trip:.1e}")
    assert worst_trip <= 1e-10


@pytest.mark.criterion(8, "saturation detection for sx, sy on |0>")
def test_saturation_detection():
    reports = [robertson(SIGMA_X, SIGMA_Y, KET_0), schrodinger(SIGMA_X, SIGMA_Y, KET_0)]
    reports += [maccone_pati_1(SIGMA_X, SIGMA_Y, KET_0, sign=s) for s in (1, -1)]
    for r in reports:
        assert abs(r.slack) <= 1e-10 and r.saturated, r
    assert abs(correlation(SIGMA_X, SIGMA_Y, KET_0).corr - 1j) <= 1e-10


@pytest.mark.criterion(9, "conjecture sweep report (d_S = 2, d_E 2..6)")
def test_conjecture_sweep_report(note):
    rng = np.random.default_rng(9)
    a, b, rho = random_hermitian(2, rng), random_hermitian(2, rng), random_density(2, rng)
    assert np.linalg.matrix_rank(rho) == 2
    t0 = time.perf_counter()
    rows = conjecture_sweep(a, b, rho, range(2, 7))
    elapsed = time.perf_counter() - t0
    for r in rows:
        plateau = "n/a" if r.plateau is None else f"{r.plateau:.3e} ({'<=' if abs(r.plateau) <= 1e-3 else '>'} 1e-3)"
        note(f"[9] d_E={r.d_e} best_rhs={r.best_rhs:.12f} lhs={r.lhs:.12f} seed={r.best_seed} plateau={plateau}")
    note(f"[9] sweep time {elapsed:.1f}s")
    values = [r.best_rhs for r in rows]
    assert all(y >= x - 1e-4 for x, y in zip(values, values[1:]))
    assert all(r.best_rhs <= r.lhs + 1e-9 for r in rows)
    assert [r.plateau is not None for r in rows] == [False, False, True, True, True]
    assert elapsed < 600


@pytest.mark.criterion(10, "CLI determinism and exit codes")
def test_cli_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["verify", "--out", str(a)]) == 0
    assert cli.main(["verify", "--out", str(b)]) == 0

    def strip(path):
        return [line.rsplit(",", 1)[0] for line in path.read_text().splitlines()]

    assert strip(a) == strip(b)
    assert len(strip(a)) > 1
    assert cli.main(["verify", "--seeds", "0..2", "--self-test-negate", "--out", str(tmp_path / "n.csv")]) == 1
    assert cli.main(["demo", "nope"]) == 2
    proc = subprocess.run(
        [sys.executable, "-m", "uncertainty_kit.cli", "verify", "--seeds", "0..1", "--out", str(tmp_path / "no" / "x.csv")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2 and "cannot write" in proc.stderr
