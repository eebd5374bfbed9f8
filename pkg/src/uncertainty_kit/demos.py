"""Canonical worked examples, emitted as ``(demo, case, quantity, value)`` rows."""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .av import av_decompose, correlation
from .operators import KET_0, KET_PLUS, SIGMA_X, SIGMA_Y, fock_state, momentum, position, spin_half
from .relations import RelationReport, maccone_pati_1, robertson, schrodinger

OSCILLATOR_DIMS = (10, 25, 50)
OSCILLATOR_LEVELS = (0, 1, 2)


class DemoRow(NamedTuple):
    demo: str
    case: str
    quantity: str
    value: float | bool | str


DEMO_COLUMNS = DemoRow._fields


def _relation_rows(demo: str, case: str, report: RelationReport, name: str | None = None) -> list[DemoRow]:
    name = name or report.relation_id
    return [
        DemoRow(demo, case, f"{name}.lhs", report.lhs),
        DemoRow(demo, case, f"{name}.rhs", report.rhs),
        DemoRow(demo, case, f"{name}.slack", report.slack),
        DemoRow(demo, case, f"{name}.saturated", report.saturated),
    ]


def pauli_demo(hbar: float = 1.0) -> list[DemoRow]:
    """Spin-1/2 along ``+x``: an eigenstate of ``S_x`` where commutator bounds say nothing.

    ``S_x`` has no spread, so Robertson and Schroedinger give ``0 >= 0``,
    while the first sum-of-variances relation with its optimal auxiliary
    state still returns ``dS_y^2``.  The row ``bound_hbar_abs_sz`` is the
    alternative spin bound ``hbar |<S_z>|``; it is zero here as well.
    """
    sx, sy, sz = (spin_half(ax, hbar) for ax in "xyz")
    psi, case = KET_PLUS, "x+"
    dx, dy = av_decompose(sx, psi), av_decompose(sy, psi)
    rows = [
        DemoRow("pauli", case, "delta_Sx", dx.delta),
        DemoRow("pauli", case, "delta_Sy", dy.delta),
        DemoRow("pauli", case, "Sx_eigenstate", dx.eigenstate),
        DemoRow("pauli", case, "bound_hbar_abs_sz", float(hbar * abs(np.vdot(psi, sz @ psi).real))),
    ]
    rows += _relation_rows("pauli", case, robertson(sx, sy, psi))
    rows += _relation_rows("pauli", case, schrodinger(sx, sy, psi))
    for sign in (1, -1):
        rows += _relation_rows("pauli", case, maccone_pati_1(sx, sy, psi, sign=sign))
    return rows


def oscillator_demo(dims=OSCILLATOR_DIMS, levels=OSCILLATOR_LEVELS, hbar: float = 1.0) -> list[DemoRow]:
    """``dx dp`` against ``|<[x, p]>| / 2`` for low Fock states of truncated ladders."""
    rows = []
    for n in dims:
        x, p = position(n, hbar), momentum(n, hbar)
        for k in levels:
            case = f"dim={n},n={k}"
            rep = robertson(x, p, fock_state(n, k))
            rows += [
                DemoRow("oscillator", case, "delta_x", rep.witness["delta_a"]),
                DemoRow("oscillator", case, "delta_p", rep.witness["delta_b"]),
                DemoRow("oscillator", case, "expected_product", (k + 0.5) * hbar),
            ]
            rows += _relation_rows("oscillator", case, rep)
    return rows


def mp_saturation_demo() -> list[DemoRow]:
    """``sigma_x``, ``sigma_y`` on ``|0>``: every two-observable relation is tight."""
    psi, case = KET_0, "sx,sy,|0>"
    corr = correlation(SIGMA_X, SIGMA_Y, psi).corr
    rows = [
        DemoRow("mp-saturation", case, "corr.re", corr.real),
        DemoRow("mp-saturation", case, "corr.im", corr.imag),
    ]
    rows += _relation_rows("mp-saturation", case, robertson(SIGMA_X, SIGMA_Y, psi))
    rows += _relation_rows("mp-saturation", case, schrodinger(SIGMA_X, SIGMA_Y, psi))
    for sign in (1, -1):
        rows += _relation_rows("mp-saturation", case, maccone_pati_1(SIGMA_X, SIGMA_Y, psi, sign=sign))
    return rows


DEMOS: dict[str, Callable[[], list[DemoRow]]] = {
    "pauli": pauli_demo,
    "oscillator": oscillator_demo,
    "mp-saturation": mp_saturation_demo,
}


def run_demo(name: str) -> list[DemoRow]:
    try:
        return DEMOS[name]()
    except KeyError:
        raise ValueError(f"unknown demo {name!r}; expected one of {sorted(DEMOS)}") from None
