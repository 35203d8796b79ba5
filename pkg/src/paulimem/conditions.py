"""Closed-form spectra and the analytic thresholds on the memory coefficient
beyond which a Bell-state input minimizes the output entropy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import channel_tables, output_matrix
from .channel import (ACoefficients, ChannelParams, channel_coefficients,
                      make_channel, regularize)
from .errors import NotRegularized, XOutOfRange
from .spectral import eigenvalues_hermitian4, von_neumann_entropy

GAP_DOMINANT = "gap_dominant"
COUPLING_DOMINANT = "coupling_dominant"


@dataclass(frozen=True)
class ConditionReport:
    condition_name: str
    threshold_mu: float
    satisfied: bool | None = None
    detail: dict | None = None


def solvable_channel(x: float, mu: float) -> ChannelParams:
    """The exactly solvable family q = (x, x, 1/2 - x, 1/2 - x)."""
    if not 0.0 <= x <= 0.5:
        raise XOutOfRange(f"x={x} outside [0, 1/2]")
    return make_channel((x, x, 0.5 - x, 0.5 - x), mu)


def symmetric_channel(x: float, mu: float) -> ChannelParams:
    """q0 = x, q1 = q2 = q3 = (1 - x)/3 (correlated depolarizing noise)."""
    if not 0.0 <= x <= 1.0:
        raise XOutOfRange(f"x={x} outside [0, 1]")
    y = (1.0 - x) / 3.0
    return make_channel((x, y, y, y), mu)


def solvable_regime(ac: ACoefficients) -> str:
    if ac[0] - ac[1] >= abs(ac[4]) + abs(ac[5]):
        return GAP_DOMINANT
    return COUPLING_DOMINANT


def solvable_input(x: float, mu: float, k: float, regime: str | None = None) -> np.ndarray:
    """Bell vector whose output spectrum the solvable-family formulas give.

    Weight k sits in the {Phi+, Psi+} block and 1 - k in {Psi-, Phi-}; each
    block uses the mixing angle that pulls its eigenvalues furthest apart.
    """
    ac = channel_coefficients(solvable_channel(x, mu))
    regime = regime or solvable_regime(ac)
    if regime == GAP_DOMINANT:
        return np.array([np.sqrt(k), 0, np.sqrt(1 - k), 0], dtype=complex)
    ph = 1.0 if ac[4] * ac[5] >= 0 else 1j
    h0, h1 = np.sqrt(k / 2), np.sqrt((1 - k) / 2)
    return np.array([h0, h0 * ph, h1, h1 * ph], dtype=complex)


def solvable_eigenvalues(x: float, mu: float, k: float, regime: str | None = None) -> np.ndarray:
    """Output spectrum for the solvable family at subspace weight k.

    ``regime`` defaults to the one selected by comparing A0 - A1 against
    |A4| + |A5| (ties go to the gap-dominant branch).
    """
    if not 0.5 - 1e-15 <= k <= 1.0 + 1e-15:
        raise ValueError(f"k={k} outside [1/2, 1]")
    ac = channel_coefficients(solvable_channel(x, mu))
    regime = regime or solvable_regime(ac)
    a0, a1, a2 = ac[0], ac[1], ac[2]
    if regime == COUPLING_DOMINANT:
        c = abs(ac[4]) + abs(ac[5])
        a0, a1 = 0.5 * (ac[0] + ac[1] + c), 0.5 * (ac[0] + ac[1] - c)
    elif regime != GAP_DOMINANT:
        raise ValueError(f"unknown regime {regime!r}")
    lam = [k * a0 + (1 - k) * a2, k * a1 + (1 - k) * a2,
           (1 - k) * a0 + k * a2, (1 - k) * a1 + k * a2]
    return np.sort(lam)[::-1]


def solvable_threshold(x: float) -> ConditionReport:
    if not 0.0 <= x <= 0.5:
        raise XOutOfRange(f"x={x} outside [0, 1/2]")
    return ConditionReport("solvable", abs(4 * x - 1))


def reduced_eigenvalues(ac: ACoefficients, theta: float, phi: float | None = None) -> np.ndarray:
    """Spectrum for inputs cos(theta) Phi+ + sin(theta) e^{i phi} Psi+.

    With ``phi=None`` the phase is set to its entropy-minimizing value, which
    for a regularized channel (A4, A5 >= 0) is phi = 0.
    """
    if not ac.is_regularized():
        raise NotRegularized("coefficients do not satisfy A0>=A1>=A2,A3, A4,A5>=0")
    a = ac.values
    c2, s2 = np.cos(2 * theta) ** 2, np.sin(2 * theta) ** 2
    if phi is None:
        coupling2 = (a[4] + a[5]) ** 2
    else:
        coupling2 = a[4] ** 2 + a[5] ** 2 + 2 * a[4] * a[5] * np.cos(2 * phi)
    root = np.sqrt((a[0] - a[1]) ** 2 * c2 + s2 * coupling2)
    d = (a[2] - a[3]) * np.cos(2 * theta)
    lam = [0.5 * (a[0] + a[1] + root), 0.5 * (a[0] + a[1] - root),
           0.5 * (a[2] + a[3] + d), 0.5 * (a[2] + a[3] - d)]
    return np.sort(lam)[::-1]


def sufficient_threshold(q) -> float:
    """Critical mu of the general sufficient condition for a regularized q.

    A zero denominator only happens for a noiseless (single Pauli) channel,
    where every input gives a pure output; the threshold is then 0.
    """
    q0, q1, q2, q3 = q
    num = 2 * q0 * q1 - q2 ** 2 - q3 ** 2
    den = q2 + q3 + num
    if den <= 1e-15:
        return 0.0
    return float(min(max(num / den, 0.0), 1.0))


def sufficient_condition(ch: ChannelParams) -> ConditionReport:
    reg, record = regularize(ch)
    ac = channel_coefficients(reg)
    thr = sufficient_threshold(reg.q)
    gap, coupling = ac[0] - ac[1], ac[4] + ac[5]
    return ConditionReport(
        "sufficient", thr, bool(ch.mu > thr),
        {"a_form": bool(gap > coupling), "gap": gap, "coupling": coupling,
         "regularized_q": reg.q, "permutation": record.permutation},
    )


def symmetric_threshold(x: float) -> ConditionReport:
    if not 0.0 <= x <= 1.0:
        raise XOutOfRange(f"x={x} outside [0, 1]")
    d = abs(4 * x - 1) / 3
    return ConditionReport("symmetric", d / (1 + d))


def pair_phase(ac: ACoefficients, i: int, j: int) -> complex:
    """Relative phase for an equal (i, j) superposition that maximizes the
    magnitude of the off-diagonal output element."""
    _, cu, cp = channel_tables(ac)
    return 1.0 if cu[i, j] * cp[i, j] >= 0 else 1j


def extremal_candidates(ac: ACoefficients) -> list[tuple[np.ndarray, float]]:
    """Entropy of the four Bell inputs and the six equal two-Bell
    superpositions, sorted ascending (stable, Bell states first on ties)."""
    cands = []
    for i in range(4):
        a = np.zeros(4, dtype=complex)
        a[i] = 1.0
        cands.append(a)
    for i in range(4):
        for j in range(i + 1, 4):
            a = np.zeros(4, dtype=complex)
            a[i] = 1 / np.sqrt(2)
            a[j] = pair_phase(ac, i, j) / np.sqrt(2)
            cands.append(a)
    out = [(a, von_neumann_entropy(eigenvalues_hermitian4(output_matrix(ac, a))))
           for a in cands]
    return sorted(out, key=lambda t: t[1])
