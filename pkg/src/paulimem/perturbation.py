"""First-order eigenvalue shifts of the output around the two candidate
extremal inputs (a Bell state and the equal Phi+/Psi+ superposition), the
local-optimality conditions they lead to, and a finite-difference harness
that checks the analytic shifts against exact diagonalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import as_bell_vector, output_matrix
from .channel import ACoefficients, ChannelParams, channel_coefficients, regularize
from .spectral import eigenvalues_hermitian4, majorizes, von_neumann_entropy

BELL_BASE = "bell"
PRODUCT_BASE = "product"
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class PerturbationReport:
    shifts: np.ndarray | None = None
    majorization_preserved: bool | None = None
    conditions: dict | None = None
    base_spectrum: np.ndarray | None = None


def base_vector(base: str) -> np.ndarray:
    if base == BELL_BASE:
        return np.array([1, 0, 0, 0], dtype=complex)
    if base == PRODUCT_BASE:
        return np.array([1, 1, 0, 0], dtype=complex) / np.sqrt(2)
    raise ValueError(f"unknown base point {base!r}")


def bell_base_spectrum(ac: ACoefficients) -> np.ndarray:
    return ac.diagonal


def product_base_spectrum(ac: ACoefficients) -> np.ndarray:
    a = ac.values
    return np.array([0.5 * (a[0] + a[1] + a[4] + a[5]), 0.5 * (a[0] + a[1] - a[4] - a[5]),
                     0.5 * (a[2] + a[3]), 0.5 * (a[2] + a[3])])


def bell_first_order_shifts(ac: ACoefficients, psi) -> PerturbationReport:
    """Diagonal shifts B'_ii of the output around a Phi+ input."""
    a = as_bell_vector(psi, tol=1e-10)
    w = np.abs(a) ** 2
    diag = ac.diagonal
    shifts = np.array([sum(diag[k] * w[k ^ i] for k in range(4)) - diag[i]
                       for i in range(4)])
    chain = {
        "b00_nonpositive": bool(shifts[0] <= 1e-15),
        "b00_b11_nonpositive": bool(shifts[0] + shifts[1] <= 1e-15),
    }
    return PerturbationReport(shifts, majorizes(diag, diag + shifts), chain, diag)


def product_first_order_shifts(ac: ACoefficients, psi) -> PerturbationReport:
    """Shifts around (Phi+ + Psi+)/sqrt2, including the split of the doubly
    degenerate pair from the 2x2 block it spans."""
    a = as_bell_vector(psi, tol=1e-10)
    A = ac.values
    w = np.abs(a) ** 2
    out_weight = 1.0 - w[0] - w[1]
    spread = A[0] + A[1] - A[2] - A[3]
    coupling = A[4] + A[5]
    overlap = 2.0 * np.real(a[0] * np.conj(a[1]))
    l0 = 0.5 * (-out_weight * spread + (overlap - 1.0) * coupling)
    l1 = 0.5 * (-out_weight * spread - (overlap - 1.0) * coupling)
    disc = discriminant(ac, a)
    root = np.sqrt(max(disc, 0.0))
    l2 = 0.5 * (out_weight * spread + root)
    l3 = 0.5 * (out_weight * spread - root)
    shifts = np.array([l0, l1, l2, l3])
    base = product_base_spectrum(ac)
    return PerturbationReport(shifts, majorizes(base, base + shifts),
                              {"lambda0_nonpositive": bool(l0 <= 1e-15), "discriminant": disc},
                              base)


def discriminant(ac: ACoefficients, a) -> float:
    A = ac.values
    w = np.abs(a) ** 2
    first = (w[0] - w[1]) * (A[2] - A[3]) + (w[2] - w[3]) * (A[0] - A[1])
    cross = 2.0 * np.real(np.conj(a[2]) ** 2 * a[3] ** 2)
    return float(first ** 2 + 4.0 * (w[2] * w[3] * (A[4] ** 2 + A[5] ** 2) + cross * A[4] * A[5]))


def perturbation_conditions(ch: ChannelParams) -> PerturbationReport:
    """Evaluate the conditions under which the product input is a local
    entropy minimum by majorization at first order."""
    reg, _ = regularize(ch)
    q = reg.q
    ac = channel_coefficients(reg)
    A = ac.values
    t = q[0] + q[1]
    we1_threshold = max(0.0, 1.0 - 1.0 / (2.0 * t))
    cond = {
        "we1_threshold": we1_threshold,
        "we1": bool(reg.mu > we1_threshold),
        "we1_a_form": bool(A[0] + A[1] - A[4] - A[5] > A[2] + A[3]),
        "a2_equals_a3": bool(abs(A[2] - A[3]) <= DEGENERACY_TOL),
    }
    if cond["a2_equals_a3"]:
        cond["we2"] = bool(4 * (A[0] - A[2]) * (A[1] - A[2]) > (A[4] + A[5]) ** 2)
        cond["wee"] = bool(A[4] + A[5] > A[0] - A[1])
        cond["verifiable"] = True
        cond["product_locally_extremal"] = cond["we2"] if cond["we1"] else cond["wee"]
    else:
        cond["verifiable"] = False
        cond["product_locally_extremal"] = None
        cond["note"] = "A2 != A3: majorization cannot certify the product input"
    return PerturbationReport(conditions=cond)


def tangent_directions(base_psi: np.ndarray, trials: int, seed: int = 0) -> np.ndarray:
    """Unit directions tangent to the amplitude sphere at ``base_psi``."""
    rng = np.random.default_rng(seed)
    d = rng.standard_normal((trials, 4)) + 1j * rng.standard_normal((trials, 4))
    d -= np.real(d @ base_psi.conj())[:, None] * base_psi
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def perturbed(base_psi: np.ndarray, direction: np.ndarray, epsilon: float) -> np.ndarray:
    v = base_psi + epsilon * direction
    return v / np.linalg.norm(v)


def _analytic(ac, base, psi):
    if base == BELL_BASE:
        rep = bell_first_order_shifts(ac, psi)
    else:
        rep = product_first_order_shifts(ac, psi)
    return np.sort(rep.base_spectrum + rep.shifts)[::-1]


def finite_difference_check(ch: ChannelParams, base: str, epsilon: float,
                            trials: int, seed: int = 0) -> float:
    """max |analytic - exact| / epsilon^2 over random perturbation directions.

    The channel is regularized first. Analytic and exact spectra are both
    compared in descending order.
    """
    if not 1e-8 <= epsilon <= 1e-2:
        raise ValueError(f"epsilon={epsilon} outside [1e-8, 1e-2]")
    reg, _ = regularize(ch)
    ac = channel_coefficients(reg)
    b0 = base_vector(base)
    worst = 0.0
    for d in tangent_directions(b0, trials, seed):
        psi = perturbed(b0, d, epsilon)
        exact = eigenvalues_hermitian4(output_matrix(ac, psi))
        worst = max(worst, float(np.abs(_analytic(ac, base, psi) - exact).max()))
    return worst / epsilon ** 2


def min_entropy_change(ch: ChannelParams, base: str, epsilon: float,
                       trials: int, seed: int = 0) -> float:
    """Smallest S(perturbed) - S(base) over sampled directions (exact)."""
    reg, _ = regularize(ch)
    ac = channel_coefficients(reg)
    b0 = base_vector(base)
    s0 = von_neumann_entropy(eigenvalues_hermitian4(output_matrix(ac, b0)))
    return min(von_neumann_entropy(eigenvalues_hermitian4(output_matrix(ac, perturbed(b0, d, epsilon)))) - s0
               for d in tangent_directions(b0, trials, seed))
