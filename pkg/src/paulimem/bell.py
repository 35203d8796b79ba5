"""Channel output in the Bell basis, plus the computational-basis Kraus sum
used as an independent oracle.

Bell basis order is (Phi+, Psi+, Psi-, Phi-) with
Phi+- = (|00> +- |11>)/sqrt2 and Psi+- = (|01> +- |10>)/sqrt2.
"""

from __future__ import annotations

import numpy as np

from .channel import KLEIN, ACoefficients, ChannelParams, joint_distribution
from .errors import InvalidDensityMatrix, NotNormalized

NORM_TOL = 1e-12

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_S = 1 / np.sqrt(2)
# rows are the Bell states written in the computational basis |00>,|01>,|10>,|11>
BELL = np.array([
    [_S, 0, 0, _S],
    [0, _S, _S, 0],
    [0, _S, -_S, 0],
    [_S, 0, 0, -_S],
], dtype=complex)

# Bell pair (i, j) couples through the Klein class i ^ j
_UNPRIMED = {1: 4, 2: 6, 3: 8}
_PRIMED = {1: 5, 2: 7, 3: 9}
# sigma_0 (x) sigma_2 |Phi+> = i |Psi->: the i^2 shows up as a sign on the
# primed coefficient of the {02, 13} pairs
_PRIMED_SIGN = {1: 1.0, 2: -1.0, 3: 1.0}


def as_bell_vector(a, tol: float = NORM_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (4,):
        raise NotNormalized(f"Bell vector must have four amplitudes, got {a.shape}")
    n2 = float(np.vdot(a, a).real)
    if abs(n2 - 1.0) > tol:
        raise NotNormalized(f"NotNormalized: sum |a_i|^2 = {n2:.15g}")
    return a


def subspace_weight(a) -> float:
    """Weight k = |a0|^2 + |a1|^2 of the {Phi+, Psi+} subspace."""
    a = np.asarray(a)
    return float(abs(a[0]) ** 2 + abs(a[1]) ** 2)


def mixing_angle(a) -> float:
    a = np.asarray(a)
    return float(np.arctan2(abs(a[1]), abs(a[0])))


def relative_phase(a) -> float:
    a = np.asarray(a)
    return float(np.angle(a[1] * np.conj(a[0])))


def bell_to_computational(a) -> np.ndarray:
    return BELL.T @ np.asarray(a, dtype=complex)


def computational_to_bell(psi) -> np.ndarray:
    return BELL.conj() @ np.asarray(psi, dtype=complex)


def density_to_bell(rho) -> np.ndarray:
    return BELL.conj() @ rho @ BELL.T


def density_to_computational(b) -> np.ndarray:
    return BELL.T @ b @ BELL.conj()


def channel_tables(ac: ACoefficients | np.ndarray):
    """Return (M, Cu, Cp) describing the channel as a linear map on Bell-basis
    matrices: diag part ``M @ diag(X)``, off-diagonal ``Cu*X + Cp*X.T``.

    Accepts one coefficient set of shape (10,) or a stack (..., 10).
    """
    a = ac.as_array() if isinstance(ac, ACoefficients) else np.asarray(ac, float)
    lead = a.shape[:-1]
    xor = np.bitwise_xor.outer(np.arange(4), np.arange(4))
    m = a[..., xor]
    cu = np.zeros(lead + (4, 4))
    cp = np.zeros(lead + (4, 4))
    for i in range(4):
        for j in range(4):
            if i != j:
                c = i ^ j
                cu[..., i, j] = a[..., _UNPRIMED[c]]
                cp[..., i, j] = _PRIMED_SIGN[c] * a[..., _PRIMED[c]]
    return m, cu, cp


def apply_bell_map(tables, x: np.ndarray) -> np.ndarray:
    """Apply the channel to Bell-basis matrices ``x`` of shape (..., 4, 4)."""
    m, cu, cp = tables
    d = np.einsum("...ij,...j->...i", m, np.diagonal(x, axis1=-2, axis2=-1))
    out = cu * x + cp * np.swapaxes(x, -1, -2)
    idx = np.arange(4)
    out[..., idx, idx] = d
    return out


def output_matrix(ac: ACoefficients, psi) -> np.ndarray:
    """B = E(|psi><psi|) in the Bell basis for a normalized Bell vector."""
    a = as_bell_vector(psi)
    return apply_bell_map(channel_tables(ac), np.outer(a, a.conj()))


def output_matrices(tables, a: np.ndarray) -> np.ndarray:
    """Batched B for amplitude rows ``a`` of shape (n, 4); no validation."""
    rho = a[:, :, None] * a.conj()[:, None, :]
    return apply_bell_map(tables, rho)


def population_permutation(i: int) -> tuple[int, ...]:
    """Index action of U_i on the Bell population vector."""
    return KLEIN[i]


def _check_density(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected 4x4, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise InvalidDensityMatrix("not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise InvalidDensityMatrix(f"trace {np.trace(rho).real:.12g} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise InvalidDensityMatrix("not positive semidefinite")
    return rho


def pauli_pair(i: int, j: int) -> np.ndarray:
    return np.kron(PAULI[i], PAULI[j])


def apply_channel_computational(ch: ChannelParams, rho) -> np.ndarray:
    """Direct 16-term Kraus sum in the computational basis."""
    rho = _check_density(rho)
    p = joint_distribution(ch)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            if p[i, j] != 0.0:
                k = pauli_pair(i, j)
                out += p[i, j] * (k @ rho @ k.conj().T)
    return out


def pauli_in_bell(i: int, j: int) -> np.ndarray:
    """sigma_i (x) sigma_j as a unitary acting on Bell amplitudes."""
    return BELL.conj() @ pauli_pair(i, j) @ BELL.T


def concurrence(a) -> float:
    """Concurrence of the pure two-qubit state with Bell amplitudes ``a``."""
    psi = bell_to_computational(a)
    yy = pauli_pair(2, 2)
    return float(abs(psi @ yy @ psi))
