"""Single-use Pauli channel quantities, used for the mu = 0 limit where the
two uses are independent and the capacity is twice the single-use one."""

import numpy as np


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def pauli_transfer_eigenvalues(q) -> np.ndarray:
    """Bloch-vector contraction factors along x, y, z."""
    q0, q1, q2, q3 = q
    return np.array([q0 + q1 - q2 - q3, q0 - q1 + q2 - q3, q0 - q1 - q2 + q3])


def single_use_min_entropy(q) -> float:
    lam = np.abs(pauli_transfer_eigenvalues(q)).max()
    return binary_entropy((1 + lam) / 2)


def memoryless_capacity(q) -> float:
    """Two-use capacity at mu = 0 (additive for unital qubit channels)."""
    return 2.0 * (1.0 - single_use_min_entropy(q))
