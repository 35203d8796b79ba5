"""Eigenvalues of small Hermitian matrices, von Neumann entropy and
majorization utilities."""

from __future__ import annotations

import numpy as np

from .errors import NegativeEigenvalue, NotHermitian

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-10
MAJORIZATION_TOL = 1e-12
OFFDIAG_TOL = 1e-14
MAX_SWEEPS = 64


def jacobi_eigh(m, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns ``(w, v)`` with ``m ~= v @ diag(w) @ v.conj().T``, eigenvalues in
    descending order. Each rotation first removes the phase of the pivot
    element and then applies a real Givens rotation.

    Raises
    ------
    NotHermitian
        If ``m`` differs from its adjoint by more than 1e-10 entrywise.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise NotHermitian(f"expected a square matrix, got {a.shape}")
    if np.abs(a - a.conj().T).max() > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))

    for _ in range(max_sweeps):
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                theta = 0.5 * np.arctan2(2 * r, aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                # columns p, q of the rotation: J = diag(1, conj(phase)) @ R
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                cols = a[:, [p, q]] @ j
                a[:, [p, q]] = cols
                rows = j.conj().T @ a[[p, q], :]
                a[[p, q], :] = rows
                a[q, p] = np.conj(a[p, q])
                v[:, [p, q]] = v[:, [p, q]] @ j

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigenvalues_hermitian4(m) -> np.ndarray:
    """Eigenvalues of a 4x4 Hermitian matrix, sorted descending."""
    m = np.asarray(m)
    if m.shape != (4, 4):
        raise NotHermitian(f"expected 4x4, got {m.shape}")
    return jacobi_eigh(m)[0]


def _clamped(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s < -CLAMP_TOL):
        raise NegativeEigenvalue(f"eigenvalue {s.min():.3e} below -{CLAMP_TOL}")
    return np.clip(s, 0.0, None)


def von_neumann_entropy(s) -> float:
    """-sum l log2 l in bits, with 0 log 0 = 0."""
    s = _clamped(s)
    nz = s[s > 0]
    return float(0.0 - np.sum(nz * np.log2(nz)))


def entropy_batch(w: np.ndarray) -> np.ndarray:
    """Row-wise entropy of eigenvalue arrays, clamping tiny negatives."""
    w = np.clip(w, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(w > 0, w * np.log2(np.where(w > 0, w, 1.0)), 0.0)
    return 0.0 - t.sum(axis=-1)


def majorizes(x, y, tol: float = MAJORIZATION_TOL) -> bool:
    """True if x majorizes y: every descending partial sum of x is at least
    the matching partial sum of y."""
    cx = np.cumsum(np.sort(np.asarray(x, float))[::-1])
    cy = np.cumsum(np.sort(np.asarray(y, float))[::-1])
    return bool(np.all(cx >= cy - tol))


def spread_pair(s, i: int, j: int, delta: float) -> np.ndarray:
    """Move ``delta`` of weight from eigenvalue j to eigenvalue i (i larger),
    returning the re-sorted spectrum."""
    s = np.array(s, dtype=float)
    n = len(s)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexError(f"invalid eigenvalue pair ({i}, {j})")
    if s[i] < s[j]:
        raise IndexError(f"expected s[{i}] >= s[{j}]")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if s[j] - delta < -CLAMP_TOL:
        raise NegativeEigenvalue(f"s[{j}] - delta = {s[j] - delta:.3e}")
    s[i] += delta
    s[j] = max(s[j] - delta, 0.0)
    return np.sort(s)[::-1]
