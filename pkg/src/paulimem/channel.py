"""Correlated two-use Pauli channel: parameters, joint error distribution,
Bell-basis coefficients and regularization.

The channel applies sigma_i (x) sigma_j with probability

    p_ij = (1 - mu) q_i q_j + mu q_i delta_ij

so mu = 0 is two independent uses and mu = 1 is perfectly correlated noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MuOutOfRange, NegativeProbability, NotNormalized

INPUT_TOL = 1e-9
INTERNAL_TOL = 1e-12

# Klein four-group acting on Pauli / Bell labels: XOR with a fixed label.
KLEIN = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))


@dataclass(frozen=True)
class ChannelParams:
    q: tuple[float, float, float, float]
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        object.__setattr__(self, "mu", float(self.mu))

    def as_array(self) -> np.ndarray:
        return np.array(self.q)


def make_channel(q, mu) -> ChannelParams:
    """Validate raw parameters and return a ChannelParams.

    Tiny negative entries (above -1e-9) and sums within 1e-9 of one are
    accepted and cleaned up so that internal invariants hold at 1e-12.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise NotNormalized(f"expected four probabilities, got shape {q.shape}")
    if not np.all(np.isfinite(q)) or not np.isfinite(mu):
        raise NotNormalized("non-finite channel parameter")
    if np.any(q < -INPUT_TOL):
        raise NegativeProbability(f"negative entry in q={q.tolist()}")
    if abs(q.sum() - 1.0) > INPUT_TOL:
        raise NotNormalized(f"sum(q)={q.sum():.12g}")
    if not (0.0 <= mu <= 1.0):
        raise MuOutOfRange(f"mu={mu} outside [0, 1]")
    q = np.clip(q, 0.0, None)
    q = q / q.sum()
    return ChannelParams(tuple(q), mu)


def joint_distribution(ch: ChannelParams) -> np.ndarray:
    q = ch.as_array()
    return (1.0 - ch.mu) * np.outer(q, q) + ch.mu * np.diag(q)


@dataclass(frozen=True)
class ACoefficients:
    """The ten scalars A0..A9 that fix the Bell-basis output for any pure input.

    A0..A3 weight the Bell populations, (A4, A5), (A6, A7), (A8, A9) are the
    unprimed/primed couplings for the Bell pairs {01,23}, {02,13}, {03,12}.
    """

    values: tuple = field(default=(0.0,) * 10)

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return 10

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    @property
    def diagonal(self) -> np.ndarray:
        return np.array(self.values[:4])

    def is_regularized(self, tol: float = 1e-12) -> bool:
        a = self.values
        return (a[0] >= a[1] - tol and a[1] >= max(a[2], a[3]) - tol
                and a[4] >= -tol and a[5] >= -tol)


def a_coefficients(p: np.ndarray) -> ACoefficients:
    p = np.asarray(p, dtype=float)
    a = np.empty(10)
    a[0] = np.trace(p)
    a[1] = 2 * (p[0, 1] + p[2, 3])
    a[5] = 2 * (p[0, 1] - p[2, 3])
    a[2] = 2 * (p[0, 2] + p[1, 3])
    a[7] = 2 * (p[0, 2] - p[1, 3])
    a[3] = 2 * (p[0, 3] + p[1, 2])
    a[9] = 2 * (p[0, 3] - p[1, 2])
    a[4] = p[0, 0] + p[1, 1] - p[2, 2] - p[3, 3]
    a[6] = p[0, 0] - p[1, 1] + p[2, 2] - p[3, 3]
    a[8] = p[0, 0] - p[1, 1] - p[2, 2] + p[3, 3]
    return ACoefficients(tuple(a))


def channel_coefficients(ch: ChannelParams) -> ACoefficients:
    return a_coefficients(joint_distribution(ch))


_PAULI_NAMES = ("I", "X", "Y", "Z")


@dataclass(frozen=True)
class RegularizationRecord:
    """How a channel was mapped onto its regularized form.

    ``permutation[k]`` is the original index whose probability ends up at
    regularized position k, i.e. ``q_reg[k] == q[permutation[k]]``.
    """

    permutation: tuple[int, int, int, int]
    moves: tuple[str, ...]

    @property
    def is_identity(self) -> bool:
        return self.permutation == (0, 1, 2, 3)

    def restore(self, q_reg) -> tuple:
        out = [0.0] * 4
        for k, src in enumerate(self.permutation):
            out[src] = q_reg[k]
        return tuple(out)


def _describe(perm) -> tuple[str, ...]:
    moves = []
    m = perm[0]
    if m != 0:
        s = _PAULI_NAMES[m]
        rest = [i for i in (1, 2, 3) if i != m]
        moves.append(f"conjugate input by {s}(x){s}: q0<->q{m}, q{rest[0]}<->q{rest[1]}")
    # what is left fixes label 0 and permutes the three Pauli axes
    axes = [perm[k] ^ m for k in range(4)]
    if axes != [0, 1, 2, 3]:
        moves.append("relabel Pauli axes: "
                     + ", ".join(f"{_PAULI_NAMES[axes[k]]}->{_PAULI_NAMES[k]}"
                                 for k in (1, 2, 3) if axes[k] != k))
    return tuple(moves)


def regularize(ch: ChannelParams) -> tuple[ChannelParams, RegularizationRecord]:
    """Map the channel to an equivalent one with q0 >= q1 >= q2 >= q3.

    Conjugating the input by sigma_k (x) sigma_k swaps q-labels by the
    Klein group; a common local Clifford on both qubits permutes q1, q2, q3.
    Together they realise every permutation while leaving the minimal output
    entropy unchanged. Ties keep their original order.
    """
    q = ch.as_array()
    perm = tuple(int(i) for i in np.argsort(-q, kind="stable"))
    reg = ChannelParams(tuple(q[list(perm)]), ch.mu)
    return reg, RegularizationRecord(perm, _describe(perm))
