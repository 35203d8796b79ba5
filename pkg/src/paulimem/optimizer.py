"""Minimal output entropy over pure two-qubit inputs.

Entropy is minimized by projected gradient descent on the unit sphere of
Bell amplitudes with Armijo backtracking, run from a fixed set of seeded
starts (Bell states and equal two-Bell superpositions) plus seeded random
restarts. Starts and channels are processed as one batch so that all the
4x4 eigendecompositions go through a single LAPACK call per iteration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .bell import BELL, apply_bell_map, channel_tables, concurrence, output_matrices
from .channel import ChannelParams, channel_coefficients, make_channel
from .errors import NoCrossing
from .spectral import entropy_batch

log = logging.getLogger(__name__)

SINGLE_BELL = "single_bell"
EQUAL_TWO_BELL = "equal_two_bell"
OTHER = "other"

TIE_TOL = 1e-12
ENHANCEMENT_MARGIN = 1e-9
_LOG_FLOOR = 1e-300
_MAX_STEP = 1e3
_ROW_CHUNK = 20000


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 10_000
    gradient_tolerance: float = 1e-10
    step_shrink: float = 0.5
    seed: int = 0
    armijo: float = 1e-4
    stall_window: int = 50
    stall_tolerance: float = 1e-12

    def __post_init__(self):
        if self.restarts < 0 or self.max_iterations < 1:
            raise ValueError("restarts must be >= 0 and max_iterations >= 1")
        if self.gradient_tolerance <= 0 or not 0 < self.step_shrink < 1:
            raise ValueError("gradient_tolerance > 0 and 0 < step_shrink < 1 required")


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    min_entropy_bits: float
    argmin: np.ndarray = field(repr=False)
    extremal_class: str
    converged: bool
    gradient_norm: float = 0.0
    start_index: int = 0


# -- objective ---------------------------------------------------------------

def entropy_and_gradient(tables, a: np.ndarray):
    """Output entropy (bits) and its gradient for amplitude rows ``a``.

    The gradient ``g`` is complex with the convention dS = Re(g^H da); it is
    valid for tangent directions on the unit sphere.
    """
    b = output_matrices(tables, a)
    w, v = np.linalg.eigh(b)
    s = entropy_batch(w)
    logw = np.log2(np.maximum(w, _LOG_FLOOR))
    log_b = (v * logw[:, None, :]) @ np.swapaxes(v.conj(), -1, -2)
    gmat = apply_bell_map(tables, log_b)
    g = -2.0 * np.einsum("nij,nj->ni", gmat, a)
    return s, g


def entropy_only(tables, a: np.ndarray) -> np.ndarray:
    return entropy_batch(np.linalg.eigvalsh(output_matrices(tables, a)))


def _take(tables, idx):
    return tuple(t[idx] for t in tables)


class _FullState:
    blocks = ((0, 4),)

    def __init__(self, tables):
        self.tables = tables

    def value(self, x, idx):
        return entropy_only(_take(self.tables, idx), x)

    def value_grad(self, x, idx):
        return entropy_and_gradient(_take(self.tables, idx), x)


_TO_BELL = BELL.conj()


def product_to_bell(x: np.ndarray) -> np.ndarray:
    """Rows [u0, u1, v0, v1] -> Bell amplitudes of u (x) v."""
    psi = (x[:, :2, None] * x[:, None, 2:]).reshape(-1, 4)
    return psi @ _TO_BELL.T


class _ProductState:
    blocks = ((0, 2), (2, 4))

    def __init__(self, tables):
        self.tables = tables

    def value(self, x, idx):
        return entropy_only(_take(self.tables, idx), product_to_bell(x))

    def value_grad(self, x, idx):
        s, ga = entropy_and_gradient(_take(self.tables, idx), product_to_bell(x))
        gpsi = (ga @ _TO_BELL.conj()).reshape(-1, 2, 2)
        u, v = x[:, :2], x[:, 2:]
        gu = np.einsum("njk,nk->nj", gpsi, v.conj())
        gv = np.einsum("njk,nj->nk", gpsi, u.conj())
        return s, np.concatenate([gu, gv], axis=1)


def _project(x, g, blocks):
    out = np.empty_like(g)
    for lo, hi in blocks:
        xb, gb = x[:, lo:hi], g[:, lo:hi]
        radial = np.real(np.sum(xb.conj() * gb, axis=1, keepdims=True))
        out[:, lo:hi] = gb - radial * xb
    return out


def _retract(x, blocks):
    out = np.empty_like(x)
    for lo, hi in blocks:
        xb = x[:, lo:hi]
        out[:, lo:hi] = xb / np.linalg.norm(xb, axis=1, keepdims=True)
    return out


def _descend(obj, x0: np.ndarray, cfg: OptimizerConfig):
    """Batched Riemannian gradient descent. Returns (x, f, grad_norm, converged)."""
    blocks = obj.blocks
    n = x0.shape[0]
    x = _retract(x0, blocks)
    rows = np.arange(n)
    f, g = obj.value_grad(x, rows)
    rg = _project(x, g, blocks)
    gn = np.linalg.norm(rg, axis=1)
    step = np.ones(n)
    stall = np.zeros(n, dtype=int)
    stalled = np.zeros(n, dtype=bool)

    for _ in range(cfg.max_iterations):
        act = np.flatnonzero((gn >= cfg.gradient_tolerance) & ~stalled)
        if act.size == 0:
            break
        t = step[act].copy()
        pending = np.ones(act.size, dtype=bool)
        x_new = x[act].copy()
        f_new = f[act].copy()
        while pending.any():
            sel = np.flatnonzero(pending)
            rows_sel = act[sel]
            trial = _retract(x[rows_sel] - t[sel, None] * rg[rows_sel], blocks)
            f_trial = obj.value(trial, rows_sel)
            ok = f_trial <= f[rows_sel] - cfg.armijo * t[sel] * gn[rows_sel] ** 2
            x_new[sel[ok]] = trial[ok]
            f_new[sel[ok]] = f_trial[ok]
            pending[sel[ok]] = False
            t[sel[~ok]] *= cfg.step_shrink
            dead = sel[~ok][t[sel[~ok]] < 1e-18]
            pending[dead] = False
        moved = f_new < f[act]
        improvement = f[act] - f_new
        stall[act] = np.where(improvement < cfg.stall_tolerance, stall[act] + 1, 0)
        stalled[act] = stall[act] >= cfg.stall_window
        upd = act[moved]
        if upd.size:
            x[upd] = x_new[moved]
            f_u, g_u = obj.value_grad(x[upd], upd)
            f[upd] = f_u
            rg[upd] = _project(x[upd], g_u, blocks)
            gn[upd] = np.linalg.norm(rg[upd], axis=1)
        # grow the step after a success, keep the shrunken one otherwise
        step[act] = np.where(moved, np.minimum(t / cfg.step_shrink, _MAX_STEP), np.maximum(t, 1e-12))
        stuck = act[~moved]
        stalled[stuck] |= step[stuck] <= 1e-12

    converged = (gn < cfg.gradient_tolerance) | stalled
    return x, f, gn, converged


# -- starts ------------------------------------------------------------------

SEED_PHASES = (1.0, 1j, -1.0)


def seed_points() -> np.ndarray:
    """Bell states, then equal two-Bell superpositions with phases 0, pi/2, pi."""
    pts = []
    for i in range(4):
        a = np.zeros(4, dtype=complex)
        a[i] = 1.0
        pts.append(a)
    for i in range(4):
        for j in range(i + 1, 4):
            for ph in SEED_PHASES:
                a = np.zeros(4, dtype=complex)
                a[i] = 1 / np.sqrt(2)
                a[j] = ph / np.sqrt(2)
                pts.append(a)
    return np.array(pts)


N_SEEDS = 22


def random_points(rng: np.random.Generator, n: int, dim: int = 4) -> np.ndarray:
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def start_points(cfg: OptimizerConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    return np.vstack([seed_points(), random_points(rng, cfg.restarts)])


def _product_seeds() -> np.ndarray:
    s = 1 / np.sqrt(2)
    axis = [(1, 0), (0, 1), (s, s), (s, -s), (s, 1j * s), (s, -1j * s)]
    return np.array([list(u) + list(v) for u in axis for v in axis], dtype=complex)


def product_start_points(cfg: OptimizerConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    rnd = np.hstack([random_points(rng, cfg.restarts, 2), random_points(rng, cfg.restarts, 2)])
    return np.vstack([_product_seeds(), rnd])


# -- public API --------------------------------------------------------------

def fix_global_phase(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    k = int(np.argmax(np.abs(a) > 1e-12))
    if abs(a[k]) == 0:
        return a
    return a * (abs(a[k]) / a[k])


def classify_extremal(psi, tol: float = 1e-6) -> str:
    w = np.abs(np.asarray(psi)) ** 2
    if w.max() > 1 - tol:
        return SINGLE_BELL
    order = np.argsort(-w)
    big, small = w[order[:2]], w[order[2:]]
    if np.all(np.abs(big - 0.5) < tol) and np.all(small < tol):
        return EQUAL_TWO_BELL
    return OTHER


def _pick(f_rows: np.ndarray) -> int:
    """Lowest entropy; near-ties resolved in favour of the earliest start."""
    return int(np.flatnonzero(f_rows <= f_rows.min() + TIE_TOL)[0])


def _run_batched(channels, starts, make_obj, cfg):
    """Descend from ``starts`` for every channel; returns per-channel arrays."""
    k = starts.shape[0]
    per_chunk = max(1, _ROW_CHUNK // k)
    out = []
    for c0 in range(0, len(channels), per_chunk):
        chunk = channels[c0:c0 + per_chunk]
        coeffs = np.array([channel_coefficients(ch).as_array() for ch in chunk])
        tables = channel_tables(np.repeat(coeffs, k, axis=0))
        x0 = np.tile(starts, (len(chunk), 1))
        x, f, gn, conv = _descend(make_obj(tables), x0, cfg)
        for c in range(len(chunk)):
            sl = slice(c * k, (c + 1) * k)
            out.append((x[sl], f[sl], gn[sl], conv[sl]))
    return out


def minimize_many(channels, cfg: OptimizerConfig | None = None) -> list[CapacityResult]:
    """Minimize output entropy for several channels in one batched run."""
    cfg = cfg or OptimizerConfig()
    channels = list(channels)
    results = []
    for x, f, gn, conv in _run_batched(channels, start_points(cfg), _FullState, cfg):
        i = _pick(f)
        s = float(max(f[i], 0.0))
        if not conv[i]:
            log.warning("entropy minimization did not converge (|grad|=%.3e)", gn[i])
        a = fix_global_phase(x[i])
        results.append(CapacityResult(
            capacity_bits=2.0 - s, min_entropy_bits=s, argmin=a,
            extremal_class=classify_extremal(a), converged=bool(conv[i]),
            gradient_norm=float(gn[i]), start_index=i))
    return results


def minimize_output_entropy(ch: ChannelParams, cfg: OptimizerConfig | None = None) -> CapacityResult:
    return minimize_many([ch], cfg)[0]


def minimize_product_entropy_many(channels, cfg: OptimizerConfig | None = None):
    """Minimal output entropy over product inputs u (x) v.

    Returns a list of ``(entropy, bell_amplitudes)``.
    """
    cfg = cfg or OptimizerConfig()
    out = []
    for x, f, _, _ in _run_batched(list(channels), product_start_points(cfg), _ProductState, cfg):
        i = _pick(f)
        out.append((float(max(f[i], 0.0)), fix_global_phase(product_to_bell(x[i:i + 1])[0])))
    return out


def bell_entropy(ch: ChannelParams) -> float:
    """Output entropy for a Bell-state input (identical for all four)."""
    return float(entropy_batch(channel_coefficients(ch).diagonal))


@dataclass(frozen=True)
class EnhancementReport:
    enhanced: bool
    degenerate: bool
    bell_entropy: float
    separable_entropy: float
    min_entropy: float
    extremal_class: str


def enhancement_reports(channels, cfg: OptimizerConfig | None = None) -> list[EnhancementReport]:
    channels = list(channels)
    full = minimize_many(channels, cfg)
    prod = minimize_product_entropy_many(channels, cfg)
    out = []
    for ch, res, (s_sep, _) in zip(channels, full, prod):
        s_bell = bell_entropy(ch)
        bell_is_min = res.extremal_class == SINGLE_BELL
        strict = s_bell < s_sep - ENHANCEMENT_MARGIN
        out.append(EnhancementReport(
            enhanced=bool(bell_is_min and strict),
            degenerate=bool(bell_is_min and not strict),
            bell_entropy=s_bell, separable_entropy=s_sep,
            min_entropy=res.min_entropy_bits, extremal_class=res.extremal_class))
    return out


def enhancement_report(ch: ChannelParams, cfg: OptimizerConfig | None = None) -> EnhancementReport:
    return enhancement_reports([ch], cfg)[0]


def entanglement_enhanced(ch: ChannelParams, cfg: OptimizerConfig | None = None) -> bool:
    """True iff a Bell input is the global minimizer and beats every product
    input by more than 1e-9 bits. Exact ties report False."""
    return enhancement_report(ch, cfg).enhanced


def threshold_scan(q, mu_lo: float = 0.0, mu_hi: float = 1.0,
                   cfg: OptimizerConfig | None = None, tol: float = 1e-4) -> float:
    """Bisect on mu for the point where entanglement enhancement switches."""
    e_lo = entanglement_enhanced(make_channel(q, mu_lo), cfg)
    e_hi = entanglement_enhanced(make_channel(q, mu_hi), cfg)
    if e_lo == e_hi:
        raise NoCrossing(f"enhanced={e_lo} at both mu={mu_lo} and mu={mu_hi}")
    lo, hi = mu_lo, mu_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entanglement_enhanced(make_channel(q, mid), cfg) == e_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def is_separable(psi, tol: float = 1e-8) -> bool:
    return concurrence(psi) < tol
