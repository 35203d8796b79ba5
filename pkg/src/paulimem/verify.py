"""Self-verification suites run by ``paulimem verify``.

Every check returns ``(passed, detail)``. Coefficients are looked up through
the module objects at call time so a patched formula is caught.
"""

from __future__ import annotations

import time

import numpy as np

from . import bell, channel, conditions, optimizer, perturbation, spectral
from .memoryless import memoryless_capacity


def random_channel(rng, regularized=False):
    q = rng.dirichlet(np.ones(4))
    if regularized:
        q = np.sort(q)[::-1]
    return channel.make_channel(q, rng.random())


def random_bell_vector(rng):
    a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return a / np.linalg.norm(a)


def random_density(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def check_oracle_equivalence(n, rng):
    worst = 0.0
    for _ in range(n):
        ch = random_channel(rng)
        a = random_bell_vector(rng)
        ac = channel.a_coefficients(channel.joint_distribution(ch))
        b = bell.output_matrix(ac, a)
        psi = bell.bell_to_computational(a)
        ref = bell.density_to_bell(
            bell.apply_channel_computational(ch, np.outer(psi, psi.conj())))
        worst = max(worst, float(np.abs(b - ref).max()))
    return worst <= 1e-12, f"max entry error {worst:.2e} over {n} pairs"


def check_covariance(n, rng):
    worst = 0.0
    for _ in range(n):
        ch = random_channel(rng)
        rho = random_density(rng)
        out = bell.apply_channel_computational(ch, rho)
        for i in range(4):
            for j in range(4):
                k = bell.pauli_pair(i, j)
                lhs = bell.apply_channel_computational(ch, k @ rho @ k.conj().T)
                worst = max(worst, float(np.abs(lhs - k @ out @ k.conj().T).max()))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def t_transform_pair(rng):
    x = np.sort(rng.dirichlet(np.ones(4)))[::-1]
    i, j = rng.choice(4, size=2, replace=False)
    t = rng.random()
    y = x.copy()
    y[i], y[j] = t * x[i] + (1 - t) * x[j], t * x[j] + (1 - t) * x[i]
    return x, np.sort(y)[::-1]


def check_schur_concavity(n, rng):
    bad = 0
    for _ in range(n):
        x, y = t_transform_pair(rng)
        if not spectral.majorizes(x, y):
            bad += 1
        elif spectral.von_neumann_entropy(x) > spectral.von_neumann_entropy(y) + 1e-12:
            bad += 1
    return bad == 0, f"{bad} violations in {n} T-transform pairs"


def check_spreading_lemma(n, rng):
    bad = tested = 0
    for _ in range(n):
        s = np.sort(rng.dirichlet(np.ones(4)))[::-1]
        i, j = sorted(rng.choice(4, size=2, replace=False))
        delta = rng.random() * s[j]
        # moves below double-precision resolution cannot show a strict decrease
        if s[i] - s[j] < 1e-9 or delta < 1e-9:
            continue
        tested += 1
        if not spectral.von_neumann_entropy(spectral.spread_pair(s, i, j, delta)) \
                < spectral.von_neumann_entropy(s):
            bad += 1
    return bad == 0, f"{bad} violations in {tested} of {n} samples"


def check_closed_forms(step):
    worst = 0.0
    xs = np.linspace(0, 0.5, int(round(0.5 / step)) + 1)
    mus = np.linspace(0, 1, int(round(1 / step)) + 1)
    ks = np.linspace(0.5, 1, 6)
    for x in xs:
        for mu in mus:
            ac = channel.channel_coefficients(conditions.solvable_channel(x, mu))
            for k in ks:
                psi = conditions.solvable_input(x, mu, k)
                ref = spectral.eigenvalues_hermitian4(bell.output_matrix(ac, psi))
                got = conditions.solvable_eigenvalues(x, mu, k)
                worst = max(worst, float(np.abs(got - ref).max()))
    rng = np.random.default_rng(7)
    for _ in range(20):
        ch = random_channel(rng, regularized=True)
        ac = channel.channel_coefficients(ch)
        for th in np.linspace(0, np.pi / 2, 9):
            psi = np.array([np.cos(th), np.sin(th), 0, 0], dtype=complex)
            ref = spectral.eigenvalues_hermitian4(bell.output_matrix(ac, psi))
            worst = max(worst, float(np.abs(conditions.reduced_eigenvalues(ac, th) - ref).max()))
    return worst <= 1e-10, f"max spectrum error {worst:.2e}"


def check_threshold_consistency():
    worst = 0.0
    for x in np.linspace(0.25, 0.5, 11):
        ch = conditions.solvable_channel(x, 0.5)
        worst = max(worst, abs(conditions.sufficient_condition(ch).threshold_mu
                               - conditions.solvable_threshold(x).threshold_mu))
    for x in np.linspace(0.25, 0.95, 15):
        ch = conditions.symmetric_channel(x, 0.5)
        worst = max(worst, abs(conditions.sufficient_condition(ch).threshold_mu
                               - conditions.symmetric_threshold(x).threshold_mu))
    return worst <= 1e-12, f"max threshold mismatch {worst:.2e}"


def check_perturbation(n_channels, trials, rng):
    worst = 0.0
    chain_ok = True
    for _ in range(n_channels):
        ch = random_channel(rng, regularized=True)
        ac = channel.channel_coefficients(ch)
        for base in (perturbation.BELL_BASE, perturbation.PRODUCT_BASE):
            worst = max(worst, perturbation.finite_difference_check(ch, base, 1e-4, trials,
                                                                    seed=int(rng.integers(2**31))))
        b0 = perturbation.base_vector(perturbation.BELL_BASE)
        for d in perturbation.tangent_directions(b0, trials, seed=1):
            rep = perturbation.bell_first_order_shifts(ac, perturbation.perturbed(b0, d, 1e-3))
            chain_ok &= all(rep.conditions.values())
            chain_ok &= abs(rep.shifts.sum()) <= 1e-12
    return worst <= 10.0 and chain_ok, f"max residual/eps^2 {worst:.3g}, sign chain {'ok' if chain_ok else 'broken'}"


def check_limits(cfg, rng):
    worst = 0.0
    chans = [channel.make_channel((1, 0, 0, 0), 0.5)]
    chans += [channel.make_channel(rng.dirichlet(np.ones(4)), 1.0) for _ in range(3)]
    for res in optimizer.minimize_many(chans, cfg):
        worst = max(worst, abs(res.capacity_bits - 2.0))
    qs = [rng.dirichlet(np.ones(4)) for _ in range(5)]
    res = optimizer.minimize_many([channel.make_channel(q, 0.0) for q in qs], cfg)
    worst0 = max(abs(r.capacity_bits - memoryless_capacity(q)) for r, q in zip(res, qs))
    return worst <= 1e-9 and worst0 <= 1e-7, f"noiseless/mu=1 error {worst:.1e}, mu=0 error {worst0:.1e}"


def check_solvable_threshold(cfg):
    mu = optimizer.threshold_scan((0.4, 0.4, 0.1, 0.1), 0.0, 1.0, cfg)
    return abs(mu - 0.6) <= 1e-3, f"crossing at mu={mu:.5f} (expected 0.6)"


def run(quick: bool = False, out=print) -> tuple[bool, str | None]:
    """Run every suite; returns (all_passed, first_failing_name)."""
    rng = np.random.default_rng(2024)
    cfg = optimizer.OptimizerConfig(restarts=4 if quick else 16, max_iterations=500 if quick else 2000)
    n = 200 if quick else 1000
    suites = [
        ("oracle_equivalence", lambda: check_oracle_equivalence(n, rng)),
        ("channel_covariance", lambda: check_covariance(5 if quick else 20, rng)),
        ("schur_concavity", lambda: check_schur_concavity(2000 if quick else 10000, rng)),
        ("spreading_lemma", lambda: check_spreading_lemma(2000 if quick else 10000, rng)),
        ("closed_form_spectra", lambda: check_closed_forms(0.1 if quick else 0.05)),
        ("threshold_consistency", check_threshold_consistency),
        ("perturbation_finite_difference", lambda: check_perturbation(5 if quick else 30, 5, rng)),
        ("capacity_limits", lambda: check_limits(cfg, rng)),
        ("solvable_threshold_scan", lambda: check_solvable_threshold(cfg)),
    ]
    first_fail = None
    for name, fn in suites:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash counts as a failure of that suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out(f"{'PASS' if ok else 'FAIL'} {name}: {detail} ({time.perf_counter() - t0:.1f}s)")
        if not ok and first_fail is None:
            first_fail = name
    return first_fail is None, first_fail
