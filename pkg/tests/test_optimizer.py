import numpy as np
import pytest

from paulimem.bell import channel_tables
from paulimem.channel import channel_coefficients, make_channel, regularize
from paulimem.conditions import extremal_candidates, solvable_channel, symmetric_channel
from paulimem.errors import NoCrossing
from paulimem.memoryless import memoryless_capacity
from paulimem.optimizer import (EQUAL_TWO_BELL, OTHER, SINGLE_BELL, OptimizerConfig,
                                bell_entropy, classify_extremal, enhancement_report,
                                entanglement_enhanced, entropy_and_gradient, entropy_only,
                                is_separable, minimize_many, minimize_output_entropy,
                                minimize_product_entropy_many, seed_points, start_points,
                                threshold_scan)

FAST = OptimizerConfig(restarts=8, max_iterations=2000)


def random_channels(n, seed=0):
    rng = np.random.default_rng(seed)
    return [make_channel(rng.dirichlet(np.ones(4)), rng.random()) for _ in range(n)]


def test_solvable_example_frozen():
    res = minimize_output_entropy(solvable_channel(0.3, 0.7))
    assert abs(res.min_entropy_bits - 1.1154324149838815) < 1e-9
    assert abs(res.capacity_bits - 0.8845675850161185) < 1e-9
    assert res.extremal_class == SINGLE_BELL
    assert res.converged


def test_identity_channel():
    res = minimize_output_entropy(make_channel((1, 0, 0, 0), 0.5), FAST)
    assert abs(res.capacity_bits - 2.0) < 1e-12


def test_memoryless_example_frozen():
    res = minimize_output_entropy(make_channel((0.7, 0.1, 0.1, 0.1), 0.0), FAST)
    assert abs(res.capacity_bits - 0.5561438102252754) < 1e-9
    assert abs(res.capacity_bits - memoryless_capacity((0.7, 0.1, 0.1, 0.1))) < 1e-9


def test_gradient_against_central_differences():
    rng = np.random.default_rng(3)
    h = 1e-6
    worst = 0.0
    for ch in random_channels(100, seed=3):
        tables = channel_tables(channel_coefficients(ch).as_array()[None, :])
        a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a /= np.linalg.norm(a)
        d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        d -= np.vdot(a, d) * a  # tangent to the sphere, global phase removed
        d /= np.linalg.norm(d)
        _, g = entropy_and_gradient(tables, a[None, :])
        analytic = np.real(np.vdot(g[0], d))

        def f(t):
            v = a + t * d
            return entropy_only(tables, (v / np.linalg.norm(v))[None, :])[0]

        numeric = (f(h) - f(-h)) / (2 * h)
        worst = max(worst, abs(analytic - numeric) / max(abs(numeric), 1e-3))
    assert worst < 1e-4


def test_never_worse_than_candidates():
    chans = random_channels(60, seed=1)
    for ch, res in zip(chans, minimize_many(chans, FAST)):
        best = extremal_candidates(channel_coefficients(ch))[0][1]
        assert res.min_entropy_bits <= best + 1e-12


def test_regularization_preserves_min_entropy():
    chans = random_channels(40, seed=2)
    regs = [regularize(ch)[0] for ch in chans]
    for r1, r2 in zip(minimize_many(chans, FAST), minimize_many(regs, FAST)):
        assert abs(r1.min_entropy_bits - r2.min_entropy_bits) < 1e-8


def test_restart_stability():
    chans = random_channels(30, seed=4)
    runs = [minimize_many(chans, OptimizerConfig(restarts=8, max_iterations=2000, seed=s))
            for s in (0, 1, 2)]
    spread = max(abs(a.min_entropy_bits - b.min_entropy_bits)
                 for r in runs[1:] for a, b in zip(runs[0], r))
    print(f"max min-entropy spread across seeds: {spread:.2e}")
    assert spread < 1e-9


def test_deterministic_given_seed():
    chans = random_channels(5, seed=5)
    a = minimize_many(chans, FAST)
    b = minimize_many(chans, FAST)
    for x, y in zip(a, b):
        assert x.min_entropy_bits == y.min_entropy_bits
        assert np.array_equal(x.argmin, y.argmin)


def test_batching_does_not_change_results():
    chans = random_channels(6, seed=6)
    together = minimize_many(chans, FAST)
    alone = [minimize_output_entropy(ch, FAST) for ch in chans]
    for x, y in zip(together, alone):
        assert x.min_entropy_bits == y.min_entropy_bits


def test_ties_go_to_earliest_start():
    # all four Bell inputs give the same entropy here
    res = minimize_output_entropy(symmetric_channel(0.7, 0.9), FAST)
    assert res.start_index == 0
    assert abs(abs(res.argmin[0]) - 1) < 1e-12


def test_start_points_layout():
    s = start_points(OptimizerConfig(restarts=5))
    assert s.shape == (22 + 5, 4)
    assert np.abs(np.linalg.norm(s, axis=1) - 1).max() < 1e-15
    assert np.array_equal(s[:22], seed_points())


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=-1)
    with pytest.raises(ValueError):
        OptimizerConfig(step_shrink=1.0)
    with pytest.raises(ValueError):
        OptimizerConfig(gradient_tolerance=0)


@pytest.mark.parametrize("psi, cls", [
    ([1, 0, 0, 0], SINGLE_BELL),
    ([0, 0, 0, 1j], SINGLE_BELL),
    (np.array([1, 1j, 0, 0]) / np.sqrt(2), EQUAL_TWO_BELL),
    (np.array([0, 1, 0, -1]) / np.sqrt(2), EQUAL_TWO_BELL),
    ([0.6, 0.8, 0, 0], OTHER),
    (np.ones(4) / 2, OTHER),
])
def test_classify_extremal(psi, cls):
    assert classify_extremal(np.asarray(psi, dtype=complex)) == cls


def test_product_optimum_at_zero_memory():
    chans = [make_channel(q, 0.0) for q in np.random.default_rng(7).dirichlet(np.ones(4), 10)]
    full = minimize_many(chans, FAST)
    prod = minimize_product_entropy_many(chans, FAST)
    for r, (s, a) in zip(full, prod):
        assert abs(r.min_entropy_bits - s) < 1e-9
        assert is_separable(a, tol=1e-6)


def test_product_never_below_full():
    chans = random_channels(20, seed=8)
    for r, (s, _) in zip(minimize_many(chans, FAST), minimize_product_entropy_many(chans, FAST)):
        assert s >= r.min_entropy_bits - 1e-12


def test_is_separable():
    assert not is_separable([1, 0, 0, 0])
    assert is_separable(np.array([1, 1, 0, 0]) / np.sqrt(2))


def test_bell_entropy_frozen():
    # Bell populations are (0.65, 0.14, 0.11, 0.10)
    w = np.array([0.65, 0.14, 0.11, 0.10])
    assert abs(bell_entropy(make_channel((0.4, 0.3, 0.2, 0.1), 0.5)) + (w * np.log2(w)).sum()) < 1e-14


def test_enhancement_tie_is_not_enhanced():
    rep = enhancement_report(solvable_channel(0.3, 0.2), FAST)
    assert not rep.enhanced
    assert rep.degenerate or rep.extremal_class != SINGLE_BELL


def test_enhancement_clear_cases():
    assert entanglement_enhanced(solvable_channel(0.3, 0.6), FAST)
    assert not entanglement_enhanced(solvable_channel(0.3, 0.05), FAST)


def test_threshold_scan_solvable():
    assert abs(threshold_scan((0.4, 0.4, 0.1, 0.1), cfg=FAST) - 0.6) < 1e-3


def test_threshold_scan_no_crossing():
    with pytest.raises(NoCrossing):
        threshold_scan((1, 0, 0, 0), cfg=FAST)
