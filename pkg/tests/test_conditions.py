import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bell_output
from paulimem.channel import channel_coefficients, make_channel, regularize
from paulimem.conditions import (COUPLING_DOMINANT, GAP_DOMINANT, extremal_candidates,
                                 reduced_eigenvalues, solvable_channel, solvable_eigenvalues,
                                 solvable_input, solvable_threshold, sufficient_condition,
                                 sufficient_threshold, symmetric_channel, symmetric_threshold)
from paulimem.errors import NotRegularized, XOutOfRange
from paulimem.spectral import majorizes

simplex = st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(
    lambda v: sum(v) > 1e-3).map(lambda v: tuple(np.asarray(v) / sum(v)))


def exact_spectrum(q, mu, a):
    return np.sort(np.linalg.eigvalsh(bell_output(q, mu, a)))[::-1]


@pytest.mark.parametrize("x, expected", [(0.05, 0.8), (0.15, 0.4), (0.25, 0.0),
                                         (0.3, 0.2), (0.4, 0.6), (0.45, 0.8)])
def test_solvable_threshold_values(x, expected):
    assert abs(solvable_threshold(x).threshold_mu - expected) < 1e-14


@pytest.mark.parametrize("x, expected", [(0.4, 1 / 6), (0.7, 0.375), (1.0, 0.5), (0.25, 0.0)])
def test_symmetric_threshold_values(x, expected):
    assert abs(symmetric_threshold(x).threshold_mu - expected) < 1e-14


def test_family_ranges():
    with pytest.raises(XOutOfRange):
        solvable_channel(0.6, 0.5)
    with pytest.raises(XOutOfRange):
        symmetric_channel(-0.1, 0.5)
    with pytest.raises(XOutOfRange):
        solvable_threshold(0.51)


@pytest.mark.parametrize("x", np.linspace(0, 0.5, 11))
@pytest.mark.parametrize("mu", np.linspace(0, 1, 11))
def test_solvable_eigenvalues_match_diagonalization(x, mu):
    q = solvable_channel(x, mu).q
    for k in np.linspace(0.5, 1, 6):
        for regime in (GAP_DOMINANT, COUPLING_DOMINANT):
            a = solvable_input(x, mu, k, regime)
            got = solvable_eigenvalues(x, mu, k, regime)
            assert np.abs(got - exact_spectrum(q, mu, a)).max() < 1e-10


def test_solvable_eigenvalues_rejects_k():
    with pytest.raises(ValueError):
        solvable_eigenvalues(0.3, 0.5, 0.2)


def test_reduced_eigenvalues_match_diagonalization(rng):
    for _ in range(40):
        ch, _ = regularize(make_channel(rng.dirichlet(np.ones(4)), rng.random()))
        ac = channel_coefficients(ch)
        for th in np.linspace(0, np.pi / 2, 13):
            for phi in (0.0, 0.7, np.pi / 2):
                a = np.array([np.cos(th), np.sin(th) * np.exp(1j * phi), 0, 0])
                got = reduced_eigenvalues(ac, th, phi)
                assert np.abs(got - exact_spectrum(ch.q, ch.mu, a)).max() < 1e-10
            assert np.abs(reduced_eigenvalues(ac, th) - reduced_eigenvalues(ac, th, 0.0)).max() < 1e-15


def test_reduced_eigenvalues_needs_regularized():
    ac = channel_coefficients(make_channel((0.1, 0.2, 0.3, 0.4), 0.5))
    with pytest.raises(NotRegularized):
        reduced_eigenvalues(ac, 0.3)


@settings(max_examples=300, deadline=None)
@given(simplex, st.floats(0, 1))
def test_sufficient_threshold_equals_coefficient_form(q, mu):
    rep = sufficient_condition(make_channel(q, mu))
    # skip the knife edge where both sides are equal up to roundoff
    if abs(rep.detail["gap"] - rep.detail["coupling"]) > 1e-9:
        assert rep.satisfied == rep.detail["a_form"]


def test_sufficient_threshold_zero_denominator():
    assert sufficient_threshold((1.0, 0.0, 0.0, 0.0)) == 0.0


@pytest.mark.parametrize("x", np.linspace(0.25, 0.5, 6))
def test_sufficient_agrees_with_solvable(x):
    rep = sufficient_condition(solvable_channel(x, 0.5))
    assert abs(rep.threshold_mu - solvable_threshold(x).threshold_mu) < 1e-12


@pytest.mark.parametrize("x", np.linspace(0.25, 0.95, 8))
def test_sufficient_agrees_with_symmetric(x):
    rep = sufficient_condition(symmetric_channel(x, 0.5))
    assert abs(rep.threshold_mu - symmetric_threshold(x).threshold_mu) < 1e-12


def test_sufficient_condition_regularizes_first():
    a = sufficient_condition(make_channel((0.1, 0.2, 0.3, 0.4), 0.5))
    b = sufficient_condition(make_channel((0.4, 0.3, 0.2, 0.1), 0.5))
    assert abs(a.threshold_mu - b.threshold_mu) < 1e-15
    assert a.detail["regularized_q"] == pytest.approx(b.detail["regularized_q"], abs=1e-15)


def test_extremal_candidates_sorted(rng):
    for _ in range(20):
        ac = channel_coefficients(make_channel(rng.dirichlet(np.ones(4)), rng.random()))
        cands = extremal_candidates(ac)
        assert len(cands) == 10
        ents = [e for _, e in cands]
        assert ents == sorted(ents)
        for a, e in cands:
            assert abs(np.linalg.norm(a) - 1) < 1e-15


@pytest.mark.parametrize("x", [0.05, 0.15, 0.3, 0.4, 0.45])
def test_bell_spectrum_majorizes_mixed_inputs_above_threshold(x):
    mu = min(1.0, solvable_threshold(x).threshold_mu + 0.05)
    bell = solvable_eigenvalues(x, mu, 1.0)
    for k in np.linspace(0.5, 1, 21):
        assert majorizes(bell, solvable_eigenvalues(x, mu, k))
