import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paulimem.channel import (a_coefficients, channel_coefficients, joint_distribution,
                              make_channel, regularize)
from paulimem.errors import MuOutOfRange, NegativeProbability, NotNormalized

# worked by hand from p_ij = (1-mu) q_i q_j + mu q_i delta_ij
Q = (0.4, 0.3, 0.2, 0.1)
A_EXPECTED = np.array([0.65, 0.14, 0.11, 0.10, 0.30, 0.10, 0.15, 0.05, 0.02, -0.02])

simplex = st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(
    lambda v: sum(v) > 1e-3).map(lambda v: tuple(np.asarray(v) / sum(v)))
mus = st.floats(0.0, 1.0)


def test_a_coefficients_frozen():
    ac = channel_coefficients(make_channel(Q, 0.5))
    assert np.abs(ac.as_array() - A_EXPECTED).max() < 1e-14


def test_joint_distribution_marginals():
    p = joint_distribution(make_channel(Q, 0.3))
    assert np.abs(p.sum(axis=0) - Q).max() < 1e-15
    assert np.abs(p.sum(axis=1) - Q).max() < 1e-15
    assert abs(p.sum() - 1) < 1e-15


def test_joint_distribution_extremes():
    p0 = joint_distribution(make_channel(Q, 0.0))
    assert np.abs(p0 - np.outer(Q, Q)).max() < 1e-15
    p1 = joint_distribution(make_channel(Q, 1.0))
    assert np.abs(p1 - np.diag(Q)).max() < 1e-15


@pytest.mark.parametrize("q, mu, err", [
    ((0.5, 0.6, -0.1, 0.0), 0.3, NegativeProbability),
    ((0.5, 0.5, 0.5, 0.0), 0.3, NotNormalized),
    ((0.25,) * 4, 1.5, MuOutOfRange),
    ((0.25,) * 4, -0.1, MuOutOfRange),
    ((0.25,) * 3, 0.5, NotNormalized),
])
def test_make_channel_rejects(q, mu, err):
    with pytest.raises(err):
        make_channel(q, mu)


def test_make_channel_absorbs_roundoff():
    ch = make_channel((0.5 + 5e-10, 0.5, -5e-10, 0.0), 0.2)
    assert min(ch.q) >= 0
    assert abs(sum(ch.q) - 1) < 1e-15


@settings(max_examples=200, deadline=None)
@given(simplex, mus)
def test_a_identities(q, mu):
    a = channel_coefficients(make_channel(q, mu)).as_array()
    # populations of a Bell input sum to one, and |primed| <= unprimed-side budgets
    assert abs(a[:4].sum() - 1) < 1e-12
    assert abs(a[5]) <= a[1] + 1e-12
    assert abs(a[7]) <= a[2] + 1e-12
    assert abs(a[9]) <= a[3] + 1e-12


@settings(max_examples=200, deadline=None)
@given(simplex, mus)
def test_regularize_sorts_and_restores(q, mu):
    ch = make_channel(q, mu)
    reg, rec = regularize(ch)
    assert all(reg.q[k] >= reg.q[k + 1] for k in range(3))
    assert reg.mu == ch.mu
    assert np.abs(np.asarray(rec.restore(reg.q)) - ch.q).max() < 1e-15
    assert channel_coefficients(reg).is_regularized()


def test_regularize_identity_when_sorted():
    reg, rec = regularize(make_channel(Q, 0.4))
    assert rec.is_identity
    assert reg.q == make_channel(Q, 0.4).q


def test_regularize_records_moves():
    _, rec = regularize(make_channel((0.1, 0.2, 0.3, 0.4), 0.4))
    assert tuple(rec.permutation) == (3, 2, 1, 0)
    assert not rec.is_identity
    assert len(rec.moves) > 0


def test_a_coefficients_from_raw_matrix():
    p = np.zeros((4, 4))
    p[0, 1] = p[1, 0] = 0.5
    a = a_coefficients(p).as_array()
    assert a[1] == 1.0 and a[5] == 1.0 and a[0] == 0.0
