from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qstopwatch
from conftest import dense_clock_state, exact_inaccuracy, schur_oracle


times = st.floats(min_value=0.0, max_value=3.0)
angles = st.floats(min_value=-10.0, max_value=10.0)
eigenvalues = st.floats(min_value=0.5, max_value=1.0)
rates = st.floats(min_value=0.0, max_value=2.0)


def test_qubit_clock_state_eigenvectors():
    T = 0.3
    p = 0.8
    state = qstopwatch.qubit_clock_state(T, p)
    values, vectors = np.linalg.eigh(state)
    np.testing.assert_allclose(values, [1 - p, p], atol=1e-12)

    phi = np.array([1, np.exp(-1j * T)]) / math.sqrt(2)
    overlap = abs(np.vdot(phi, vectors[:, 1]))
    assert overlap == pytest.approx(1.0)
    assert state[0, 1] == pytest.approx(0.3 * np.exp(1j * T))


def test_qubit_clock_state_validation():
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.qubit_clock_state(0.0, 0.4)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.validate_density_matrix(np.eye(2))


def test_dephasing_closed_form_matches_integration():
    plus = np.full((2, 2), 0.5, dtype=complex)
    exact = qstopwatch.evolve_dephasing(plus, 2.0, 0.2)
    numerical = qstopwatch.integrate_dephasing(plus, 2.0, 0.2)
    np.testing.assert_allclose(exact, numerical, atol=1e-8)


def test_dephasing_keeps_the_clock_family():
    state = qstopwatch.qubit_clock_state(0.4, 1.0)
    evolved = qstopwatch.evolve_dephasing(state, 1.5, 0.3)
    p = qstopwatch.eigenvalue_from_dephasing(0.3, 1.5)
    np.testing.assert_allclose(evolved, qstopwatch.qubit_clock_state(1.9, p), atol=1e-12)
    assert qstopwatch.purity(evolved) < 1


@settings(max_examples=50, deadline=None)
@given(T=angles, p=eigenvalues, t1=times, t2=times, gamma=rates)
def test_dephasing_is_a_semigroup(T, p, t1, t2, gamma):
    state = qstopwatch.qubit_clock_state(T, p)
    stepped = qstopwatch.evolve_dephasing(
        qstopwatch.evolve_dephasing(state, t1, gamma), t2, gamma
    )
    direct = qstopwatch.evolve_dephasing(state, t1 + t2, gamma)
    np.testing.assert_allclose(stepped, direct, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    T=angles,
    p=eigenvalues,
    s=st.floats(min_value=0.05, max_value=0.95),
    t=times,
    gamma=st.floats(min_value=0.01, max_value=2.0),
)
def test_dephasing_never_raises_purity(T, p, s, t, gamma):
    state = qstopwatch.qubit_clock_state(T, p, s)
    evolved = qstopwatch.evolve_dephasing(state, t, gamma)
    assert qstopwatch.purity(evolved) <= qstopwatch.purity(state) + 1e-12


def test_eigenvalue_from_dephasing():
    assert qstopwatch.eigenvalue_from_dephasing(0.2, 1.0) == pytest.approx(
        (1 + math.exp(-0.2)) / 2
    )
    assert qstopwatch.eigenvalue_from_dephasing(0.0, 5.0) == 1.0
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.eigenvalue_from_dephasing(-0.1, 1.0)


def test_clock_params_resolves_p():
    params = qstopwatch.ClockParams(n=8, T=1.0, gamma=0.2)
    assert params.resolve_p() == pytest.approx(0.9093653765389909)
    state = qstopwatch.ensemble_state(params)
    np.testing.assert_allclose(
        state.weights, qstopwatch.schur_weights(8, params.resolve_p())
    )
    assert params.with_time(2.0).T == 2.0


@pytest.mark.parametrize(
    'kwargs',
    [
        {'n': 4, 'T': 0.0},
        {'n': 4, 'T': 0.0, 'p': 0.9, 'gamma': 0.1},
        {'n': 0, 'T': 0.0, 'p': 0.9},
        {'n': 4, 'T': 0.0, 'p': 0.4},
        {'n': 4, 'T': 0.0, 'p': 0.9, 'tau0': 1.0},
        {'n': 4, 'T': 0.0, 'gamma': -1.0},
    ],
)
def test_clock_params_validation(kwargs):
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.ClockParams(**kwargs)


def test_mixture_state():
    components = [
        qstopwatch.ClockParams(n=4, T=0.0, p=0.9),
        qstopwatch.ClockParams(n=4, T=0.0, p=0.7),
    ]
    mixed = qstopwatch.mixture_state(components, [0.5, 0.5])
    expected = 0.5 * dense_clock_state(4, 0.0, 0.9) + 0.5 * dense_clock_state(4, 0.0, 0.7)
    oracle = schur_oracle(expected, 4)
    for sector in mixed.sectors:
        np.testing.assert_allclose(
            sector.weight * sector.block.matrix, oracle[sector.J], atol=1e-10
        )


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=1, max_value=9), T=angles, p=eigenvalues)
def test_ensemble_state_is_periodic_in_time(n, T, p):
    state = qstopwatch.ensemble_state(qstopwatch.ClockParams(n=n, T=T, p=p))
    shifted = qstopwatch.ensemble_state(
        qstopwatch.ClockParams(n=n, T=T + 2 * math.pi, p=p)
    )
    np.testing.assert_allclose(state.weights, shifted.weights, atol=1e-12)
    for a, b in zip(state.sectors, shifted.sectors):
        np.testing.assert_allclose(a.block.matrix, b.block.matrix, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=10),
    T=st.floats(min_value=0.0, max_value=2 * math.pi),
    p1=st.floats(min_value=0.6, max_value=1.0),
    p2=st.floats(min_value=0.6, max_value=1.0),
    w=st.floats(min_value=0.1, max_value=0.9),
    P=st.floats(min_value=0.5, max_value=0.95),
)
def test_mixing_never_sharpens_the_clock(n, T, p1, p2, w, P):
    components = [
        qstopwatch.ClockParams(n=n, T=T, p=p1),
        qstopwatch.ClockParams(n=n, T=T, p=p2),
    ]
    mixed = qstopwatch.mixture_state(components, [w, 1 - w])
    deltas = [
        exact_inaccuracy(qstopwatch.ensemble_state(c), T, P) for c in components
    ]
    # one grid step of slack
    assert exact_inaccuracy(mixed, T, P) >= min(deltas) - 2 * math.pi / 8192


#
# # collective dephasing
#


@pytest.mark.parametrize('n', [2, 5, 9])
@pytest.mark.parametrize('p', [1.0, 0.85])
def test_block_dephasing_matches_product_evolution(n, p):
    gamma = 0.3
    t = 0.8
    state = qstopwatch.build_block_state(n, 0.2, p)
    evolved = qstopwatch.dephase_block_state(state, t, gamma)

    contrast = (2 * p - 1) * math.exp(-gamma * t)
    expected = qstopwatch.build_block_state(n, 0.2 + t, 0.5 * (1 + contrast))
    np.testing.assert_allclose(evolved.weights, expected.weights, atol=1e-10)
    for a, b in zip(evolved.sectors, expected.sectors):
        np.testing.assert_allclose(
            a.weight * a.block.matrix, b.weight * b.block.matrix, atol=1e-10
        )


def test_block_dephasing_matches_dense_oracle_for_mixtures():
    # an exchangeable mixture is not a product, so sector weights really move
    n = 4
    gamma = 0.5
    t = 0.6
    a = qstopwatch.build_block_state(n, 0.0, 1.0)
    b = qstopwatch.build_block_state(n, 2.0, 1.0)
    mixed = qstopwatch.mix_block_states([a, b], [0.5, 0.5])
    evolved = qstopwatch.dephase_block_state(mixed, t, gamma)

    p = qstopwatch.eigenvalue_from_dephasing(gamma, t)
    dense = 0.5 * dense_clock_state(n, t, p) + 0.5 * dense_clock_state(n, 2.0 + t, p)
    oracle = schur_oracle(dense, n)
    for sector in evolved.sectors:
        np.testing.assert_allclose(
            sector.weight * sector.block.matrix, oracle[sector.J], atol=1e-10
        )


def test_block_dephasing_without_noise_is_rotation():
    state = qstopwatch.build_block_state(6, 0.0, 0.9)
    evolved = qstopwatch.dephase_block_state(state, 1.1, 0.0)
    expected = qstopwatch.rotate_phase(state, 1.1)
    for a, b in zip(evolved.sectors, expected.sectors):
        np.testing.assert_allclose(a.block.matrix, b.block.matrix)


def test_block_dephasing_validation():
    state = qstopwatch.build_block_state(4, 0.0, 0.9)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.dephase_block_state(state, -1.0, 0.1)
