from __future__ import annotations

import math

import numpy as np
import pytest

import qstopwatch


#
# # schedules
#


def test_uniform_schedule():
    schedule = qstopwatch.uniform_schedule(2.0, 4)
    assert schedule.k == 4
    assert schedule.total == pytest.approx(2.0)
    assert schedule.lag(0) == (0.0, 0.0)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.uniform_schedule(1.0, 0)


def test_schedule_lags():
    schedule = qstopwatch.EventSchedule(
        durations=(0.5, 0.5, 0.5), lag_dephasing=(0.1, 0.2)
    )
    assert schedule.lag(0) == (0.1, 1.0)
    assert schedule.lag(1) == (0.2, 1.0)
    assert schedule.lag(2) == (0.0, 0.0)


@pytest.mark.parametrize(
    'kwargs',
    [
        {'durations': ()},
        {'durations': (1.0, -1.0)},
        {'durations': (1.0, 1.0), 'lag_dephasing': (0.1, 0.1)},
        {'durations': (1.0, 1.0), 'lag_dephasing': (-0.1,)},
        {'durations': (1.0,), 'lag_model': 'cubic'},
    ],
)
def test_schedule_validation(kwargs):
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.EventSchedule(**kwargs)


def test_uniform_memory_damping():
    state = qstopwatch.build_block_state(4, 0.7, 0.9)
    damped = qstopwatch.damp_memory(state, 0.5, 2.0)
    factor = math.exp(-1.0)
    for before, after in zip(state.sectors, damped.sectors):
        matrix = before.block.matrix
        expected = factor * matrix + (1 - factor) * np.diag(np.diag(matrix))
        np.testing.assert_allclose(after.block.matrix, expected, atol=1e-12)
    assert qstopwatch.damp_memory(state, 0.0, 1.0) is state


def test_quadratic_damping_keeps_neighbors_longest():
    state = qstopwatch.build_block_state(2, 0.3, 1.0)
    damped = qstopwatch.damp_memory(state, 0.4, 1.0, 'quadratic')
    ratio = np.abs(damped.sectors[0].block.matrix) / np.abs(state.sectors[0].block.matrix)
    assert ratio[0, 1] == pytest.approx(math.exp(-0.2))
    assert ratio[0, 2] == pytest.approx(math.exp(-0.8))


#
# # coherent stopwatch
#


def test_lossless_stopwatch_matches_ideal_clock():
    schedule = qstopwatch.uniform_schedule(1.0, 4)
    result = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=4', seed=1, trials=5000
    )
    assert result.compression_error_total == pytest.approx(0.0, abs=1e-10)
    assert result.ideal_distance == pytest.approx(0.0, abs=1e-10)
    assert len(result.step_errors) == 4
    assert result.memory_qubits_peak > 0
    assert result.final_state is not None
    assert result.estimates is not None and len(result.estimates) == 5000


def test_coherent_beats_incoherent_without_noise():
    schedule = qstopwatch.uniform_schedule(1.0, 4)
    coherent = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=4', seed=2, trials=5000
    )
    incoherent = qstopwatch.run_incoherent(8, schedule, 0.0, seed=3, trials=5000)
    assert coherent.inaccuracy.delta / incoherent.inaccuracy.delta < 1


def test_memory_readout_agrees_with_decoded_readout():
    schedule = qstopwatch.uniform_schedule(1.0, 2)
    decoded = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=4', seed=4, trials=10000
    )
    memory = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=4', seed=5, trials=10000, readout='memory'
    )
    assert memory.inaccuracy.delta == pytest.approx(decoded.inaccuracy.delta, rel=0.1)
    assert memory.inaccuracy.estimator == 'stopwatch-memory'


def test_memory_and_decoded_readouts_share_one_density():
    schedule = qstopwatch.uniform_schedule(1.0, 4)
    decoded = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=3', seed=9, trials=4000
    )
    memory = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=3', seed=9, trials=4000, readout='memory'
    )
    assert memory.inaccuracy.delta == pytest.approx(decoded.inaccuracy.delta, rel=1e-3)


def test_bound_readout_on_seven_levels():
    # the m = +-4 shell, 2 / 256 of the weight, leaks at the first event only
    schedule = qstopwatch.uniform_schedule(1.0, 4)
    bound = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=3', seed=8, trials=20000, readout='bound'
    )
    assert bound.memory_qubits_peak == 3
    assert bound.step_errors[0] == pytest.approx(0.0915, abs=1e-3)
    assert max(bound.step_errors[1:]) == pytest.approx(0.0, abs=1e-9)
    assert bound.ideal_distance == pytest.approx(bound.compression_error_total, abs=1e-6)
    assert bound.inaccuracy.P == 0.9
    assert bound.inaccuracy.estimator == 'stopwatch-bound'

    decoded = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=3', seed=8, trials=20000
    )
    assert bound.inaccuracy.delta > decoded.inaccuracy.delta


def test_bound_readout_saturates_on_lossy_window():
    # five kept levels lose 18 / 256 of the weight, P + epsilon exceeds 1
    result = qstopwatch.run_stopwatch(
        8, qstopwatch.uniform_schedule(1.0, 4), 0.0, 'asymptotic', seed=1,
        trials=500, readout='bound',
    )
    assert result.ideal_distance > 0.1
    assert result.inaccuracy.saturated
    assert result.inaccuracy.delta == pytest.approx(2 * math.pi)


def test_bounded_analytic_ratio_on_seven_levels():
    result = qstopwatch.run_stopwatch(
        8, qstopwatch.uniform_schedule(1.0, 4), 0.0, 'qubit-budget=3', seed=0,
        trials=500, readout='bound',
    )
    bounded = qstopwatch.advantage_ratio(
        8, 4, 1.0, 0.0, 0.9, epsilon=result.ideal_distance
    )
    assert bounded.epsilon == result.ideal_distance
    assert 1 / bounded.ratio == pytest.approx(0.787, abs=0.03)
    assert 1 / bounded.ratio == pytest.approx(0.800, abs=0.005)


@pytest.mark.slow
def test_bounded_pipeline_reproduces_stated_ratio():
    schedule = qstopwatch.uniform_schedule(1.0, 4)
    incoherent = qstopwatch.run_incoherent(8, schedule, 0.0, seed=11, trials=100000)
    bound = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=3', seed=12, trials=100000, readout='bound'
    )
    simulated = bound.inaccuracy.delta / incoherent.inaccuracy.delta
    assert simulated == pytest.approx(0.76, abs=0.02)
    bounded = qstopwatch.advantage_ratio(
        8, 4, 1.0, 0.0, 0.9, epsilon=bound.ideal_distance
    )
    assert 1 / bounded.ratio == pytest.approx(0.787, abs=0.03)

    direct = qstopwatch.run_stopwatch(
        8, schedule, 0.0, 'qubit-budget=3', seed=12, trials=100000
    )
    assert direct.inaccuracy.delta / incoherent.inaccuracy.delta == pytest.approx(
        0.551, abs=0.02
    )


def test_lossy_window_accumulates_error():
    schedule = qstopwatch.uniform_schedule(1.0, 3)
    result = qstopwatch.run_stopwatch(
        16, schedule, 0.1, 'qubit-budget=2', seed=6, trials=1000
    )
    assert all(error > 0 for error in result.step_errors)
    assert result.compression_error_total == pytest.approx(sum(result.step_errors))
    assert result.ideal_distance <= result.compression_error_total + 1e-9


def test_stopwatch_row():
    result = qstopwatch.run_stopwatch(
        4, qstopwatch.uniform_schedule(1.0, 1), 0.0, 'qubit-budget=2', seed=7,
        trials=500,
    )
    row = result.as_row()
    assert {'compression_error_total', 'memory_qubits_peak', 'ideal_distance'} <= set(row)


def test_stopwatch_configuration_errors():
    schedule = qstopwatch.uniform_schedule(1.0, 2)
    with pytest.raises(qstopwatch.ConfigError):
        qstopwatch.run_stopwatch(
            8, schedule, readout='memory', final_compression=False, trials=500
        )
    with pytest.raises(qstopwatch.ConfigError):
        qstopwatch.run_stopwatch(8, schedule, 0.0, 'qubit-budget=0', trials=500)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.run_stopwatch(1, schedule, trials=500)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.run_stopwatch(8, schedule, -0.1, trials=500)


def test_memory_readout_rejects_gapped_windows():
    schedule = qstopwatch.uniform_schedule(1.0, 2)
    gapped = qstopwatch.explicit_policy([-2, 0, 2])
    _, encoded = qstopwatch.compress(qstopwatch.build_block_state(8, 0.5, 1.0), gapped)
    assert not encoded.get_record(4.0).is_contiguous()
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.run_stopwatch(8, schedule, 0.0, gapped, readout='memory', trials=500)

    # the decoded clock carries its levels back, so the gap is harmless there
    result = qstopwatch.run_stopwatch(8, schedule, 0.0, gapped, seed=3, trials=500)
    assert result.memory_qubits_peak == 2
    contiguous = qstopwatch.explicit_policy([-1, 0, 1])
    result = qstopwatch.run_stopwatch(
        8, schedule, 0.0, contiguous, seed=3, trials=500, readout='memory'
    )
    assert result.inaccuracy.estimator == 'stopwatch-memory'


#
# # incoherent competitor
#


def test_local_incoherent_has_no_block_state():
    result = qstopwatch.run_incoherent(
        50, qstopwatch.uniform_schedule(1.0, 2), 0.1, seed=8, trials=500,
        measurement='local',
    )
    assert result.final_state is None
    assert result.memory_qubits_peak == 0
    assert result.inaccuracy.estimator == 'incoherent-local'


def test_incoherent_is_reproducible():
    schedule = qstopwatch.uniform_schedule(1.0, 3)
    a = qstopwatch.run_incoherent(6, schedule, 0.2, seed=9, trials=500)
    b = qstopwatch.run_incoherent(6, schedule, 0.2, seed=9, trials=500)
    assert a.inaccuracy == b.inaccuracy
    np.testing.assert_array_equal(a.estimates, b.estimates)


#
# # advantage
#


def test_analytic_advantage_values():
    assert qstopwatch.advantage_ratio(1000, 50, 0.2, 0.2).ratio == pytest.approx(
        4.640, abs=1e-3
    )
    assert qstopwatch.advantage_ratio(1000, 3, 3.0, 0.2).ratio == pytest.approx(
        1.0641, abs=1e-3
    )


def test_advantage_ratio_does_not_depend_on_n_or_P():
    a = qstopwatch.advantage_ratio(100, 5, 1.0, 0.3, 0.8)
    b = qstopwatch.advantage_ratio(10000, 5, 1.0, 0.3, 0.95)
    assert a.ratio == pytest.approx(b.ratio)
    assert a.rescaled_coherent == pytest.approx(
        math.sqrt(100) * a.delta_coherent
    )


def test_advantage_without_noise_is_sqrt_k():
    assert qstopwatch.advantage_ratio(100, 4, 1.0, 0.0).ratio == pytest.approx(2.0)


def test_incoherent_inaccuracy_grows_as_sqrt_k():
    single = qstopwatch.advantage_ratio(100, 1, 2.0, 0.0)
    for k in (4, 9, 16):
        result = qstopwatch.advantage_ratio(100, k, 2.0, 0.0)
        assert result.delta_incoherent == pytest.approx(
            math.sqrt(k) * single.delta_incoherent
        )

    def simulated(k):
        schedule = qstopwatch.uniform_schedule(2.0, k)
        result = qstopwatch.run_incoherent(16, schedule, 0.0, seed=k, trials=20000)
        return result.inaccuracy.delta

    assert simulated(4) / simulated(1) == pytest.approx(2.0, rel=0.1)


def test_coherent_inaccuracy_does_not_depend_on_k():
    deltas = [qstopwatch.advantage_ratio(100, k, 2.0, 0.2).delta_coherent for k in (1, 3, 10, 50)]
    np.testing.assert_allclose(deltas, deltas[0], rtol=1e-12)

    # an ideal memory: only the total time reaches the clock
    stored = [
        qstopwatch.run_stopwatch(
            8, qstopwatch.uniform_schedule(2.0, k), 0.2, seed=4, trials=5000,
            compress=False,
        ).inaccuracy.delta
        for k in (1, 4)
    ]
    assert stored[1] == pytest.approx(stored[0], rel=1e-3)


def test_advantage_surface():
    rows = qstopwatch.advantage_surface(0.2, [1, 2, 3], [0.5, 1.0])
    assert len(rows) == 6
    assert [row['k'] for row in rows] == [1, 1, 2, 2, 3, 3]
    for row in rows:
        if row['k'] == 1:
            assert row['ratio'] == pytest.approx(1.0)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.advantage_surface(0.0, [1, 2])


def test_advantage_input_validation():
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.advantage_ratio(100, 0, 1.0, 0.2)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.advantage_ratio(100, 2, 1.0, 0.2, mode='guess')  # type: ignore


def test_crossover():
    assert qstopwatch.crossover_condition(1, 1.0, 0.2)
    assert qstopwatch.crossover_condition(10, 1.0, 0.2)
    report = qstopwatch.crossover_sweep([1, 2, 4, 8], [0.5, 1.0, 2.0], [0.1, 0.5])
    assert len(report.rows) == 4 * 3 * 2
    assert report.monotone
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.crossover_condition(2, 1.0, 0.0)


@pytest.mark.slow
def test_simulated_advantage_under_dephasing():
    result = qstopwatch.advantage_ratio(
        50, 5, 2.0, 0.2, mode='simulated', trials=2000, seed=10
    )
    assert result.ratio > 1.2


@pytest.mark.slow
def test_simulated_advantage_matches_the_analytic_ratio():
    simulated = qstopwatch.advantage_ratio(
        400, 4, 2.0, 0.2, mode='simulated', trials=4000, seed=14
    )
    analytic = qstopwatch.advantage_ratio(400, 4, 2.0, 0.2)
    assert simulated.ratio == pytest.approx(analytic.ratio, rel=0.15)


@pytest.mark.slow
def test_overall_bound_holds_for_the_stopwatch():
    result = qstopwatch.run_stopwatch(
        64, qstopwatch.uniform_schedule(1.0, 4), 0.2, 'asymptotic', seed=11,
        trials=1000,
    )
    bound = qstopwatch.overall_error_bound(64, 4, 1.0, 0.2)
    assert result.compression_error_total <= bound


#
# # network
#


def test_network_communication_cost():
    compressed, baseline = qstopwatch.network_communication_cost(5, 256)
    assert (compressed, baseline) == (35, 1280)
    limit = 5 * (0.5 * math.log2(256) + math.log2(math.log2(256)) + 2)
    assert compressed <= limit


def test_network_estimates_the_frequency_sum():
    result = qstopwatch.network_sequential([0.2, 0.2, 0.2], 1.0, 16, seed=12, trials=5000)
    assert result.true_total == pytest.approx(0.6)
    assert result.estimate == pytest.approx(0.6, abs=0.1)
    assert not result.ambiguous
    assert result.qubit_cost < result.baseline_cost == 48


@pytest.mark.slow
def test_network_of_five_nodes_matches_the_analytic_inaccuracy():
    result = qstopwatch.network_sequential([0.2] * 5, 1.0, 256, seed=15, trials=10000)
    assert result.qubit_cost == 35
    assert result.true_total == pytest.approx(1.0)
    expected = qstopwatch.inaccuracy_analytic(256, 0.9, 1.0)
    assert result.inaccuracy.delta == pytest.approx(expected, rel=0.15)


def test_network_flags_wrapped_totals(caplog):
    result = qstopwatch.network_sequential([3.0, 3.0, 3.0], 1.0, 8, seed=13, trials=500)
    assert result.ambiguous
    assert 'modulo' in caplog.text


def test_network_validation():
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.network_sequential([], 1.0, 8)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.network_sequential([0.1], 0.0, 8)
    with pytest.raises(qstopwatch.InvalidArgument):
        qstopwatch.network_communication_cost(0, 8)
