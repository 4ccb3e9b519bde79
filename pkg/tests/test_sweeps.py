from __future__ import annotations

import os

import pytest

import qstopwatch


def bounds_jobs():
    return qstopwatch.grid_jobs(J=[4.0, 8.0, 16.0], p=[0.8, 0.9])


def test_grid_jobs_order():
    jobs = qstopwatch.grid_jobs(p=[0.8, 0.9], J=[4, 8])
    assert jobs == [
        {'J': 4, 'p': 0.8},
        {'J': 4, 'p': 0.9},
        {'J': 8, 'p': 0.8},
        {'J': 8, 'p': 0.9},
    ]


def test_serial_bounds_sweep():
    sweep = qstopwatch.BoundsSweep(jobs=bounds_jobs(), verbose=False)
    rows = sweep.orchestrate_jobs('serial')
    assert [(row['J'], row['p']) for row in rows] == [
        (job['J'], job['p']) for job in bounds_jobs()
    ]
    assert all(row['satisfied'] for row in rows)
    assert sweep.get_remaining_jobs() == []


def test_job_names_and_seeds():
    sweep = qstopwatch.BoundsSweep(jobs=[{'J': 4.0, 'p': 0.9}], verbose=False)
    assert sweep.get_job_name(0) == 'BoundsSweep__J_4.0__p_0.9'
    again = qstopwatch.BoundsSweep(jobs=[{'J': 4.0, 'p': 0.9}], verbose=False)
    assert sweep.get_job_seed(0) == again.get_job_seed(0)
    other = qstopwatch.BoundsSweep(jobs=[{'J': 4.0, 'p': 0.9}], seed=1, verbose=False)
    assert other.get_job_seed(0) != sweep.get_job_seed(0)


def test_file_tracker_resumes(tmp_path):
    output_dir = str(tmp_path / 'bounds')
    first = qstopwatch.BoundsSweep(
        jobs=bounds_jobs(), output_dir=output_dir, verbose=False
    )
    rows = first.orchestrate_jobs('serial')
    assert len(os.listdir(output_dir)) == len(bounds_jobs())

    second = qstopwatch.BoundsSweep(
        jobs=bounds_jobs(), output_dir=output_dir, verbose=False
    )
    assert second.get_remaining_jobs() == []
    assert second.orchestrate_jobs('serial') == rows


def test_memory_tracker_missing_result():
    sweep = qstopwatch.BoundsSweep(jobs=bounds_jobs(), verbose=False)
    with pytest.raises(qstopwatch.StopwatchError):
        sweep.tracker.load_result(0)


def test_tracker_selection(tmp_path):
    with pytest.raises(qstopwatch.ConfigError):
        qstopwatch.BoundsSweep(jobs=bounds_jobs(), tracker='bogus', verbose=False)
    with pytest.raises(qstopwatch.ConfigError):
        qstopwatch.BoundsSweep(jobs=bounds_jobs(), tracker='file', verbose=False)
    sweep = qstopwatch.BoundsSweep(
        jobs=bounds_jobs(), output_dir=str(tmp_path), verbose=False
    )
    assert isinstance(sweep.tracker, qstopwatch.FileTracker)


def test_unknown_executor():
    sweep = qstopwatch.BoundsSweep(jobs=bounds_jobs(), verbose=False)
    with pytest.raises(qstopwatch.ConfigError):
        sweep.orchestrate_jobs('threads')  # type: ignore


def test_resolve_n_processes(monkeypatch):
    monkeypatch.delenv(qstopwatch.threads_variable, raising=False)
    assert qstopwatch.resolve_n_processes() is None
    assert qstopwatch.resolve_n_processes(3) == 3

    monkeypatch.setenv(qstopwatch.threads_variable, '2')
    assert qstopwatch.resolve_n_processes() == 2
    assert qstopwatch.resolve_n_processes(8) == 2

    for bad in ('zero', '0', '-3'):
        monkeypatch.setenv(qstopwatch.threads_variable, bad)
        with pytest.raises(qstopwatch.ConfigError):
            qstopwatch.resolve_n_processes()


def test_compression_sweep_rows():
    jobs = qstopwatch.grid_jobs(n=[8, 16], window_policy=['qubit-budget=4'])
    rows = qstopwatch.CompressionSweep(jobs=jobs, verbose=False).orchestrate_jobs(
        'serial'
    )
    assert rows[0]['eps_trace'] == pytest.approx(0.0, abs=1e-12)
    assert rows[1]['eps_trace'] > 0


def test_stopwatch_sweep_row():
    jobs = [
        {
            'n': 8,
            'k': 2,
            'T': 1.0,
            'window_policy': 'qubit-budget=4',
            'trials': 500,
        }
    ]
    rows = qstopwatch.StopwatchSweep(jobs=jobs, verbose=False).orchestrate_jobs(
        'serial'
    )
    assert len(rows) == 1
    row = rows[0]
    assert row['ratio'] == pytest.approx(row['delta_coh'] / row['delta_inc'])
    assert row['eps_total'] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.slow
def test_parallel_matches_serial():
    serial = qstopwatch.BoundsSweep(jobs=bounds_jobs(), verbose=False)
    parallel = qstopwatch.BoundsSweep(jobs=bounds_jobs(), verbose=False)
    assert parallel.orchestrate_jobs('parallel', n_processes=2) == serial.orchestrate_jobs(
        'serial'
    )


def test_count_violations():
    rows = [{'satisfied': True}, {'satisfied': False}, {'bound_satisfied': False}, {}]
    assert qstopwatch.count_violations(rows) == 2


def test_verbose_sweep_prints_status(tmp_path, capsys):
    sweep = qstopwatch.BoundsSweep(
        jobs=bounds_jobs(), output_dir=str(tmp_path), verbose=True
    )
    sweep.orchestrate_jobs('serial')
    capsys.readouterr()
    assert sweep.get_axes() == {'J': [4.0, 8.0, 16.0], 'p': [0.8, 0.9]}

    sweep.orchestrate_jobs('serial')
    assert 'All jobs already completed' in capsys.readouterr().out
