#!/usr/bin/env python3
"""
Tests for the Monte-Carlo harness: trial records, suites, CSV output and
the small-graph census. Everything runs at small n.

Usage:
    pytest test_harness.py
"""

import logging

import pandas as pd
import pytest

from src.analytics import E
from src.core import ExperimentSchema, OutOfRange, derive_seed
from src.cycles import enumerate_special_cycles
from src.generators import sample_graph, sampler_config_from_dict
from src.graph_core import build_graph
from src.harness import (
    CSV_COLUMNS,
    critical_scan,
    giant_two_core,
    kernels_vanish,
    parse_census,
    read_records,
    records_to_frame,
    run_single_trial,
    run_suite,
    run_trials,
    small_graph_agreement,
    suite_config,
    two_core_experiment,
    write_records,
)
from src.linalg import max_matching

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('test_harness')


def small_config(suite, **overrides):
    return suite_config(suite, **overrides)


# =============================================================================
# Seeds and single trials
# =============================================================================

def test_derive_seed_is_stable_and_spread():
    assert derive_seed(0, 0) == derive_seed(0, 0)
    seeds = {derive_seed(42, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert all(0 <= s < 2 ** 64 for s in seeds)


def test_single_trial_record():
    config = small_config('rank-char', n=150, trials=1, seed=3)
    record = run_single_trial(config, 0)
    assert not record.failed
    assert record.seed == derive_seed(3, 0)
    assert record.n == 150
    assert record.p == pytest.approx(4.0 / 150)
    assert record.predicted == record.i + record.s
    assert record.defect == record.corank - record.i
    assert record.defect >= 0
    assert record.chain_ok and record.kernel_ok
    assert record.n == record.core_vertices + record.i + 2 * record.steps


def test_matching_number_recorded_outside_matching_suite():
    config = small_config('rank-char', n=150, trials=1, seed=12)
    record = run_single_trial(config, 0)
    G = sample_graph(sampler_config_from_dict(config, record.seed))
    assert record.nu == max_matching(G)
    assert 2 * record.nu <= record.sigma
    assert record.chain_ok


def test_failed_trials_are_flagged_not_raised():
    config = small_config('main-rmt', n=2000, m=3000, trials=3, seed=1, rejection_cap=1)
    records = run_trials(config, workers=1, progress=False)
    failed = [r for r in records if r.failed]
    assert failed
    assert all('RejectionCapExceeded' in r.error for r in failed)


def test_invalid_configuration():
    config = small_config('rank-char', trials=0)
    with pytest.raises(ValueError):
        run_trials(config, workers=1, progress=False)


# =============================================================================
# Output
# =============================================================================

def test_csv_schema_and_round_trip(tmp_path):
    config = small_config('matching', n=120, trials=3, seed=9)
    records = run_trials(config, workers=1, progress=False)
    path = write_records(records, tmp_path / "out" / "trials.csv")

    first_line = path.read_text(encoding='utf-8').splitlines()[0]
    assert first_line == "# ksrank trials schema v1"
    frame = read_records(path)
    assert list(frame.columns) == CSV_COLUMNS
    assert 'elapsed' not in frame.columns
    assert list(frame['trial']) == [0, 1, 2]
    assert list(frame['nu']) == [r.nu for r in records]


def test_output_does_not_depend_on_worker_count(tmp_path):
    config = small_config('rank-char', n=120, trials=4, seed=77)
    serial = write_records(run_trials(config, workers=1, progress=False), tmp_path / "serial.csv")
    parallel = write_records(run_trials(config, workers=2, progress=False), tmp_path / "parallel.csv")
    assert serial.read_bytes() == parallel.read_bytes()


def test_census_encoding():
    assert parse_census('') == {}
    assert parse_census('3:1;5:2') == {3: 1, 5: 2}
    assert parse_census(float('nan')) == {}


def test_kernels_vanish_on_square():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert kernels_vanish(G, enumerate_special_cycles(G))


# =============================================================================
# Suites
# =============================================================================

def test_rank_characterisation_suite():
    table, summary = run_suite('rank-char', workers=1, progress=False, n=150, trials=4, seed=5)
    assert len(table) == 4
    assert summary['valid_trials'] == 4
    assert summary['ks_bound_chain_holds']
    assert summary['kernel_vectors_verified']
    assert 0.0 <= summary['agreement_rate'] <= 1.0
    assert summary['poisson_params']['regime'] == 'supercritical'
    assert summary['defect_gof']['trials'] == 4


def test_bipartite_rank_characterisation_suite():
    table, summary = run_suite('rank-char', workers=1, progress=False, bipartite=True, n=80, trials=3, seed=2)
    assert list(table['model'].unique()) == ['gnnp']
    assert (table['n1'] == 80).all() and (table['n2'] == 80).all()
    assert summary['ks_bound_chain_holds']
    assert summary['kernel_vectors_verified']


def test_main_rmt_suite():
    table, summary = run_suite('main-rmt', workers=1, progress=False, n=120, m=180, trials=4, seed=4)
    assert summary['leaf_free']
    assert (table['i'] == 0).all()
    assert (table['core_vertices'] == 120).all()
    assert summary['gamma'] > summary['gamma_dagger'] * 2
    assert 's_gof' in summary


def test_bipartite_main_rmt_configuration():
    config = suite_config('main-rmt', bipartite=True, n=200)
    assert config['model'] == 'min2-bip'
    assert (config['n1'], config['n2']) == (210, 200)
    assert config['m'] == int(1.5 * 410)

    table, summary = run_suite('main-rmt', workers=1, progress=False, bipartite=True, n=60, trials=2, seed=8)
    assert (table['i1'] == 0).all() and (table['i2'] == 0).all()
    assert 'mean_s2' in summary


def test_matching_suite():
    table, summary = run_suite('matching', workers=1, progress=False, n=150, trials=4, seed=6)
    assert table['nu'].notna().all()
    assert summary['ks_bound_chain_holds']
    assert summary['max_sigma_minus_rank'] >= 0


def test_two_core_experiment():
    with pytest.raises(OutOfRange):
        two_core_experiment(1.0, n=100, trials=2, progress=False)
    records, summary = two_core_experiment(3.0, n=150, trials=6, seed=3, workers=1, progress=False)
    assert len(records) == 6
    assert all(r.two_core_vertices is not None for r in records)
    assert 0.0 <= summary['nonsingular_frequency'] <= 1.0
    assert summary['two_core_params']['lambda2'] == pytest.approx(2.822, abs=2e-3)


def test_giant_two_core():
    G = build_graph(8, [(0, 1), (1, 2), (0, 2), (2, 3), (5, 6)])
    core = giant_two_core(G)
    assert core.labels == (0, 1, 2)
    assert giant_two_core(build_graph(0, [])).n == 0


def test_critical_scan():
    frame = critical_scan([2.0, E], n=80, trials=2, seed=1, workers=1, progress=False)
    assert list(frame['regime']) == ['subcritical', 'critical']
    assert pd.isna(frame.loc[1, 'gamma_B'])
    assert frame.loc[0, 'gamma_B'] > 0
    assert (frame['failed'] == 0).all()


def test_critical_scan_suite_single_density():
    table, summary = run_suite('critical-scan', workers=1, progress=False, n=60, trials=2, c=2.5)
    assert list(table['c']) == [2.5]
    assert summary['suite'] == 'critical-scan'


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite('nonsense', workers=1, progress=False)


def test_suite_defaults_come_from_schema():
    config = suite_config('two-core')
    assert config['c'] == ExperimentSchema.SUITES['two-core']['c']
    assert config['measure'] == 'two-core'
    assert suite_config('matching')['with_matching']


# =============================================================================
# Small graphs
# =============================================================================

def test_small_graph_agreement():
    results = small_graph_agreement(4)
    assert [results[n]['graphs'] for n in range(1, 5)] == [1, 2, 8, 64]
    assert all(0.0 <= r['agreement_rate'] <= 1.0 for r in results.values())
    assert results[1]['agreement_rate'] == 1.0
    assert results[2]['agreement_rate'] == 1.0


def test_records_to_frame_keeps_failed_rows():
    config = small_config('rank-char', n=50, trials=2, seed=0)
    frame = records_to_frame(run_trials(config, workers=1, progress=False))
    assert list(frame.columns) == CSV_COLUMNS
    assert not frame['failed'].any()
