"""
Monte-Carlo experiment harness

Samples random graphs trial by trial, measures leaf-removal statistics,
special cycles, exact ranks and matchings, and summarises each experiment
suite against the analytic predictions:
- rank-char: corank = i + s(core) on G(n, c/n) (or G(n, n, c/n) with bipartite)
- main-rmt: rank = n - s on K(n, m, 2) (or rank B = n2 - s2 on K(n1, n2, m, 2))
- two-core: nonsingularity of the giant 2-core of G(n, c/n)
- matching: nu = floor((n - i - q) / 2) on G(n, c/n)
- critical-scan: descriptive defect table on a grid of densities

Trials use seeds derived from the master seed and their index, run in worker
processes and are merged by index, so outputs do not depend on scheduling.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, fields
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from .analytics import (
    corank_distribution_params,
    gamma_pair,
    is_critical,
    subcritical_cycle_means,
    truncated_poisson_from_mean,
    two_core_params,
)
from .core import (
    BaseProcessor,
    ExperimentSchema,
    KSRankError,
    derive_seed,
    worker_count,
)
from .cycles import SpecialCycleReport, enumerate_special_cycles, isolated_cycle_census, special_kernel_vector
from .generators import sample_graph, sampler_config_from_dict
from .goodness_of_fit import poisson_gof
from .graph_core import BipartiteGraph, Graph, build_graph, connected_components, induced_subgraph, to_sparse
from .linalg import adjacency_matrix, biadjacency_matrix, max_matching, rank_adjacency, rank_biadjacency, rank_exact, sigma
from .peeling import k_core, karp_sipser
from .predictor import predict_corank_adjacency


logger = logging.getLogger('ksrank.harness')

AnyGraph = Union[Graph, BipartiteGraph]

THRESHOLD_NOTE = (
    "Agreement thresholds are engineering choices; the limit laws give "
    "no finite-n rates."
)


@dataclass
class TrialRecord:
    """
    One Monte-Carlo trial. Field order is the CSV column order; ``elapsed``
    is kept out of the CSV.
    """
    trial: int
    seed: int
    model: str
    n: int
    n1: Optional[int] = None
    n2: Optional[int] = None
    p: Optional[float] = None
    m: Optional[int] = None
    edges: Optional[int] = None
    failed: bool = False
    error: str = ''
    i: Optional[int] = None
    i1: Optional[int] = None
    i2: Optional[int] = None
    steps: Optional[int] = None
    core_vertices: Optional[int] = None
    core_edges: Optional[int] = None
    s: Optional[int] = None
    s1: Optional[int] = None
    s2: Optional[int] = None
    isolated_special: Optional[int] = None
    truncated: Optional[bool] = None
    kernel_ok: Optional[bool] = None
    q: Optional[int] = None
    census: str = ''
    predicted: Optional[int] = None
    rank: Optional[int] = None
    corank: Optional[int] = None
    defect: Optional[int] = None
    primes: str = ''
    nu: Optional[int] = None
    sigma: Optional[int] = None
    chain_ok: Optional[bool] = None
    two_core_vertices: Optional[int] = None
    two_core_edges: Optional[int] = None
    two_core_corank: Optional[int] = None
    elapsed: float = 0.0


CSV_COLUMNS = [f.name for f in fields(TrialRecord) if f.name != 'elapsed']


# =============================================================================
# Per-trial measurements
# =============================================================================

def _format_census(counts: Dict[int, int]) -> str:
    return ';'.join(f"{length}:{count}" for length, count in sorted(counts.items()))


def parse_census(text: str) -> Dict[int, int]:
    """Inverse of the ``census`` column encoding ``length:count;...``"""
    if not isinstance(text, str) or not text:
        return {}
    return {int(a): int(b) for a, b in (item.split(':') for item in text.split(';'))}


def kernels_vanish(core: AnyGraph, report: SpecialCycleReport) -> bool:
    """Check A v = 0 (or y B = 0, B x = 0) exactly for every reported cycle"""
    if not report.cycles:
        return True
    if isinstance(core, BipartiteGraph):
        B = biadjacency_matrix(core)
        for record in report.cycles:
            vector = special_kernel_vector(core, record)
            product = vector @ B if record.kind == '1-special' else B @ vector
            if np.any(product):
                return False
        return True

    A = to_sparse(core).astype(np.int64)
    return all(not np.any(A @ special_kernel_vector(core, record)) for record in report.cycles)


def giant_two_core(G: Graph) -> Graph:
    """2-core of the largest connected component (empty graph if G is empty)"""
    components = connected_components(G)
    if not components:
        return build_graph(0, [])
    return k_core(induced_subgraph(G, components[0]), 2)


def _measure_graph(G: Graph, config: Dict, record: TrialRecord) -> None:
    ks = karp_sipser(G)
    report = enumerate_special_cycles(ks.core)
    census = isolated_cycle_census(ks.core)
    rank = rank_adjacency(G)

    record.i = ks.i
    record.steps = ks.steps
    record.core_vertices = ks.core_size
    record.core_edges = ks.core.num_edges
    record.s = report.s
    record.isolated_special = sum(1 for c in report.cycles if c.isolated)
    record.truncated = report.truncated
    record.kernel_ok = kernels_vanish(ks.core, report)
    record.q = census.q
    record.census = _format_census(census.counts)
    record.predicted = ks.i + report.s
    record.rank = rank.rank
    record.corank = rank.corank
    record.defect = rank.corank - ks.i
    record.primes = ';'.join(str(p) for p in rank.primes)
    record.sigma = sigma(G)
    # a pendant edge lies in some maximum matching, so nu(G) = steps + nu(core)
    record.nu = ks.steps + max_matching(ks.core)

    chain = (
        2 * record.nu <= record.sigma
        and rank.rank <= record.sigma <= G.n - ks.i
        and record.defect >= 0
    )
    if config.get('with_matching'):
        chain = chain and max_matching(G) == record.nu
    record.chain_ok = bool(chain)


def _measure_bipartite(B: BipartiteGraph, config: Dict, record: TrialRecord) -> None:
    ks = karp_sipser(B)
    report = enumerate_special_cycles(ks.core)
    rank = rank_biadjacency(B)

    record.i = ks.i
    record.i1 = ks.i1
    record.i2 = ks.i2
    record.steps = ks.steps
    record.core_vertices = ks.core_size
    record.core_edges = ks.core.num_edges
    record.s1 = report.s1
    record.s2 = report.s2
    record.isolated_special = sum(1 for c in report.cycles if c.isolated and c.kind == '1-special')
    record.truncated = report.truncated
    record.kernel_ok = kernels_vanish(ks.core, report)
    record.predicted = max(ks.i1 + report.s1, ks.i2 + report.s2)
    record.rank = rank.rank
    record.corank = rank.corank
    record.defect = max(B.n1, B.n2) - rank.rank - max(ks.i1, ks.i2)
    record.primes = ';'.join(str(p) for p in rank.primes)
    record.nu = max_matching(B)
    record.chain_ok = bool(
        rank.rank <= record.nu <= min(B.n1 - ks.i1, B.n2 - ks.i2) and record.defect >= 0
    )


def _measure_two_core(G: Graph, record: TrialRecord) -> None:
    core = giant_two_core(G)
    record.two_core_vertices = core.n
    record.two_core_edges = core.num_edges
    record.two_core_corank = rank_adjacency(core).corank


def run_single_trial(config: Dict, index: int) -> TrialRecord:
    """
    Sample and measure trial ``index`` of an experiment.

    Toolkit errors do not propagate: the record comes back with
    ``failed=True`` and the message.
    """
    seed = derive_seed(config.get('seed', 0), index)
    sampler = sampler_config_from_dict(config, seed)
    record = TrialRecord(
        trial=index,
        seed=seed,
        model=sampler.model,
        n=sampler.n1 + sampler.n2 if sampler.bipartite else sampler.n,
        n1=sampler.n1 if sampler.bipartite else None,
        n2=sampler.n2 if sampler.bipartite else None,
        p=sampler.p,
        m=sampler.m,
    )
    start = time.perf_counter()
    try:
        G = sample_graph(sampler)
        record.edges = G.num_edges
        if config.get('measure') == 'two-core':
            _measure_two_core(G, record)
        elif isinstance(G, BipartiteGraph):
            _measure_bipartite(G, config, record)
        else:
            _measure_graph(G, config, record)
    except KSRankError as e:
        record.failed = True
        record.error = f"{type(e).__name__}: {e}"
    record.elapsed = time.perf_counter() - start
    return record


# =============================================================================
# Trial execution
# =============================================================================

class TrialRunner(BaseProcessor):
    """
    Runs all trials of an experiment configuration.

    Parameters (keyword)
    --------------------
    workers : int, optional
        Worker processes (``KSRANK_WORKERS`` or all cores by default)
    progress : bool
        Show a tqdm progress bar
    """

    def process(self, data: Dict) -> List[TrialRecord]:
        config = data
        trials = int(config['trials'])
        workers = self.params.get('workers') or worker_count()
        workers = max(1, min(workers, trials))
        progress = self.params.get('progress', True)
        desc = config.get('suite', 'trials')

        records: Dict[int, TrialRecord] = {}
        with tqdm(total=trials, desc=desc, disable=not progress) as bar:
            if workers == 1:
                for index in range(trials):
                    records[index] = run_single_trial(config, index)
                    bar.update(1)
            else:
                with ProcessPoolExecutor(max_workers=workers) as executor:
                    futures = {executor.submit(run_single_trial, config, index): index for index in range(trials)}
                    for future in as_completed(futures):
                        records[futures[future]] = future.result()
                        bar.update(1)

        ordered = [records[index] for index in range(trials)]
        failed = [r for r in ordered if r.failed]
        for r in failed:
            self.logger.warning(f"Trial {r.trial} failed: {r.error}")
        self.logger.info(f"Completed {trials} trials ({len(failed)} failed) with {workers} worker(s)")
        return ordered


def run_trials(config: Dict, workers: Optional[int] = None, progress: bool = True) -> List[TrialRecord]:
    """
    Convenience function to run an experiment configuration.
    """
    valid, errors = ExperimentSchema.validate_config(config) if 'suite' in config else (True, [])
    if not valid:
        raise ValueError(f"Invalid configuration: {'; '.join(errors)}")
    return TrialRunner(workers=workers, progress=progress).process(config)


# =============================================================================
# Output
# =============================================================================

def records_to_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
    """Trial table in CSV column order (timing excluded)"""
    rows = [{k: v for k, v in asdict(r).items() if k != 'elapsed'} for r in records]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_frame(frame: pd.DataFrame, path: Union[str, Path], kind: str = 'trials') -> Path:
    """Write a table as versioned CSV with 12 significant digits"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    version = ExperimentSchema.default('csv_schema_version')
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(f"# ksrank {kind} schema v{version}\n")
        frame.to_csv(f, index=False, float_format='%.12g', lineterminator='\n')
    return path


def write_records(records: Sequence[TrialRecord], path: Union[str, Path]) -> Path:
    return write_frame(records_to_frame(records), path, 'trials')


def read_records(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, comment='#')


def timing_summary(records: Sequence[TrialRecord]) -> Dict:
    elapsed = [r.elapsed for r in records]
    return {
        'total_seconds': float(sum(elapsed)),
        'mean_trial_seconds': float(np.mean(elapsed)) if elapsed else 0.0,
        'max_trial_seconds': float(max(elapsed)) if elapsed else 0.0,
    }


# =============================================================================
# Summaries
# =============================================================================

def _valid(records: Sequence[TrialRecord]) -> List[TrialRecord]:
    return [r for r in records if not r.failed]


def _rate(flags: Sequence[bool]) -> float:
    return float(np.mean(flags)) if len(flags) else float('nan')


def _mean_with_error(values: Sequence[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return float('nan'), float('nan')
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else float('nan')
    return float(arr.mean()), se


def _base_summary(config: Dict, records: Sequence[TrialRecord]) -> Dict:
    valid = _valid(records)
    summary = {
        'suite': config.get('suite'),
        'config': config,
        'trials': len(records),
        'valid_trials': len(valid),
        'excluded_failed': len(records) - len(valid),
        'threshold_note': THRESHOLD_NOTE,
        'timing': timing_summary(records),
    }
    if valid and valid[0].chain_ok is not None:
        summary['ks_bound_chain_holds'] = all(r.chain_ok for r in valid)
        summary['kernel_vectors_verified'] = all(r.kernel_ok for r in valid)
        summary['cycle_search_truncated'] = sum(1 for r in valid if r.truncated)
    return summary


def _gof_dict(values: Sequence[int], mu: Optional[float] = None, compound=None) -> Optional[Dict]:
    if not len(values):
        return None
    return poisson_gof(values, mu=mu, compound=compound).to_dict()


def _census_comparison(valid: Sequence[TrialRecord], c: float, bipartite: bool) -> Dict:
    l_max = 12
    predicted = subcritical_cycle_means(c, l_max, bipartite=bipartite)
    totals = {length: 0 for length in predicted}
    for r in valid:
        for length, count in parse_census(r.census).items():
            if length in totals:
                totals[length] += count
    return {
        str(length): {'empirical_mean': totals[length] / len(valid), 'predicted_mean': mean}
        for length, mean in predicted.items()
    }


def summarize_rank_characterisation(config: Dict, records: Sequence[TrialRecord]) -> Dict:
    """Agreement of the exact corank with i + s(core) (or its bipartite form)"""
    summary = _base_summary(config, records)
    valid = _valid(records)
    if not valid:
        return summary
    threshold = config.get('agreement_threshold', 0.95)
    c = float(config['c'])
    bipartite = valid[0].n1 is not None

    if bipartite:
        exact = [max(r.n1, r.n2) - r.rank for r in valid]
        deviation = [abs(r.defect - max(r.s1, r.s2)) for r in valid]
    else:
        exact = [r.corank for r in valid]
        deviation = [abs(r.defect - r.s) for r in valid]
    agreement = _rate([e == r.predicted for e, r in zip(exact, valid)])

    summary.update({
        'agreement_rate': agreement,
        'agreement_threshold': threshold,
        'agreement_passed': agreement >= threshold,
        'mean_abs_defect_minus_s': float(np.mean(deviation)),
        'mean_defect': float(np.mean([r.defect for r in valid])),
    })

    if not is_critical(c):
        params = corank_distribution_params(c)
        defects = [r.defect for r in valid]
        summary['poisson_params'] = asdict(params)
        if bipartite:
            summary['defect_gof'] = _gof_dict(defects, mu=params.gamma_B)
        else:
            summary['defect_gof'] = _gof_dict(defects, compound=(params.gamma_A, params.gamma_A_dagger))
        if params.regime == 'subcritical' and not bipartite:
            summary['core_cycle_census'] = _census_comparison(valid, c, bipartite)
    return summary


def summarize_main_rmt(config: Dict, records: Sequence[TrialRecord]) -> Dict:
    """rank = n - s on the minimum-degree-2 model, and the law of s"""
    summary = _base_summary(config, records)
    valid = _valid(records)
    if not valid:
        return summary
    threshold = config.get('agreement_threshold', 0.95)

    if valid[0].n1 is not None:
        n1, n2, m = valid[0].n1, valid[0].n2, valid[0].m
        lam = truncated_poisson_from_mean(2.0 * m / (n1 + n2)).lam
        g, _ = gamma_pair(lam)
        agreement = _rate([r.corank == r.s2 for r in valid])
        s1_mean, s1_se = _mean_with_error([r.s1 for r in valid])
        s2_mean, s2_se = _mean_with_error([r.s2 for r in valid])
        summary.update({
            'lambda': lam,
            'gamma': g,
            'agreement_rate': agreement,
            'agreement_threshold': threshold,
            'agreement_passed': agreement >= threshold,
            'mean_s1': s1_mean,
            'se_s1': s1_se,
            'mean_s2': s2_mean,
            'se_s2': s2_se,
            's1_gof': _gof_dict([r.s1 for r in valid], mu=g),
            's2_gof': _gof_dict([r.s2 for r in valid], mu=g),
        })
        return summary

    n, m = valid[0].n, valid[0].m
    lam = truncated_poisson_from_mean(2.0 * m / n).lam
    g, g_dagger = gamma_pair(lam)
    s_values = [r.s for r in valid]
    s_mean, s_se = _mean_with_error(s_values)
    agreement = _rate([r.rank == n - r.s for r in valid])
    gof = poisson_gof(s_values, compound=(g - 2.0 * g_dagger, g_dagger))
    summary.update({
        'lambda': lam,
        'gamma': g,
        'gamma_dagger': g_dagger,
        'agreement_rate': agreement,
        'agreement_threshold': threshold,
        'agreement_passed': agreement >= threshold,
        'leaf_free': all(r.i == 0 and r.core_vertices == n for r in valid),
        'mean_s': s_mean,
        'se_s': s_se,
        'mean_s_within_3se': bool(abs(s_mean - g) <= 3 * s_se) if not math.isnan(s_se) else None,
        'mean_isolated_special': float(np.mean([r.isolated_special for r in valid])),
        's_gof': gof.to_dict(),
    })
    return summary


def summarize_matching(config: Dict, records: Sequence[TrialRecord]) -> Dict:
    """nu against floor((n - i - q)/2), plus rank-vs-matching gaps"""
    summary = _base_summary(config, records)
    valid = [r for r in _valid(records) if r.nu is not None]
    if not valid:
        return summary
    threshold = config.get('agreement_threshold', 0.95)
    agreement = _rate([r.nu == (r.n - r.i - r.q) // 2 for r in valid])
    rank_gap = [r.rank - 2 * r.nu for r in valid]
    sigma_gap = [r.sigma - r.rank for r in valid]
    summary.update({
        'agreement_rate': agreement,
        'agreement_threshold': threshold,
        'agreement_passed': agreement >= threshold,
        'mean_rank_minus_2nu': float(np.mean(rank_gap)),
        'max_abs_rank_minus_2nu': int(np.max(np.abs(rank_gap))),
        'mean_sigma_minus_rank': float(np.mean(sigma_gap)),
        'max_sigma_minus_rank': int(np.max(sigma_gap)),
    })
    return summary


def summarize_two_core(config: Dict, records: Sequence[TrialRecord]) -> Dict:
    """Nonsingularity frequency and corank law of the giant 2-core"""
    summary = _base_summary(config, records)
    valid = _valid(records)
    params = two_core_params(float(config['c']))
    summary['two_core_params'] = asdict(params)
    if not valid:
        return summary

    coranks = [r.two_core_corank for r in valid]
    frequency = _rate([k == 0 for k in coranks])
    mean, se = _mean_with_error(coranks)
    tolerance = config.get('frequency_tolerance', 0.06)
    gof = poisson_gof(coranks, mu=params.mu)
    summary.update({
        'nonsingular_frequency': frequency,
        'frequency_tolerance': tolerance,
        'frequency_passed': abs(frequency - params.nonsingular_prob) <= tolerance,
        'mean_corank': mean,
        'se_mean_corank': se,
        'mean_corank_within_3se': bool(abs(mean - params.mu) <= 3 * se) if not math.isnan(se) else None,
        'corank_gof': gof.to_dict(),
    })
    return summary


# =============================================================================
# Suite drivers
# =============================================================================

def two_core_experiment(
    c: float,
    n: int,
    trials: int,
    seed: int = 0,
    workers: Optional[int] = None,
    progress: bool = True,
) -> Tuple[List[TrialRecord], Dict]:
    """
    Giant 2-core singularity experiment on G(n, c/n).

    Raises
    ------
    OutOfRange
        If c <= 1
    """
    two_core_params(c)
    config = ExperimentSchema.build_config('two-core', c=c, n=n, trials=trials, seed=seed)
    config['measure'] = 'two-core'
    records = run_trials(config, workers, progress)
    return records, summarize_two_core(config, records)


def critical_scan(
    c_grid: Sequence[float],
    n: int,
    trials: int,
    seed: int = 0,
    workers: Optional[int] = None,
    progress: bool = True,
) -> pd.DataFrame:
    """
    Mean Karp-Sipser defect on G(n, c/n) across a grid of densities.

    Analytic columns are left empty inside the guard band around e.
    Descriptive only.
    """
    rows = []
    for index, c in enumerate(c_grid):
        config = ExperimentSchema.build_config(
            'critical-scan', c=float(c), n=n, trials=trials, seed=derive_seed(seed, index)
        )
        records = _valid(run_trials(config, workers, progress))
        defects = np.asarray([r.defect for r in records], dtype=float)
        row = {
            'c': float(c),
            'trials': trials,
            'failed': trials - len(records),
            'mean_defect': float(defects.mean()) if defects.size else float('nan'),
            'sd_defect': float(defects.std(ddof=1)) if defects.size > 1 else float('nan'),
            'mean_i': float(np.mean([r.i for r in records])) if records else float('nan'),
            'mean_core_vertices': float(np.mean([r.core_vertices for r in records])) if records else float('nan'),
            'regime': None,
            'gamma_B': None,
            'gamma_A': None,
            'gamma_A_dagger': None,
            'predicted_mean_defect': None,
        }
        if is_critical(float(c)):
            row['regime'] = 'critical'
        else:
            params = corank_distribution_params(float(c))
            row.update({
                'regime': params.regime,
                'gamma_B': params.gamma_B,
                'gamma_A': params.gamma_A,
                'gamma_A_dagger': params.gamma_A_dagger,
                'predicted_mean_defect': params.mean_defect_A,
            })
        logger.info(f"c={c:.6g}: mean defect {row['mean_defect']:.4f} over {len(records)} trials")
        rows.append(row)
    return pd.DataFrame(rows)


_SUMMARIZERS = {
    'rank-char': summarize_rank_characterisation,
    'main-rmt': summarize_main_rmt,
    'matching': summarize_matching,
}


def suite_config(suite: str, bipartite: bool = False, **overrides) -> Dict:
    """
    Full configuration of a suite, with the bipartite variants filled in.

    rank-char with ``bipartite`` samples G(n, n, c/n); main-rmt with
    ``bipartite`` samples K(n1, n2, m, 2) with n1 = 1.05 n2 and
    m = 1.5 (n1 + n2) unless given.
    """
    config = ExperimentSchema.build_config(suite, bipartite=bipartite, **overrides)
    if suite == 'matching':
        config['with_matching'] = True
    if suite == 'two-core':
        config['measure'] = 'two-core'
    if bipartite and suite == 'rank-char':
        config['model'] = 'gnnp'
    if bipartite and suite == 'main-rmt':
        config['model'] = 'min2-bip'
        n2 = int(overrides.get('n2') or config['n'])
        n1 = int(overrides.get('n1') or n2 + max(1, n2 // 20))
        config['n1'], config['n2'] = n1, n2
        if overrides.get('m') is None:
            config['m'] = int(1.5 * (n1 + n2))
    return config


def run_suite(
    suite: str,
    workers: Optional[int] = None,
    progress: bool = True,
    **overrides,
) -> Tuple[pd.DataFrame, Dict]:
    """
    Run one experiment suite.

    Returns
    -------
    (table, summary)
        The per-trial table (per-grid-point for critical-scan) and a
        JSON-ready summary.
    """
    if suite == 'critical-scan':
        config = suite_config(suite, **overrides)
        grid = config.get('c_grid') if overrides.get('c') is None else [overrides['c']]
        table = critical_scan(grid, int(config['n']), int(config['trials']), int(config['seed']), workers, progress)
        return table, {'suite': suite, 'config': config, 'threshold_note': THRESHOLD_NOTE,
                       'rows': table.to_dict(orient='records')}

    if suite == 'two-core':
        config = suite_config(suite, **overrides)
        records, summary = two_core_experiment(
            float(config['c']), int(config['n']), int(config['trials']), int(config['seed']), workers, progress
        )
        return records_to_frame(records), summary

    if suite not in _SUMMARIZERS:
        raise ValueError(f"Unknown suite: {suite}")
    config = suite_config(suite, **overrides)
    records = run_trials(config, workers, progress)
    return records_to_frame(records), _SUMMARIZERS[suite](config, records)


# =============================================================================
# Small-graph census
# =============================================================================

def small_graph_agreement(max_vertices: int = 6) -> Dict[int, Dict]:
    """
    Exact agreement of corank A(G) with i(G) + s(core) over every labelled
    graph on up to ``max_vertices`` vertices.

    Reported per vertex count; the formula is asymptotic, so disagreements
    are expected on some small graphs.
    """
    results = {}
    for n in range(1, max_vertices + 1):
        pairs = list(combinations(range(n), 2))
        agree = 0
        total = 0
        for mask in range(1 << len(pairs)):
            G = build_graph(n, [pairs[b] for b in range(len(pairs)) if mask >> b & 1])
            prediction = predict_corank_adjacency(G)
            exact = n - rank_exact(adjacency_matrix(G))
            agree += int(prediction.predicted == exact)
            total += 1
        results[n] = {'graphs': total, 'agreement_rate': agree / total}
        logger.info(f"n={n}: {agree}/{total} labelled graphs agree")
    return results
