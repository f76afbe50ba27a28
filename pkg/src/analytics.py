"""
Analytic constants for sparse random graph ranks

Closed forms and scalar root finding used to predict the Monte-Carlo outcomes:
- eta(c) solving c = eta * exp(eta) below the critical density e
- extreme fixed points of the warning-propagation map and lambda_KS above e
- gamma / gamma-dagger and the Poisson means of the Karp-Sipser defect
- the 2-core parameter lambda_2 and the giant 2-core nonsingularity probability
- truncated Poisson (Z >= 2) calibration and degree statistics
- subcritical cycle-census means and configuration-model simplicity

Every root is found by bisection on a monotone map.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import optimize, special, stats

from .core import (
    CriticalPoint,
    ExperimentSchema,
    NonPositiveLambda,
    NoSeparation,
    OutOfRange,
)


E = math.e


def _bisect(f, lo: float, hi: float) -> float:
    return optimize.bisect(
        f,
        lo,
        hi,
        xtol=ExperimentSchema.default('bisect_xtol'),
        maxiter=ExperimentSchema.default('bisect_maxiter'),
    )


def _guard_critical(c: float) -> None:
    if abs(c - E) < ExperimentSchema.default('critical_guard'):
        raise CriticalPoint(f"c={c!r} lies inside the guard band around e")


def is_critical(c: float) -> bool:
    return abs(c - E) < ExperimentSchema.default('critical_guard')


# =============================================================================
# Data types
# =============================================================================

@dataclass
class PoissonParams:
    """Poisson means describing the Karp-Sipser defect at density c"""
    c: float
    regime: str  # 'subcritical' or 'supercritical'
    eta: Optional[float] = None
    alpha_lo: Optional[float] = None
    alpha_hi: Optional[float] = None
    lambda_ks: Optional[float] = None
    gamma_B: float = 0.0
    gamma_A: float = 0.0
    gamma_A_dagger: float = 0.0

    @property
    def mean_defect_A(self) -> float:
        """Mean of Y + 2Y-dagger"""
        return self.gamma_A + 2.0 * self.gamma_A_dagger


@dataclass
class TruncatedPoissonStats:
    """Statistics of Z ~ Poisson(lam) conditioned on Z >= 2"""
    lam: float
    mean: float
    rho: Dict[int, float] = field(repr=False)
    tail_mass: float = 0.0
    e2: float = 0.0
    factorial_moment2: float = 0.0

    @property
    def p_two(self) -> float:
        return self.rho.get(2, 0.0)


@dataclass
class TwoCoreParams:
    c: float
    lambda2: float
    nonsingular_prob: float
    mu: float


# =============================================================================
# Subcritical branch
# =============================================================================

def solve_eta(c: float) -> float:
    """
    Solve c = eta * exp(eta) for eta in [0, 1].

    Raises
    ------
    CriticalPoint
        If c is within the guard band of e
    OutOfRange
        If c < 0 or c > e
    """
    _guard_critical(c)
    if c < 0 or c > E:
        raise OutOfRange(f"eta(c) needs 0 <= c < e, got c={c!r}")
    if c == 0:
        return 0.0
    return _bisect(lambda eta: eta * math.exp(eta) - c, 0.0, 1.0)


def subcritical_cycle_means(c: float, l_max: int, bipartite: bool = False) -> Dict[int, float]:
    """
    Expected number of Karp-Sipser core cycles of each length below e.

    Graph mode: eta^l / (2l) for l = 3..l_max.
    Bipartite mode: eta^(2k) / (2k) for even lengths 4..l_max.
    """
    eta = solve_eta(c)
    if bipartite:
        return {l: eta ** l / l for l in range(4, l_max + 1, 2)}
    return {l: eta ** l / (2 * l) for l in range(3, l_max + 1)}


# =============================================================================
# Supercritical branch
# =============================================================================

def warning_propagation(c: float, alpha: float) -> float:
    """alpha -> 1 - exp(-c * exp(-c * (1 - alpha)))"""
    return 1.0 - math.exp(-c * math.exp(-c * (1.0 - alpha)))


def _iterate_fixed_point(c: float, start: float) -> float:
    tol = ExperimentSchema.default('fixed_point_tol')
    alpha = start
    for _ in range(ExperimentSchema.default('fixed_point_maxiter')):
        nxt = warning_propagation(c, alpha)
        if abs(nxt - alpha) < tol:
            return nxt
        alpha = nxt
    return alpha


def ks_fixed_points(c: float) -> Tuple[float, float, float]:
    """
    Smallest and largest fixed points of the warning-propagation map and
    lambda_KS = c * (alpha_hi - alpha_lo).

    The map is increasing, so iterating from 0 (resp. 1) converges
    monotonically to the smallest (resp. largest) fixed point.

    Returns
    -------
    (alpha_lo, alpha_hi, lambda_ks)

    Raises
    ------
    CriticalPoint, OutOfRange, NoSeparation
    """
    _guard_critical(c)
    if c < E:
        raise OutOfRange(f"fixed points separate only for c > e, got c={c!r}")

    alpha_lo = _iterate_fixed_point(c, 0.0)
    alpha_hi = _iterate_fixed_point(c, 1.0)
    if alpha_hi - alpha_lo < ExperimentSchema.default('separation_tol'):
        raise NoSeparation(f"fixed points coincide at c={c!r} (alpha={alpha_lo:.12g})")
    return alpha_lo, alpha_hi, c * (alpha_hi - alpha_lo)


def _ratio_sinh(lam: float) -> float:
    return lam / (2.0 * math.sinh(lam / 2.0))


def _ratio_expm1(lam: float) -> float:
    return lam / math.expm1(lam)


def gamma_pair(lam: float) -> Tuple[float, float]:
    """
    gamma(lam) and gamma-dagger(lam).

    gamma = -1/4 log(1 - (lam / (e^(lam/2) - e^(-lam/2)))^4)
    gamma-dagger = -1/8 log(1 - (lam / (e^lam - 1))^4)

    Raises
    ------
    NonPositiveLambda
        If lam <= 0 (gamma diverges as lam -> 0)
    OutOfRange
        If gamma - 2 * gamma-dagger comes out negative
    """
    if not lam > 0:
        raise NonPositiveLambda(f"gamma needs lam > 0, got {lam!r}")
    g = -0.25 * math.log1p(-_ratio_sinh(lam) ** 4)
    g_dagger = -0.125 * math.log1p(-_ratio_expm1(lam) ** 4)
    if g - 2.0 * g_dagger < 0:
        raise OutOfRange(f"gamma - 2*gamma_dagger < 0 at lam={lam!r}")
    return g, g_dagger


def corank_distribution_params(c: float) -> PoissonParams:
    """
    Poisson means of the Karp-Sipser defect at density c.

    Below e: gamma_B = -1/4 log(1 - eta^4), gamma_A_dagger = gamma_B / 2,
    gamma_A = 0. Above e: gamma_B = gamma(lambda_KS),
    gamma_A_dagger = gamma-dagger(lambda_KS), gamma_A = gamma_B - 2 gamma_A_dagger.
    """
    _guard_critical(c)
    if c < 0:
        raise OutOfRange(f"density must be non-negative, got {c!r}")

    if c < E:
        eta = solve_eta(c)
        gamma_b = -0.25 * math.log1p(-eta ** 4)
        return PoissonParams(
            c=c,
            regime='subcritical',
            eta=eta,
            gamma_B=gamma_b,
            gamma_A=0.0,
            gamma_A_dagger=gamma_b / 2.0,
        )

    alpha_lo, alpha_hi, lambda_ks = ks_fixed_points(c)
    g, g_dagger = gamma_pair(lambda_ks)
    return PoissonParams(
        c=c,
        regime='supercritical',
        alpha_lo=alpha_lo,
        alpha_hi=alpha_hi,
        lambda_ks=lambda_ks,
        gamma_B=g,
        gamma_A=g - 2.0 * g_dagger,
        gamma_A_dagger=g_dagger,
    )


# =============================================================================
# 2-core
# =============================================================================

def _mean_of_positive_poisson(lam: float) -> float:
    """lam / (1 - e^-lam), the mean of Poisson(lam) given Z >= 1"""
    if lam == 0:
        return 1.0
    return lam / -math.expm1(-lam)


def two_core_params(c: float) -> TwoCoreParams:
    """
    lambda_2 solving lam / (1 - e^-lam) = c, the limiting probability that the
    giant 2-core is nonsingular, and the Poisson mean of its corank.

    Raises
    ------
    OutOfRange
        If c <= 1
    """
    if c <= 1:
        raise OutOfRange(f"2-core parameters need c > 1, got c={c!r}")

    lam2 = _bisect(lambda lam: _mean_of_positive_poisson(lam) - c, 0.0, float(c))
    numerator = -math.log1p(-_ratio_sinh(lam2) ** 4)
    denominator = -math.log1p(-_ratio_expm1(lam2) ** 4)
    # prob = ((1 - x^4) / (1 - y^4))^(1/4), evaluated in log space
    log_prob = 0.25 * (denominator - numerator)
    prob = math.exp(log_prob)
    return TwoCoreParams(c=c, lambda2=lam2, nonsingular_prob=prob, mu=-log_prob)


# =============================================================================
# Truncated Poisson
# =============================================================================

def truncated_mean(lam: float) -> float:
    """E[Z | Z >= 2] for Z ~ Poisson(lam)"""
    if lam == 0:
        return 2.0
    # P(Z >= k) is the regularised lower incomplete gamma P(k, lam)
    return lam * special.gammainc(1, lam) / special.gammainc(2, lam)


def truncated_poisson_stats(lam: float, t_max: Optional[int] = None) -> TruncatedPoissonStats:
    """
    Statistics of Poisson(lam) conditioned on being at least 2.

    ``rho[t] = P(Z = t | Z >= 2)`` for t = 2..t_max, the mass beyond t_max in
    ``tail_mass``, ``e2 = E[C(Z, 2) | Z >= 2]``.
    """
    if not lam > 0:
        raise NonPositiveLambda(f"truncated Poisson needs lam > 0, got {lam!r}")
    if t_max is None:
        t_max = ExperimentSchema.default('rho_t_max')

    at_least_two = special.gammainc(2, lam)
    ts = np.arange(2, t_max + 1)
    rho_values = stats.poisson.pmf(ts, lam) / at_least_two
    factorial_moment2 = lam ** 2 / at_least_two

    return TruncatedPoissonStats(
        lam=lam,
        mean=truncated_mean(lam),
        rho={int(t): float(r) for t, r in zip(ts, rho_values)},
        tail_mass=max(0.0, 1.0 - float(rho_values.sum())),
        e2=factorial_moment2 / 2.0,
        factorial_moment2=factorial_moment2,
    )


def truncated_poisson_from_mean(alpha: float, t_max: Optional[int] = None) -> TruncatedPoissonStats:
    """
    Calibrate lam so that E[Z | Z >= 2] = alpha and return the statistics.

    The conditional mean increases from 2 (lam -> 0) to infinity, and exceeds
    lam, so the root is bracketed by (0, alpha].

    Raises
    ------
    OutOfRange
        If alpha is not above 2 (by more than the guard band)
    """
    if not alpha - 2.0 >= ExperimentSchema.default('critical_guard'):
        raise OutOfRange(f"truncated mean must exceed 2, got {alpha!r}")
    lam = _bisect(lambda x: truncated_mean(x) - alpha, 1e-12, float(alpha))
    return truncated_poisson_stats(lam, t_max)


def degree_sequence_diagnostic(degrees: Sequence[int], lam: float, t_max: int = 8) -> pd.DataFrame:
    """
    Compare the empirical degree fractions with rho_t = P(Z = t | Z >= 2).

    Returns a DataFrame with columns ``t``, ``empirical``, ``rho`` and
    ``abs_diff`` for t = 2..t_max.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    total = max(degrees.size, 1)
    counts = np.bincount(degrees, minlength=t_max + 1)
    rho = truncated_poisson_stats(lam, t_max).rho
    rows = []
    for t in range(2, t_max + 1):
        empirical = counts[t] / total
        rows.append({'t': t, 'empirical': empirical, 'rho': rho[t], 'abs_diff': abs(empirical - rho[t])})
    return pd.DataFrame(rows)


# =============================================================================
# Series identities and configuration-model diagnostics
# =============================================================================

def sum_formula_series_a(lam: float, q: float = 1.0, terms: int = 60) -> float:
    """
    Partial sum over k = 1..terms of
    (1/4k) * (2 Q^2 P(Z=2|Z>=2) E[Z(Z-1)|Z>=2])^(2k) / E[Z|Z>=2]^(4k).
    """
    st = truncated_poisson_stats(lam, t_max=2)
    base = (2.0 * q ** 2 * st.p_two * st.factorial_moment2) ** 2 / st.mean ** 4
    k = np.arange(1, terms + 1, dtype=float)
    return float(np.sum(base ** k / (4.0 * k)))


def sum_formula_closed_a(lam: float, q: float = 1.0) -> float:
    return -0.25 * math.log1p(-(q * _ratio_sinh(lam)) ** 4)


def sum_formula_series_b(lam: float, q: float = 1.0, terms: int = 60) -> float:
    """Partial sum over k = 1..terms of (1/8k) * (2 Q P(Z=2|Z>=2) / E[Z|Z>=2])^(4k)."""
    st = truncated_poisson_stats(lam, t_max=2)
    base = (2.0 * q * st.p_two / st.mean) ** 4
    k = np.arange(1, terms + 1, dtype=float)
    return float(np.sum(base ** k / (8.0 * k)))


def sum_formula_closed_b(lam: float, q: float = 1.0) -> float:
    return -0.125 * math.log1p(-(q * _ratio_expm1(lam)) ** 4)


def loop_and_double_edge_means(lam: float) -> Tuple[float, float]:
    """
    Poisson means of loops and double edges in the configuration model with
    truncated-Poisson(lam) degrees.
    """
    st = truncated_poisson_stats(lam, t_max=2)
    eta1 = 0.5 * st.factorial_moment2 / st.mean
    return eta1, eta1 ** 2


def simplicity_probability(lam: float) -> float:
    """Limiting probability that the configuration model is simple"""
    eta1, eta2 = loop_and_double_edge_means(lam)
    return math.exp(-eta1 - eta2)


def analytic_summary(
    c: float,
    include_two_core: bool = False,
    trunc_mean: Optional[float] = None,
) -> Dict:
    """All constants that apply at density c, as a JSON-ready dict"""
    summary: Dict = {'c': c}

    if is_critical(c):
        summary['regime'] = 'critical'
    else:
        params = corank_distribution_params(c)
        summary.update({
            'regime': params.regime,
            'eta': params.eta,
            'alpha_lo': params.alpha_lo,
            'alpha_hi': params.alpha_hi,
            'lambda_ks': params.lambda_ks,
            'gamma_B': params.gamma_B,
            'gamma_A': params.gamma_A,
            'gamma_A_dagger': params.gamma_A_dagger,
            'mean_defect_A': params.mean_defect_A,
        })
        if params.regime == 'subcritical':
            summary['cycle_means'] = subcritical_cycle_means(c, 12)

    if include_two_core:
        tc = two_core_params(c)
        summary['two_core'] = {
            'lambda2': tc.lambda2,
            'nonsingular_prob': tc.nonsingular_prob,
            'mu': tc.mu,
        }

    if trunc_mean is not None:
        st = truncated_poisson_from_mean(trunc_mean)
        g, g_dagger = gamma_pair(st.lam)
        summary['truncated_poisson'] = {
            'alpha': trunc_mean,
            'lambda': st.lam,
            'mean': st.mean,
            'e2': st.e2,
            'rho': {t: st.rho[t] for t in range(2, 11)},
            'tail_mass': st.tail_mass,
            'gamma': g,
            'gamma_dagger': g_dagger,
            'simplicity_probability': simplicity_probability(st.lam),
        }

    return summary
