"""
Poisson goodness of fit for defect and corank samples

Compares integer samples with Poisson(mu), or with the law of Y + 2Y' for
independent Poisson Y and Y', by a pooled chi-square test and a z-score on
the sample mean.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .core import EmptyInput, ExperimentSchema, OutOfRange


@dataclass
class GofReport:
    """
    Pooled chi-square comparison of observed counts against a Poisson-type law.

    ``cells`` lists ``(first value, last value or None for an open tail,
    observed, expected)`` after pooling.
    """
    observed: Dict[int, int]
    trials: int
    means: Tuple[float, ...]
    mean_observed: float
    mean_expected: float
    statistic: float
    dof: int
    p_value: float
    z_score: float
    cells: List[Tuple[int, Optional[int], int, float]] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            'observed': {str(k): v for k, v in self.observed.items()},
            'trials': self.trials,
            'means': list(self.means),
            'mean_observed': self.mean_observed,
            'mean_expected': self.mean_expected,
            'chi_square': self.statistic,
            'dof': self.dof,
            'p_value': self.p_value,
            'z_score': self.z_score,
            'cells': [list(c) for c in self.cells],
        }


def _poisson_pmf(mu: float, tail: float) -> np.ndarray:
    if mu == 0:
        return np.array([1.0])
    top = int(stats.poisson.isf(tail, mu)) + 1
    return stats.poisson.pmf(np.arange(top + 1), mu)


def compound_pmf(mean_y: float, mean_y_dagger: float, tail: Optional[float] = None) -> np.ndarray:
    """
    pmf of Y + 2Y' for independent Y ~ Poisson(mean_y), Y' ~ Poisson(mean_y_dagger),
    truncated where the remaining mass of each factor drops below ``tail``.
    """
    if tail is None:
        tail = ExperimentSchema.default('pmf_tail_mass')
    py = _poisson_pmf(mean_y, tail)
    pd_ = _poisson_pmf(mean_y_dagger, tail)
    # Y' contributes only even shifts
    spread = np.zeros(2 * (pd_.size - 1) + 1)
    spread[::2] = pd_
    return np.convolve(py, spread)


def _pool(cells: List[List]) -> List[List]:
    threshold = ExperimentSchema.default('min_expected_count')
    while len(cells) > 1 and cells[-1][3] < threshold:
        last = cells.pop()
        cells[-1][1] = last[1]
        cells[-1][2] += last[2]
        cells[-1][3] += last[3]
    while len(cells) > 1 and cells[0][3] < threshold:
        first = cells.pop(0)
        cells[0][0] = first[0]
        cells[0][2] += first[2]
        cells[0][3] += first[3]
    return cells


def poisson_gof(
    values: Sequence[int],
    mu: Optional[float] = None,
    compound: Optional[Tuple[float, float]] = None,
) -> GofReport:
    """
    Chi-square goodness of fit of integer samples against a Poisson law.

    Parameters
    ----------
    values : sequence of int
        Non-negative integer samples
    mu : float, optional
        Mean of the plain Poisson law
    compound : (mean_y, mean_y_dagger), optional
        Use the law of Y + 2Y' instead

    Returns
    -------
    GofReport
        Cells are pooled from the upper tail down (and from 0 up) until every
        expected count is at least 5. The z-score compares the sample mean
        with the theoretical mean using the theoretical variance.

    Raises
    ------
    EmptyInput
        If no values are given
    """
    data = np.asarray(list(values), dtype=np.int64)
    if data.size == 0:
        raise EmptyInput("goodness of fit needs at least one value")
    if compound is None and mu is None:
        raise ValueError("either mu or compound must be given")

    if compound is not None:
        mean_y, mean_y_dagger = (float(x) for x in compound)
        if mean_y < 0 or mean_y_dagger < 0:
            raise OutOfRange(f"Poisson means must be non-negative, got {compound}")
        pmf = compound_pmf(mean_y, mean_y_dagger)
        means: Tuple[float, ...] = (mean_y, mean_y_dagger)
        mean_expected = mean_y + 2.0 * mean_y_dagger
        variance = mean_y + 4.0 * mean_y_dagger
    else:
        mu = float(mu)
        if mu < 0:
            raise OutOfRange(f"Poisson mean must be non-negative, got {mu}")
        pmf = _poisson_pmf(mu, ExperimentSchema.default('pmf_tail_mass'))
        means = (mu,)
        mean_expected = variance = mu

    trials = int(data.size)
    counts = np.bincount(data)
    observed = {int(k): int(c) for k, c in enumerate(counts) if c}

    top = max(int(data.max()), pmf.size - 1)
    cells = []
    for k in range(top + 1):
        expected = trials * (pmf[k] if k < pmf.size else 0.0)
        cells.append([k, k, int(counts[k]) if k < counts.size else 0, expected])
    # the last cell is an open tail carrying all remaining mass
    cells[-1][1] = None
    cells[-1][3] = trials * max(0.0, 1.0 - float(pmf[:top].sum()))
    cells = _pool(cells)

    statistic = 0.0
    for _, _, obs, exp in cells:
        if exp > 0:
            statistic += (obs - exp) ** 2 / exp
        elif obs > 0:
            statistic = math.inf
    dof = len(cells) - 1
    p_value = float(stats.chi2.sf(statistic, dof)) if dof > 0 else 1.0

    mean_observed = float(data.mean())
    if variance > 0:
        z_score = (mean_observed - mean_expected) / math.sqrt(variance / trials)
    else:
        z_score = 0.0 if mean_observed == mean_expected else math.inf

    return GofReport(
        observed=observed,
        trials=trials,
        means=means,
        mean_observed=mean_observed,
        mean_expected=mean_expected,
        statistic=float(statistic),
        dof=dof,
        p_value=p_value,
        z_score=float(z_score),
        cells=[tuple(c) for c in cells],
    )
