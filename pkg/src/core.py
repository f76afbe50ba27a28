"""
Core base classes, errors and configuration tables for the sparse-graph rank toolkit

Everything the algorithmic modules share lives here: the BaseProcessor pattern
(named logger + keyword parameters), the exception hierarchy, reproducible
per-trial seed derivation and the experiment schema with its defaults.
"""

import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple


# =============================================================================
# Errors
# =============================================================================

class KSRankError(Exception):
    """Base class for every error raised by the toolkit."""


class VertexOutOfRange(KSRankError, ValueError):
    pass


class LoopRejected(KSRankError, ValueError):
    pass


class InfeasibleParameters(KSRankError, ValueError):
    pass


class RejectionCapExceeded(KSRankError, RuntimeError):
    pass


class OddDegreeSum(KSRankError, ValueError):
    pass


class NotASpecialCycle(KSRankError, ValueError):
    pass


class NotPrime(KSRankError, ValueError):
    pass


class ExactSizeExceeded(KSRankError, ValueError):
    pass


class CriticalPoint(KSRankError, ValueError):
    pass


class OutOfRange(KSRankError, ValueError):
    pass


class NoSeparation(KSRankError, RuntimeError):
    pass


class NonPositiveLambda(KSRankError, ValueError):
    pass


class EmptyInput(KSRankError, ValueError):
    pass


class EdgeListFormatError(KSRankError, ValueError):
    pass


# =============================================================================
# Processor base
# =============================================================================

class BaseProcessor(ABC):
    """
    Abstract base class for all processors.

    Subclasses receive their tunables as keyword arguments (kept in
    ``self.params``) and log through a logger named after the class.
    """

    def __init__(self, **kwargs):
        self.params = kwargs
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger(self.__class__.__name__)
        if not logger.handlers:
            handler = logging.StreamHandler()
            formatter = logging.Formatter('%(name)s - %(levelname)s - %(message)s')
            handler.setFormatter(formatter)
            logger.addHandler(handler)
            logger.setLevel(logging.INFO)
        return logger

    @abstractmethod
    def process(self, data: Any) -> Any:
        """Main processing method to be implemented by subclasses"""
        pass

    def validate_input(self, data: Any) -> bool:
        """Validate input data format"""
        return True

    def __repr__(self):
        return f"{self.__class__.__name__}({self.params})"


# =============================================================================
# Seeds
# =============================================================================

MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, index: int) -> int:
    """
    Derive the seed of trial ``index`` from a master seed.

    SplitMix64 finaliser applied to ``master + (index + 1) * golden``. The
    mapping is fixed, so a trial's seed never depends on scheduling or on the
    number of workers.
    """
    z = (int(master_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def worker_count() -> int:
    """Worker processes for trial execution (``KSRANK_WORKERS``, default all cores)."""
    raw = os.environ.get('KSRANK_WORKERS')
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logging.getLogger('ksrank').warning(f"Ignoring invalid KSRANK_WORKERS={raw!r}")
    return os.cpu_count() or 1


# =============================================================================
# Configuration
# =============================================================================

class ExperimentSchema:
    """
    Default parameters for every experiment suite and for the numerical kernels.
    """

    DEFAULTS = {
        'rejection_cap': 10_000_000,
        'exact_size_cap': 64,
        'cycle_length_cap': 64,
        'critical_guard': 1e-9,
        'bisect_xtol': 1e-12,
        'bisect_maxiter': 200,
        'fixed_point_tol': 1e-13,
        'fixed_point_maxiter': 100_000,
        'separation_tol': 1e-9,
        'rho_t_max': 64,
        'pmf_tail_mass': 1e-12,
        'min_expected_count': 5.0,
        'csv_schema_version': 1,
    }

    SUITES = {
        'rank-char': {
            'model': 'gnp',
            'n': 1000,
            'c': 4.0,
            'trials': 200,
            'agreement_threshold': 0.95,
        },
        'main-rmt': {
            'model': 'min2',
            'n': 1000,
            'm': 1500,
            'trials': 300,
            'agreement_threshold': 0.95,
        },
        'two-core': {
            'model': 'gnp',
            'n': 1000,
            'c': 3.0,
            'trials': 300,
            'frequency_tolerance': 0.06,
        },
        'matching': {
            'model': 'gnp',
            'n': 1000,
            'c': 4.0,
            'trials': 200,
            'agreement_threshold': 0.95,
        },
        'critical-scan': {
            'model': 'gnp',
            'n': 2000,
            'c_grid': [2.0, 2.5, 2.7],
            'trials': 50,
        },
    }

    MODELS = ('gnp', 'gnm', 'gnnp', 'gnnm', 'min2', 'min2-bip', 'degseq')

    @classmethod
    def get_suite(cls, suite: str) -> Dict:
        """Get the default configuration of a suite"""
        return dict(cls.SUITES.get(suite, {}))

    @classmethod
    def default(cls, key: str) -> Any:
        return cls.DEFAULTS[key]

    @classmethod
    def validate_config(cls, config: Dict) -> Tuple[bool, List[str]]:
        """Validate an experiment configuration against the schema"""
        errors = []

        suite = config.get('suite')
        if suite not in cls.SUITES:
            errors.append(f"Unknown suite: {suite}")

        model = config.get('model')
        if model is not None and model not in cls.MODELS:
            errors.append(f"Unknown model: {model}")

        if int(config.get('trials', 0)) < 1:
            errors.append("trials must be at least 1")

        p = config.get('p')
        if p is not None and not (0.0 <= float(p) <= 1.0):
            errors.append(f"p must lie in [0, 1], got {p}")

        m = config.get('m')
        if m is not None and int(m) < 0:
            errors.append(f"m must be non-negative, got {m}")

        if int(config.get('rejection_cap', cls.DEFAULTS['rejection_cap'])) < 1:
            errors.append("rejection cap must be at least 1")

        return len(errors) == 0, errors

    @classmethod
    def build_config(cls, suite: str, **overrides) -> Dict:
        """Merge suite defaults with explicit overrides (``None`` values are ignored)"""
        config = {'suite': suite, 'seed': 0, 'bipartite': False}
        config.update(cls.get_suite(suite))
        config.update({k: v for k, v in overrides.items() if v is not None})
        return config
