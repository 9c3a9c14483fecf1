"""Lab configuration records built from Django settings.

Every tolerance and optimizer default lives in ``settings.LAB_TOLERANCES`` and
``settings.LAB_OPTIMIZER``; commands and tests read them through
:func:`get_tolerances` and :func:`get_optimizer_config` and may override
single fields with :func:`dataclasses.replace`.
"""
from dataclasses import dataclass, fields

from django.conf import settings

EIGENSOLVERS = ('jacobi', 'lapack')


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-10
    eigen_residual: float = 1e-9
    trace: float = 1e-10
    positivity: float = 1e-9
    normalization: float = 1e-12
    clamp: float = 1e-12
    violation: float = 1e-9
    report: float = 1e-9
    eigen_convergence: float = 1e-12
    eigen_max_sweeps: int = 100


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the fully-entangled-fraction search.

    ``step_size`` scales the initial inverse Hessian of the quasi-Newton
    ascent, so the first move of every restart is a plain gradient step of
    that length.  A restart within ``ceiling_tolerance`` of the spectral upper
    bound ends the search.
    """
    restarts: int = 8
    max_iterations: int = 500
    step_size: float = 0.1
    gradient_tolerance: float = 1e-8
    ceiling_tolerance: float = 1e-9
    eigensolver: str = 'lapack'
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if self.step_size <= 0 or self.gradient_tolerance <= 0 or self.ceiling_tolerance < 0:
            raise ValueError("step_size and gradient_tolerance must be positive, ceiling_tolerance non-negative")
        if self.eigensolver not in EIGENSOLVERS:
            raise ValueError(f"unknown eigensolver {self.eigensolver!r}")


def _from_mapping(cls, mapping):
    known = {f.name for f in fields(cls)}
    return cls(**{k: v for k, v in (mapping or {}).items() if k in known})


def get_tolerances():
    return _from_mapping(Tolerances, getattr(settings, 'LAB_TOLERANCES', None))


def get_optimizer_config(**overrides):
    base = dict(getattr(settings, 'LAB_OPTIMIZER', None) or {})
    base.update({k: v for k, v in overrides.items() if v is not None})
    return _from_mapping(OptimizerConfig, base)


def get_eigensolver():
    method = getattr(settings, 'LAB_EIGENSOLVER', 'jacobi')
    if method not in EIGENSOLVERS:
        raise ValueError(f"LAB_EIGENSOLVER must be one of {EIGENSOLVERS}, got {method!r}")
    return method


def get_max_dimension():
    return getattr(settings, 'LAB_MAX_DIMENSION', 1024)


def get_threads():
    return max(1, int(getattr(settings, 'LAB_THREADS', 1)))


def get_rejection_budget():
    return int(getattr(settings, 'LAB_REJECTION_BUDGET', 10000))
