from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging

from django.db import transaction

from .choices import Family, Measure, Sampler
from .conf import get_optimizer_config, get_threads, get_tolerances
from .exceptions import AnalyticMismatch, MonogamyViolation, OutOfRangeError
from .models import MonogamySample, MonteCarloRun, SweepPoint, SweepRun
from .monogamy import ANALYTIC_FAMILIES, capability_residual, negativity_residual, sweep_grid
from .quantum_states import canonical_qutrit_sample, haar_random_state

logger = logging.getLogger(__name__)

QUTRITS = (3, 3, 3)


@dataclass(frozen=True)
class RunSummary:
    n: int
    min_residual: float
    violations: int
    sampler: str
    base_seed: int
    measure: str


@dataclass(frozen=True)
class MonteCarloResult:
    records: tuple
    summary: RunSummary


def draw_state(sampler, seed):
    """The three-qutrit state sample ``seed`` of ``sampler`` would produce."""
    if sampler == Sampler.HAAR:
        return haar_random_state(QUTRITS, seed)
    if sampler == Sampler.CANONICAL:
        return canonical_qutrit_sample(seed)
    raise OutOfRangeError(f"sampler must be 'haar' or 'canonical', got {sampler!r}")


class MonteCarloRunner:
    """Evaluates monogamy residuals of sampled three-qutrit states on a worker pool.

    Sample ``i`` uses seed ``base_seed + i``, so the records do not depend on
    the number of workers or on scheduling.
    """

    def __init__(self, sampler=Sampler.HAAR, base_seed=0, measure=Measure.NEGATIVITY,
                 threads=None, strict=True, optimizer=None, tolerances=None):
        if sampler not in (Sampler.HAAR, Sampler.CANONICAL):
            raise OutOfRangeError(f"sampler must be 'haar' or 'canonical', got {sampler!r}")
        if measure not in (Measure.NEGATIVITY, Measure.CAPABILITY):
            raise OutOfRangeError(f"measure must be 'negativity' or 'capability', got {measure!r}")
        self.sampler = Sampler(sampler)
        self.base_seed = int(base_seed)
        self.measure = Measure(measure)
        self.threads = threads or get_threads()
        self.strict = strict
        self.optimizer = optimizer or get_optimizer_config()
        self.tolerances = tolerances or get_tolerances()

    def evaluate(self, sample_id):
        seed = self.base_seed + sample_id
        psi = draw_state(self.sampler, seed)
        if self.measure == Measure.CAPABILITY:
            return capability_residual(psi, 0, self.optimizer, sample_id, self.sampler, seed)
        return negativity_residual(psi, 0, sample_id, self.sampler, seed)

    def run(self, n):
        if n < 1:
            raise OutOfRangeError(f"n must be at least 1, got {n}")
        logger.info(f"Monte Carlo: {n} {self.sampler} samples, seed {self.base_seed}, "
                    f"measure {self.measure}, {self.threads} threads")
        try:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                records = tuple(pool.map(self.evaluate, range(n)))
        except Exception as e:
            logger.error(f"Monte Carlo run failed: {str(e)}")
            raise

        violating = [r for r in records if r.is_violation(self.tolerances.violation)]
        summary = RunSummary(
            n=n,
            min_residual=min(r.residual for r in records),
            violations=len(violating),
            sampler=self.sampler,
            base_seed=self.base_seed,
            measure=self.measure,
        )
        if violating:
            logger.error(f"{len(violating)} of {n} samples violate monogamy "
                         f"(min residual {summary.min_residual:.3e})")
            if self.strict:
                first = violating[0]
                raise MonogamyViolation(first, draw_state(self.sampler, first.seed))
        logger.info(f"Monte Carlo finished: min residual {summary.min_residual:.6e}")
        return MonteCarloResult(records=records, summary=summary)


def run_monte_carlo(n, sampler=Sampler.HAAR, base_seed=0, **kwargs):
    return MonteCarloRunner(sampler=sampler, base_seed=base_seed, **kwargs).run(n)


class SweepRunner:
    """Compares the closed-form residual of a state family with the numeric one on a p-grid."""

    def __init__(self, family, points=101, tolerance=None):
        if family not in ANALYTIC_FAMILIES:
            raise OutOfRangeError(f"family must be one of {', '.join(ANALYTIC_FAMILIES)}, got {family!r}")
        self.family = Family(family)
        self.points = int(points)
        self.tolerance = get_tolerances().report if tolerance is None else tolerance

    def run(self):
        evaluate = ANALYTIC_FAMILIES[self.family]
        rows = [evaluate(p) for p in sweep_grid(self.points, self.family)]
        bad = [r for r in rows if r.deviation > self.tolerance]
        if bad:
            logger.error(f"{self.family} sweep: {len(bad)} points off the closed form")
            raise AnalyticMismatch(self.family, bad, self.tolerance)
        logger.info(f"{self.family} sweep finished: {len(rows)} points, "
                    f"max deviation {max(r.deviation for r in rows):.3e}")
        return rows


def archive_monte_carlo(result, eigensolver):
    """Store a finished Monte-Carlo run and its samples; returns the run row."""
    summary = result.summary
    try:
        with transaction.atomic():
            run = MonteCarloRun.objects.create(
                sampler=summary.sampler,
                measure=summary.measure,
                base_seed=summary.base_seed,
                n=summary.n,
                min_residual=summary.min_residual,
                violations=summary.violations,
                eigensolver=eigensolver,
            )
            MonogamySample.objects.bulk_create([
                MonogamySample(
                    run=run,
                    sample_id=r.sample_id,
                    seed=r.seed,
                    n_ab=r.n_ab,
                    n_ac=r.n_ac,
                    n_a_bc=r.n_a_bc,
                    lhs=r.lhs,
                    residual=r.residual,
                )
                for r in result.records
            ])
    except Exception as e:
        logger.error(f"Error archiving Monte Carlo run: {str(e)}")
        raise
    logger.info(f"Archived Monte Carlo run {run.pk} with {summary.n} samples")
    return run


def archive_sweep(family, rows):
    try:
        with transaction.atomic():
            run = SweepRun.objects.create(
                family=family,
                points=len(rows),
                max_deviation=max(r.deviation for r in rows),
            )
            SweepPoint.objects.bulk_create([
                SweepPoint(
                    run=run,
                    p=r.p,
                    analytic_residual=r.analytic_residual,
                    numeric_residual=r.numeric_residual,
                    branch=r.branch,
                )
                for r in rows
            ])
    except Exception as e:
        logger.error(f"Error archiving {family} sweep: {str(e)}")
        raise
    logger.info(f"Archived {family} sweep {run.pk} with {len(rows)} points")
    return run
