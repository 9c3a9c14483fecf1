"""Self-verification battery run by ``manage.py verify``.

Each check returns a :class:`CheckResult` with the worst deviation it saw
and the threshold it was held to.  A check that raises is reported as failed
with the error message; the battery itself never raises.
"""
from dataclasses import dataclass, replace
import logging
import math

import numpy as np

from .choices import Branch, Family, Sampler
from .conf import get_optimizer_config, get_tolerances
from .measures import (
    entangled_overlap,
    fidelity_from_fraction,
    fully_entangled_fraction,
    negativity,
    teleportation_capability,
    wootters_concurrence,
)
from .monogamy import (
    BRANCH_POINT,
    capability_residual,
    ckw_residual,
    negativity_residual,
    oup_residual,
)
from .quantum_states import (
    basis_state,
    canonical_qutrit_sample,
    density_from_state,
    haar_random_state,
    marginal,
    named_state,
    partial_transpose,
    random_mixed,
)
from .runner import SweepRunner, run_monte_carlo
from .teleportation import mc_teleportation_fidelity
from .tensor_core import hermitian_eig, trace_norm_hermitian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    worst: float
    threshold: float
    cases: int
    detail: str = ''
    name: str = ''


@dataclass(frozen=True)
class BatterySizes:
    eigen_matrices: int
    pure_pairs: int
    mixed_pairs: int
    ckw_states: int
    qubit_pairs: int
    capability_states: int
    teleport_resources: int
    teleport_inputs: int
    sweep_points: int
    mc_samples: int


FULL = BatterySizes(
    eigen_matrices=20, pure_pairs=200, mixed_pairs=200, ckw_states=200, qubit_pairs=50,
    capability_states=5, teleport_resources=20, teleport_inputs=10000, sweep_points=101,
    mc_samples=10000,
)
QUICK = BatterySizes(
    eigen_matrices=5, pure_pairs=20, mixed_pairs=20, ckw_states=50, qubit_pairs=10,
    capability_states=2, teleport_resources=3, teleport_inputs=4000, sweep_points=21,
    mc_samples=200,
)


def _result(worst, threshold, cases, detail='', upper=True):
    """``upper``: pass when worst <= threshold; otherwise pass when worst >= threshold."""
    passed = worst <= threshold if upper else worst >= threshold
    return CheckResult(bool(passed), float(worst), float(threshold), int(cases), detail)


def standard_score(estimate, expected, atol):
    """|estimate - expected| in standard errors of a Monte-Carlo ``estimate``.

    A noiseless estimate (stderr at most ``atol``, e.g. over a maximally
    entangled resource) scores 0 when it matches within ``atol`` and infinity
    otherwise.
    """
    deviation = abs(estimate.value - expected)
    if estimate.stderr > atol:
        return deviation / estimate.stderr
    return 0.0 if deviation <= atol else math.inf


class VerificationSuite:
    def __init__(self, quick=False, seed=0, optimizer=None):
        self.sizes = QUICK if quick else FULL
        self.seed = int(seed)
        self.optimizer = optimizer or get_optimizer_config()
        self.tol = get_tolerances()

    def checks(self):
        return [
            ('eigensolver reconstruction', self.check_eigensolver),
            ('Bell partial transpose', self.check_bell_partial_transpose),
            ('named-state negativities', self.check_named_states),
            ('marginal spectra', self.check_marginal_spectra),
            ('Ou_p sweep', lambda: self.check_sweep(Family.OU_P)),
            ('KS_p sweep', lambda: self.check_sweep(Family.KS_P)),
            ('Ou_p branch continuity', self.check_branch_continuity),
            ('N = T on pure states', self.check_pure_negativity_equals_capability),
            ('N >= T on mixed states', self.check_mixed_negativity_bounds_capability),
            ('CKW on three qubits', self.check_ckw),
            ('CKW fixtures GHZ/W', self.check_ckw_fixtures),
            ('qubit C = T pure, C >= T mixed', self.check_qubit_concurrence),
            ('capability residual >= negativity residual', self.check_capability_residual),
            ('teleportation channel oracle', self.check_teleportation_channel),
            ('teleportation fixtures', self.check_teleportation_fixtures),
            ('Monte Carlo monogamy (haar)', lambda: self.check_monte_carlo(Sampler.HAAR)),
            ('Monte Carlo monogamy (canonical)', lambda: self.check_monte_carlo(Sampler.CANONICAL)),
        ]

    def run(self):
        results = []
        for name, check in self.checks():
            try:
                results.append(replace(check(), name=name))
            except Exception as e:
                logger.error(f"Check '{name}' raised: {str(e)}")
                results.append(CheckResult(False, math.nan, math.nan, 0, f"{type(e).__name__}: {e}", name))
        failed = [r.name for r in results if not r.passed]
        if failed:
            logger.warning(f"{len(failed)} verification checks failed: {', '.join(failed)}")
        return results

    def _rng(self, offset=0):
        return np.random.default_rng(self.seed + offset)

    def check_eigensolver(self):
        worst = 0.0
        for i in range(self.sizes.eigen_matrices):
            rng = self._rng(i)
            n = 27 if i % 2 == 0 else int(rng.integers(2, 27))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            h = 0.5 * (a + a.conj().T)
            eig = hermitian_eig(h)
            v = eig.eigenvectors
            reconstruction = np.linalg.norm(eig.reconstruct() - h) / np.linalg.norm(h)
            orthonormality = np.max(np.abs(v.conj().T @ v - np.eye(n)))
            worst = max(worst, reconstruction, orthonormality)
        return _result(worst, self.tol.eigen_residual, self.sizes.eigen_matrices)

    def check_bell_partial_transpose(self):
        rho = density_from_state(named_state('MaxEnt', d=2))
        flipped = partial_transpose(rho, 1)
        norm = trace_norm_hermitian(flipped)
        lowest = hermitian_eig(flipped).eigenvalues[0]
        worst = max(abs(norm - 2.0), abs(lowest + 0.5))
        return _result(worst, self.tol.hermiticity, 1, f"trace norm {norm:.12g}")

    def check_named_states(self):
        expected = {
            'Ou': (1.0, 1.0 / 3.0, 1.0 / 3.0, 7.0 / 9.0),
            'KS': (1.0, 1.0 / 3.0, 1.0 / 3.0, 7.0 / 9.0),
            'GHZ3': (1.0, 0.0, 0.0, 1.0),
        }
        worst = 0.0
        for name, values in expected.items():
            r = negativity_residual(named_state(name))
            worst = max(worst, *(abs(a - b) for a, b in zip((r.n_a_bc, r.n_ab, r.n_ac, r.residual), values)))
        return _result(worst, self.tol.report, len(expected))

    def check_marginal_spectra(self):
        worst, cases = 0.0, 0
        for p in np.linspace(0.0, 1.0, 11):
            ou, ks = named_state('Ou_p', p), named_state('KS_p', p)
            for pair in ([0, 1], [0, 2], [1, 2]):
                got = np.sort(marginal(ou, pair).spectrum())
                want = np.sort([p / 3, p / 3, 1 - 2 * p / 3] + [0.0] * 6)
                worst = max(worst, float(np.max(np.abs(got - want))))
                cases += 1
            for pair in ([0, 1], [0, 2]):
                got = np.sort(marginal(ks, pair).spectrum())
                want = np.sort([p / 2, p / 2, 1 - p] + [0.0] * 6)
                worst = max(worst, float(np.max(np.abs(got - want))))
                cases += 1
            for psi, anchor in ((ou, 0), (ks, 2)):
                want = p / 3 * np.eye(3)
                want[anchor, anchor] += 1 - p
                worst = max(worst, float(np.max(np.abs(marginal(psi, [0]).matrix - want))))
                cases += 1
        return _result(worst, self.tol.hermiticity, cases)

    def check_sweep(self, family):
        rows = SweepRunner(family, self.sizes.sweep_points).run()
        worst = max(r.deviation for r in rows)
        lowest = min(min(r.analytic_residual, r.numeric_residual) for r in rows)
        passed = worst <= self.tol.report and lowest >= -1e-12
        return CheckResult(passed, worst, self.tol.report, len(rows), f"lowest residual {lowest:.3e}")

    def check_branch_continuity(self):
        gap = abs(oup_residual(BRANCH_POINT, Branch.LOW) - oup_residual(BRANCH_POINT, Branch.HIGH))
        return _result(gap, 1e-12, 1)

    def check_pure_negativity_equals_capability(self):
        worst = 0.0
        for i in range(self.sizes.pure_pairs):
            rho = density_from_state(haar_random_state((3, 3), self.seed + i))
            worst = max(worst, abs(teleportation_capability(rho, self.optimizer).value - negativity(rho).value))
        return _result(worst, 1e-5, self.sizes.pure_pairs)

    def check_mixed_negativity_bounds_capability(self):
        lowest = math.inf
        for i in range(self.sizes.mixed_pairs):
            rho = random_mixed((3, 3), 1 + i % 9, self.seed + i)
            lowest = min(lowest, negativity(rho).value - teleportation_capability(rho, self.optimizer).value)
        return _result(lowest, -1e-6, self.sizes.mixed_pairs, upper=False)

    def check_ckw(self):
        lowest = math.inf
        for i in range(self.sizes.ckw_states):
            record = ckw_residual(haar_random_state((2, 2, 2), self.seed + i), sample_id=i,
                                  sampler=Sampler.HAAR, seed=self.seed + i)
            lowest = min(lowest, record.residual)
        return _result(lowest, -self.tol.violation, self.sizes.ckw_states, upper=False)

    def check_ckw_fixtures(self):
        ghz = ckw_residual(named_state('GHZ3', d=2))
        w = ckw_residual(named_state('W3', d=2))
        worst = max(abs(ghz.residual - 1.0), abs(w.residual))
        return _result(worst, self.tol.report, 2, f"GHZ {ghz.residual:.12g}, W {w.residual:.12g}")

    def check_qubit_concurrence(self):
        worst = 0.0
        for i in range(self.sizes.qubit_pairs):
            pure = density_from_state(haar_random_state((2, 2), self.seed + i))
            gap = abs(wootters_concurrence(pure).value - teleportation_capability(pure, self.optimizer).value)
            mixed = random_mixed((2, 2), 1 + i % 4, self.seed + i)
            shortfall = teleportation_capability(mixed, self.optimizer).value - wootters_concurrence(mixed).value
            worst = max(worst, gap, shortfall)
        return _result(worst, 1e-5, 2 * self.sizes.qubit_pairs)

    def check_capability_residual(self):
        lowest = math.inf
        for i in range(self.sizes.capability_states):
            psi = canonical_qutrit_sample(self.seed + i)
            gap = (capability_residual(psi, cfg=self.optimizer).residual
                   - negativity_residual(psi).residual)
            lowest = min(lowest, gap)
        return _result(lowest, -1e-6, self.sizes.capability_states, upper=False)

    def check_teleportation_channel(self):
        """Largest distance between the channel estimate and (F d + 1)/(d + 1), in standard errors."""
        inputs = self.sizes.teleport_inputs
        worst = 0.0
        for i in range(self.sizes.teleport_resources):
            rho = density_from_state(haar_random_state((3, 3), self.seed + i))
            fef = fully_entangled_fraction(rho, self.optimizer)
            expected = fidelity_from_fraction(entangled_overlap(rho.matrix, fef.unitary), 3)
            mc = mc_teleportation_fidelity(rho, fef.unitary, inputs, self.seed + i)
            worst = max(worst, standard_score(mc, expected, self.tol.report))
        return _result(worst, 4.0, self.sizes.teleport_resources)

    def check_teleportation_fixtures(self):
        """Product resource at the classical 2/(d + 1) within 3 standard errors; MaxEnt is perfect."""
        inputs = self.sizes.teleport_inputs
        identity = np.eye(3)
        product = mc_teleportation_fidelity(density_from_state(basis_state((3, 3), (0, 0))), identity,
                                            inputs, self.seed)
        perfect = mc_teleportation_fidelity(density_from_state(named_state('MaxEnt', d=3)), identity,
                                            inputs, self.seed)
        z = standard_score(product, 0.5, self.tol.report)
        passed = z <= 3.0 and abs(perfect.value - 1.0) <= 1e-12
        return CheckResult(passed, z, 3.0, 2, f"product {product.value:.6f}, MaxEnt {perfect.value:.12g}")

    def check_monte_carlo(self, sampler):
        result = run_monte_carlo(self.sizes.mc_samples, sampler, self.seed, strict=False)
        summary = result.summary
        passed = summary.violations == 0
        return CheckResult(passed, summary.min_residual, -self.tol.violation, summary.n,
                           f"{summary.violations} violations")


def run_battery(quick=False, seed=0, optimizer=None):
    return VerificationSuite(quick=quick, seed=seed, optimizer=optimizer).run()
