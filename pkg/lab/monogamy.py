"""Monogamy residuals of three-party pure states and the Ou_p / KS_p closed forms.

A residual is ``M_a(bc)^2 - M_ab^2 - M_ac^2`` for the focus party ``a``;
``M`` is the negativity, the teleportation capability or (qubits only) the
concurrence.  The one-versus-rest term is always a pure-state quantity; the
pair terms are evaluated on the two-party marginals.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .choices import Branch, Family, Sampler
from .conf import get_tolerances
from .exceptions import DimensionError, OutOfRangeError
from .measures import (
    negativity,
    pure_concurrence,
    pure_negativity_closed_form,
    teleportation_capability,
    wootters_concurrence,
)
from .quantum_states import Cut, marginal, named_state

logger = logging.getLogger(__name__)

BRANCH_POINT = 6.0 / 7.0


@dataclass(frozen=True)
class MonogamyRecord:
    sample_id: int
    n_ab: float
    n_ac: float
    n_a_bc: float
    lhs: float
    residual: float
    sampler: str
    seed: int

    @classmethod
    def from_terms(cls, n_a_bc, n_ab, n_ac, sample_id=0, sampler=Sampler.NAMED, seed=0):
        tol = get_tolerances()
        for name, value in (('n_a_bc', n_a_bc), ('n_ab', n_ab), ('n_ac', n_ac)):
            if not -tol.violation <= value <= 1.0 + tol.violation:
                raise OutOfRangeError(f"{name} = {value!r} outside [0, 1]")
        return cls(
            sample_id=int(sample_id),
            n_ab=float(n_ab),
            n_ac=float(n_ac),
            n_a_bc=float(n_a_bc),
            lhs=math.hypot(n_ab, n_ac),
            residual=float(n_a_bc ** 2 - n_ab ** 2 - n_ac ** 2),
            sampler=str(sampler),
            seed=int(seed),
        )

    def is_violation(self, threshold=None):
        threshold = get_tolerances().violation if threshold is None else threshold
        return self.residual < -threshold


@dataclass(frozen=True)
class SweepRecord:
    p: float
    analytic_residual: float
    numeric_residual: float
    branch: str
    analytic_n_a_bc: float
    analytic_n_ab: float

    @property
    def deviation(self):
        return abs(self.analytic_residual - self.numeric_residual)


def _pair_partners(psi, focus):
    if psi.n_subsystems != 3:
        raise DimensionError(f"monogamy residuals need three parties, got dims {psi.dims}")
    if not 0 <= int(focus) < 3:
        raise OutOfRangeError(f"focus party {focus} out of range for three parties")
    return int(focus), [j for j in range(3) if j != int(focus)]


def _pair_state(psi, focus, j):
    """Marginal on {focus, j} and the cut that puts the focus party on the left."""
    rho = marginal(psi, [focus, j])
    return rho, Cut.of({0 if focus < j else 1}, 2)


def negativity_residual(psi, focus=0, sample_id=0, sampler=Sampler.NAMED, seed=0):
    """N_a(bc)^2 - N_ab^2 - N_ac^2 with the focus party as ``a``."""
    focus, partners = _pair_partners(psi, focus)
    n_a_bc = pure_negativity_closed_form(psi, Cut.of({focus}, 3))
    pairs = []
    for j in partners:
        rho, cut = _pair_state(psi, focus, j)
        pairs.append(negativity(rho, cut).value)
    return MonogamyRecord.from_terms(n_a_bc, pairs[0], pairs[1], sample_id, sampler, seed)


def capability_residual(psi, focus=0, cfg=None, sample_id=0, sampler=Sampler.NAMED, seed=0):
    """T_a(bc)^2 - T_ab^2 - T_ac^2.

    The a(bc) cut is not a d x d resource, so that term is the pure-state
    negativity, which equals the capability on every two-qudit pure state.
    The pair terms run the fully-entangled-fraction optimizer on the marginals.
    """
    focus, partners = _pair_partners(psi, focus)
    t_a_bc = pure_negativity_closed_form(psi, Cut.of({focus}, 3))
    pairs = []
    for j in partners:
        rho, _ = _pair_state(psi, focus, j)
        pairs.append(teleportation_capability(rho, cfg).value)
    return MonogamyRecord.from_terms(t_a_bc, pairs[0], pairs[1], sample_id, sampler, seed)


def ckw_residual(psi, focus=0, sample_id=0, sampler=Sampler.NAMED, seed=0):
    """C_a(bc)^2 - C_ab^2 - C_ac^2 for three qubits (Wootters concurrence on the pairs)."""
    if psi.dims != (2, 2, 2):
        raise DimensionError(f"the CKW residual needs three qubits, got dims {psi.dims}")
    focus, partners = _pair_partners(psi, focus)
    c_a_bc = pure_concurrence(psi, Cut.of({focus}, 3)).value
    pairs = [wootters_concurrence(marginal(psi, [focus, j])).value for j in partners]
    return MonogamyRecord.from_terms(c_a_bc, pairs[0], pairs[1], sample_id, sampler, seed)


def _check_p(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"p must lie in [0, 1], got {p}")
    return p


def one_vs_rest_negativity(p):
    """N_1(23) of Ou_p and KS_p; both have the single-party spectrum {1 - 2p/3, p/3, p/3}."""
    p = _check_p(p)
    return (p + 2.0 * math.sqrt(p * (3.0 - 2.0 * p))) / 3.0


def oup_branch(p):
    return Branch.LOW if _check_p(p) <= BRANCH_POINT else Branch.HIGH


def oup_pair_negativity(p, branch=None):
    """N_1j of Ou_p.

    Below p = 6/7 the partially transposed marginal has two extra negative
    eigenvalues p/6 - sqrt(p(1 - p)/6); the branches meet at p = 6/7.
    """
    p = _check_p(p)
    branch = branch or oup_branch(p)
    root = math.sqrt(33.0 * p * p - 60.0 * p + 36.0)
    if branch == Branch.LOW:
        return (root + 4.0 * math.sqrt(6.0 * p * (1.0 - p)) + 3.0 * p - 6.0) / 12.0
    return (root + 7.0 * p - 6.0) / 12.0


def ksp_pair_negativity(p):
    """N_1j of KS_p: each of the two blocks {|00>,|21>} and {|11>,|20>} contributes -p/6."""
    return _check_p(p) / 3.0


def oup_residual(p, branch=None):
    n_pair = oup_pair_negativity(p, branch)
    return one_vs_rest_negativity(p) ** 2 - 2.0 * n_pair ** 2


def ksp_residual(p):
    p = _check_p(p)
    return (12.0 * p - 9.0 * p * p + 4.0 * p * math.sqrt(p * (3.0 - 2.0 * p))) / 9.0


def analytic_oup_residual(p):
    p = _check_p(p)
    numeric = negativity_residual(named_state(Family.OU_P, p))
    return SweepRecord(
        p=p,
        analytic_residual=oup_residual(p),
        numeric_residual=numeric.residual,
        branch=oup_branch(p),
        analytic_n_a_bc=one_vs_rest_negativity(p),
        analytic_n_ab=oup_pair_negativity(p),
    )


def analytic_ksp_residual(p):
    p = _check_p(p)
    numeric = negativity_residual(named_state(Family.KS_P, p))
    return SweepRecord(
        p=p,
        analytic_residual=ksp_residual(p),
        numeric_residual=numeric.residual,
        branch=Branch.NOT_APPLICABLE,
        analytic_n_a_bc=one_vs_rest_negativity(p),
        analytic_n_ab=ksp_pair_negativity(p),
    )


ANALYTIC_FAMILIES = {
    Family.OU_P: analytic_oup_residual,
    Family.KS_P: analytic_ksp_residual,
}


def sweep_grid(points, family):
    """``points`` equally spaced values on [0, 1]; Ou_p also gets the branch point 6/7."""
    if points < 2:
        raise OutOfRangeError(f"a sweep needs at least 2 grid points, got {points}")
    grid = np.linspace(0.0, 1.0, int(points))
    if family == Family.OU_P:
        near = np.isclose(grid, BRANCH_POINT, rtol=0.0, atol=1e-12)
        if np.any(near):
            grid[np.argmax(near)] = BRANCH_POINT
        else:
            grid = np.sort(np.append(grid, BRANCH_POINT))
    return [float(p) for p in grid]
