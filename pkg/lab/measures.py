"""Entanglement and teleportation measures of bipartite states.

Negativity is normalized by ``d - 1`` with ``d`` the smaller side of the cut,
so it reaches 1 on maximally entangled states of any ``d x d'`` cut.  The
teleportation measures need a ``d x d`` resource: the fully entangled fraction
F is maximized over local unitaries, then f = (F d + 1)/(d + 1) and
T = max{((d + 1) f - 2)/(d - 1), 0}.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .choices import Method
from .conf import get_optimizer_config, get_tolerances
from .exceptions import DimensionError, OutOfRangeError
from .quantum_states import Cut, partial_transpose, reshape_to_cut
from .tensor_core import (
    hermitian_basis,
    hermitian_eig,
    psd_sqrt,
    singular_values,
    trace_norm_hermitian,
    unitary_from_generator,
)

logger = logging.getLogger(__name__)

PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class MeasureResult:
    name: str
    value: float
    cut: Cut
    method: str
    iterations: int = 0
    stderr: float = 0.0
    unitary: Optional[np.ndarray] = field(default=None, compare=False, repr=False)


def _bounded(value, name, upper=1.0, tol=None):
    """Clamp round-off just outside [0, upper]; anything further out is an error."""
    tol = tol or get_tolerances()
    if -tol.clamp <= value < 0.0:
        return 0.0
    if upper < value <= upper + tol.clamp:
        return upper
    if not 0.0 <= value <= upper:
        logger.error(f"{name} = {value!r} outside [0, {upper}]")
        raise OutOfRangeError(f"{name} = {value!r} lies outside [0, {upper}]")
    return float(value)


def _default_cut(n):
    return Cut.of({0}, n)


def negativity(rho, cut=None, method=None, tol=None):
    """(||rho^T_B|| - 1)/(d - 1) across ``cut``, with d the smaller side."""
    cut = (cut or _default_cut(rho.n_subsystems)).validated(rho.n_subsystems)
    grouped = reshape_to_cut(rho, cut)
    norm = trace_norm_hermitian(partial_transpose(grouped, 1), method=method, tol=tol)
    d = min(grouped.dims)
    value = _bounded((norm - 1.0) / (d - 1), 'negativity', tol=tol)
    return MeasureResult('negativity', value, cut, Method.EXACT)


def schmidt_coefficients(psi, cut=None, method=None, tol=None):
    """Descending Schmidt coefficients of a pure state across ``cut``."""
    cut = (cut or _default_cut(psi.n_subsystems)).validated(psi.n_subsystems)
    grouped = reshape_to_cut(psi, cut)
    return singular_values(grouped.tensor(), method=method, tol=tol)


def _pair_sum(s, power=1):
    """sum_{i<j} (s_i s_j)^power without the cancellation of ((sum s)^2 - 1)."""
    total = 0.0
    for i in range(len(s)):
        total += float(np.sum((s[i] * s[i + 1:]) ** power))
    return total


def pure_negativity_closed_form(psi, cut=None, method=None, tol=None):
    """((sum s_i)^2 - 1)/(d - 1) from the Schmidt coefficients; equals negativity of |psi><psi|."""
    s = schmidt_coefficients(psi, cut, method=method, tol=tol)
    d = len(s)
    return _bounded(2.0 * _pair_sum(s) / (d - 1), 'pure-state negativity', tol=tol)


def pure_concurrence(psi, cut=None, method=None, tol=None):
    """sqrt(2 (1 - tr rho_A^2)) of a bipartite pure state."""
    cut = (cut or _default_cut(psi.n_subsystems)).validated(psi.n_subsystems)
    s = schmidt_coefficients(psi, cut, method=method, tol=tol)
    d = len(s)
    upper = math.sqrt(2.0 * (d - 1) / d)
    value = _bounded(2.0 * math.sqrt(_pair_sum(s, power=2)), 'concurrence', upper=upper, tol=tol)
    return MeasureResult('concurrence', value, cut, Method.CLOSED_FORM)


def wootters_concurrence(rho, method=None, tol=None):
    """max{0, l1 - l2 - l3 - l4} for a two-qubit state.

    The l_i are the singular values of sqrt(rho) (Y x Y) sqrt(rho)^*, read off the
    Hermitian dilation of that product; their squares are the eigenvalues of
    rho (Y x Y) rho^* (Y x Y).
    """
    if rho.dims != (2, 2):
        raise DimensionError(f"Wootters concurrence needs two qubits, got dims {rho.dims}")
    root = psd_sqrt(rho.matrix, method=method, tol=tol)
    yy = np.kron(PAULI_Y, PAULI_Y)
    lam = singular_values(root @ yy @ root.conj(), method=method, tol=tol)
    value = max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
    return MeasureResult('concurrence', _bounded(value, 'concurrence', tol=tol), _default_cut(2), Method.EXACT)


def _square_dimension(rho):
    if rho.n_subsystems != 2 or rho.dims[0] != rho.dims[1]:
        raise DimensionError(f"teleportation needs a d x d bipartite resource, got dims {rho.dims}")
    return rho.dims[0]


def entangled_overlap(rho_matrix, u):
    """<Phi_U|rho|Phi_U> with |Phi_U> = (I x U) sum_k |kk>/sqrt(d)."""
    d = u.shape[0]
    phi = u.T.reshape(-1) / math.sqrt(d)
    return float(np.vdot(phi, rho_matrix @ phi).real)


def _overlap_with_gradient(theta, rho_matrix, basis, start, method=None, tol=None):
    """Overlap at U = exp(iH) U_0 with H = sum_a theta_a G_a, its gradient in theta, and U.

    In the eigenbasis H = V diag(w) V^dagger the derivative of exp(iH) along G_a
    is V (Gamma o V^dagger G_a V) V^dagger, where Gamma holds the divided
    differences (e^{i w_j} - e^{i w_k})/(w_j - w_k) = i e^{i(w_j + w_k)/2} sinc((w_j - w_k)/2).
    """
    d = start.shape[0]
    eig = hermitian_eig(np.tensordot(theta, basis, axes=1), method=method, tol=tol)
    w, v = eig.eigenvalues, eig.eigenvectors
    vh = v.conj().T
    u = (v * np.exp(1j * w)) @ vh @ start
    mid = 0.5 * (w[:, None] + w[None, :])
    gap = 0.5 * (w[:, None] - w[None, :])
    gamma = 1j * np.exp(1j * mid) * np.sinc(gap / np.pi)
    du = v @ (gamma * (vh @ basis @ v)) @ vh @ start
    phi = u.T.reshape(-1) / math.sqrt(d)
    dphi = du.transpose(0, 2, 1).reshape(basis.shape[0], -1) / math.sqrt(d)
    pulled = rho_matrix @ phi
    value = float(np.vdot(phi, pulled).real)
    gradient = 2.0 * (dphi @ pulled.conj()).real
    return value, gradient, u


def overlap_ceiling(rho, method=None, tol=None):
    """Upper bound sum_i l_i (sum_k s_k^(i))^2 / d on the fully entangled fraction.

    ``l_i`` and the Schmidt coefficients ``s^(i)`` come from the spectral
    decomposition of ``rho``; the bound is exact for pure states.
    """
    tol = tol or get_tolerances()
    d = _square_dimension(rho)
    eig = hermitian_eig(rho.matrix, method=method, tol=tol)
    bound = 0.0
    for weight, vector in zip(eig.eigenvalues, eig.eigenvectors.T):
        if weight > tol.clamp:
            s = singular_values(vector.reshape(d, d), method=method, tol=tol)
            bound += float(weight) * float(np.sum(s)) ** 2 / d
    return bound


def fully_entangled_fraction(rho, cfg=None, tol=None):
    """Largest overlap of ``rho`` with a maximally entangled state (I x U)|Phi+>.

    Each restart runs BFGS ascent on the generator coordinates of
    U = exp(i sum_a theta_a G_a) U_0 with exact gradients; restart 0 starts
    from U_0 = I, the others from seeded random unitaries.  Restarts stop once
    a value reaches :func:`overlap_ceiling`, which always happens for pure
    states.  The best value is a lower bound of the true maximum.  When no
    restart converges the result reports ``iterations = cfg.max_iterations``.
    """
    cfg = cfg or get_optimizer_config()
    d = _square_dimension(rho)
    basis = hermitian_basis(d)
    rng = np.random.default_rng(cfg.seed)
    m = rho.matrix
    ceiling = overlap_ceiling(rho, method=cfg.eigensolver, tol=tol)

    best_value, best_u, best_iterations, converged = -np.inf, None, 0, False
    for restart in range(cfg.restarts):
        if restart == 0:
            start = np.eye(d, dtype=np.complex128)
        else:
            coeffs = rng.standard_normal(basis.shape[0]) * math.pi
            start = unitary_from_generator(np.tensordot(coeffs, basis, axes=1), method=cfg.eigensolver, tol=tol)

        def negated(theta, start=start):
            value, gradient, _ = _overlap_with_gradient(theta, m, basis, start, cfg.eigensolver, tol)
            return -value, -gradient

        res = minimize(
            negated,
            np.zeros(basis.shape[0]),
            method='BFGS',
            jac=True,
            options={
                'maxiter': cfg.max_iterations,
                'gtol': cfg.gradient_tolerance,
                'hess_inv0': cfg.step_size * np.eye(basis.shape[0]),
            },
        )
        value = -float(res.fun)
        reached = value >= ceiling - cfg.ceiling_tolerance
        # status 1 means the iteration cap was hit; 2 is precision loss at the optimum
        converged = converged or reached or res.status in (0, 2)
        if value > best_value:
            _, _, u = _overlap_with_gradient(res.x, m, basis, start, cfg.eigensolver, tol)
            best_value, best_u, best_iterations = value, u, int(res.nit)
        if reached:
            logger.debug(f"FEF reached its ceiling {ceiling:.12g} on restart {restart}")
            break

    if not converged:
        logger.warning(f"FEF optimizer hit {cfg.max_iterations} iterations in all {cfg.restarts} restarts")
        best_iterations = cfg.max_iterations
    value = _bounded(best_value, 'fully entangled fraction', tol=tol)
    return MeasureResult('fully_entangled_fraction', value, _default_cut(2), Method.OPTIMIZER,
                         iterations=best_iterations, unitary=best_u)


def fidelity_from_fraction(fraction, d):
    return (fraction * d + 1.0) / (d + 1.0)


def capability_from_fidelity(fidelity, d):
    return max(((d + 1.0) * fidelity - 2.0) / (d - 1.0), 0.0)


def teleportation_measures(rho, cfg=None, tol=None):
    """Fully entangled fraction, teleportation fidelity and capability from one optimizer run."""
    d = _square_dimension(rho)
    fef = fully_entangled_fraction(rho, cfg, tol)
    fidelity = _bounded(fidelity_from_fraction(fef.value, d), 'teleportation fidelity', tol=tol)
    capability = _bounded(capability_from_fidelity(fidelity, d), 'teleportation capability', tol=tol)
    return (
        fef,
        MeasureResult('teleportation_fidelity', fidelity, fef.cut, Method.OPTIMIZER,
                      iterations=fef.iterations, unitary=fef.unitary),
        MeasureResult('teleportation_capability', capability, fef.cut, Method.OPTIMIZER,
                      iterations=fef.iterations, unitary=fef.unitary),
    )


def teleportation_fidelity(rho, cfg=None, tol=None):
    """Maximal average fidelity of standard teleportation over ``rho``: (F d + 1)/(d + 1)."""
    return teleportation_measures(rho, cfg, tol)[1]


def teleportation_capability(rho, cfg=None, tol=None):
    return teleportation_measures(rho, cfg, tol)[2]
