"""Monte-Carlo simulation of standard qudit teleportation over a bipartite resource.

The sender measures (input, A) in the generalized Bell basis
|Phi_mn> = (I x W_mn)|Phi+>; the receiver undoes outcome (m, n) with the
unitary that makes the protocol exact on the twisted resource
(I x U)|Phi+>, namely C_mn = W_mn^T U^dagger.  Input states are Haar
samples and every outcome is weighted by its probability, so the only
sampling noise comes from the inputs.
"""
import logging
import math

import numpy as np

from .choices import Method
from .exceptions import DimensionError, NonUnitaryError
from .measures import MeasureResult
from .quantum_states import Cut, weyl_operator
from .tensor_core import as_matrix, is_unitary

logger = logging.getLogger(__name__)


def bell_frames(d, correction):
    """Per-outcome (sender projection, receiver correction^dagger) matrices."""
    weyl = np.array([weyl_operator(d, m, n) for m in range(d) for n in range(d)])
    # <x,a|Phi_mn> = W_mn[a, x] / sqrt(d); its adjoint maps the input onto register A
    projections = weyl.conj() / math.sqrt(d)
    corrections_dagger = correction @ weyl.conj()
    return projections, corrections_dagger


def mc_teleportation_fidelity(rho, correction, n_samples, seed):
    """Average output fidelity <xi|Lambda_rho(|xi><xi|)|xi> over ``n_samples`` Haar inputs."""
    if rho.n_subsystems != 2 or rho.dims[0] != rho.dims[1]:
        raise DimensionError(f"teleportation needs a d x d bipartite resource, got dims {rho.dims}")
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2 to estimate a standard error")
    d = rho.dims[0]
    u = as_matrix(correction, 'correction')
    if u.shape != (d, d):
        raise DimensionError(f"correction must be {d}x{d}, got {u.shape}")
    if not is_unitary(u):
        raise NonUnitaryError(float(np.max(np.abs(u.conj().T @ u - np.eye(d)))))

    rng = np.random.default_rng(seed)
    xi = rng.standard_normal((n_samples, d)) + 1j * rng.standard_normal((n_samples, d))
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)

    projections, corrections_dagger = bell_frames(d, u)
    v = np.einsum('kax,sx->ska', projections, xi)
    w = np.einsum('kbx,sx->skb', corrections_dagger, xi)
    # x[(a, b)] = v_a conj(w_b); outcome k contributes x rho x^dagger
    x = np.einsum('ska,skb->skab', v, w.conj()).reshape(n_samples, d * d, d * d)
    fidelities = np.einsum('ski,ij,skj->s', x, rho.matrix, x.conj()).real

    mean = float(np.mean(fidelities))
    stderr = float(np.std(fidelities, ddof=1) / math.sqrt(n_samples))
    logger.info(f"teleportation Monte Carlo: f = {mean:.6f} +/- {stderr:.2e} over {n_samples} inputs")
    return MeasureResult('teleportation_fidelity', mean, Cut.of({0}, 2), Method.MONTE_CARLO,
                         iterations=n_samples, stderr=stderr)
