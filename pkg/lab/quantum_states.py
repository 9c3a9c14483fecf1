"""Multi-qudit pure states, density operators and the states used by the lab.

Subsystems are indexed from 0.  Amplitude index ``i`` of a state with
``dims = (d1, ..., dn)`` is the mixed-radix number ``(i1, ..., in)`` in C
order, i.e. ket ``|i1,...,in>``.  Samplers take an explicit seed and are
deterministic for it.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .conf import get_rejection_budget, get_tolerances
from .exceptions import (
    DimensionError,
    InvalidCutError,
    InvalidStateError,
    OutOfRangeError,
    RejectionBudgetExceeded,
    UnknownStateError,
)
from .tensor_core import as_matrix, hermitian_eig, hermiticity_deviation

logger = logging.getLogger(__name__)

NAMED_STATES = ('Ou', 'KS', 'Ou_p', 'KS_p', 'MaxEnt', 'GHZ3', 'W3', 'Product')
PARAMETRIZED_STATES = ('Ou_p', 'KS_p')


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise DimensionError(f"subsystem dimensions must all be >= 2, got {dims}")
    return dims


@dataclass(frozen=True)
class Cut:
    """Bipartition of subsystem indices into ``left | right``."""
    left: frozenset
    right: frozenset

    @classmethod
    def of(cls, left, n):
        """Cut with ``left`` against its complement among ``n`` subsystems."""
        left = frozenset(int(i) for i in left)
        return cls(left, frozenset(range(n)) - left).validated(n)

    def validated(self, n):
        if not self.left or not self.right:
            raise InvalidCutError(f"both sides of a cut must be non-empty: {self}")
        if self.left & self.right:
            raise InvalidCutError(f"cut sides overlap: {self}")
        if self.left | self.right != frozenset(range(n)):
            raise InvalidCutError(f"cut {self} does not cover subsystems 0..{n - 1}")
        return self

    def label(self):
        """1-based label, e.g. ``1(23)``, matching the usual party names."""
        left = ''.join(str(i + 1) for i in sorted(self.left))
        right = ''.join(str(i + 1) for i in sorted(self.right))
        return f"{left}({right})" if len(self.right) > 1 else f"{left}{right}"

    def __str__(self):
        return f"{sorted(self.left)}|{sorted(self.right)}"


@dataclass(frozen=True)
class StateVector:
    dims: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(dims):
            raise DimensionError(f"{amps.size} amplitudes do not fit dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("state has NaN or infinite amplitudes")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > get_tolerances().normalization:
            raise InvalidStateError(f"state is not normalized: <psi|psi> = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'amplitudes', amps)

    @classmethod
    def normalized(cls, dims, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(dims, amps / norm)

    @property
    def n_subsystems(self):
        return len(self.dims)

    def tensor(self):
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite operator.

    Positivity needs a spectrum, so factories whose output is positive by
    construction (outer products, partial traces, mixtures) pass
    ``assume_positive=True`` to skip that check.
    """
    dims: tuple
    matrix: np.ndarray
    assume_positive: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        tol = get_tolerances()
        dims = _check_dims(self.dims)
        m = np.array(as_matrix(self.matrix, 'rho'))
        size = math.prod(dims)
        if m.shape != (size, size):
            raise DimensionError(f"density matrix of shape {m.shape} does not fit dims {dims}")
        deviation = hermiticity_deviation(m)
        if deviation > tol.hermiticity:
            raise InvalidStateError(f"density matrix is not Hermitian (deviation {deviation:.3e})")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > tol.trace:
            raise InvalidStateError(f"density matrix trace is {trace!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'matrix', m)
        if not self.assume_positive:
            self.check_positive()

    @property
    def n_subsystems(self):
        return len(self.dims)

    def spectrum(self, method=None):
        return hermitian_eig(self.matrix, method=method).eigenvalues

    def check_positive(self, method=None):
        tol = get_tolerances()
        lowest = float(self.spectrum(method)[0])
        if lowest < -tol.positivity:
            raise InvalidStateError(f"density matrix has eigenvalue {lowest:.3e} < -{tol.positivity:.0e}")
        return self

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def basis_state(dims, digits):
    dims = _check_dims(dims)
    if len(digits) != len(dims) or any(not 0 <= k < d for k, d in zip(digits, dims)):
        raise OutOfRangeError(f"basis ket {digits} does not fit dims {dims}")
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    amps[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return StateVector(dims, amps)


def density_from_state(psi):
    a = psi.amplitudes
    return DensityOperator(psi.dims, np.outer(a, a.conj()), assume_positive=True)


def _check_subsystems(indices, n, what):
    indices = sorted({int(i) for i in indices})
    if any(not 0 <= i < n for i in indices):
        raise OutOfRangeError(f"{what} {indices} out of range for {n} subsystems")
    return indices


def partial_trace(rho, keep):
    """Marginal on the ``keep`` subsystems (order preserved) of a density operator."""
    n = rho.n_subsystems
    keep = _check_subsystems(keep, n, 'kept subsystems')
    if not keep or len(keep) == n:
        raise OutOfRangeError(f"keep must be a non-empty proper subset of 0..{n - 1}, got {keep}")
    letters = 'abcdefghijklmnopqrstuvwxyz'
    ket = [letters[i] for i in range(n)]
    bra = [letters[n + i] if i in keep else letters[i] for i in range(n)]
    out = [ket[i] for i in keep] + [bra[i] for i in keep]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    reduced = np.einsum(f"{''.join(ket)}{''.join(bra)}->{''.join(out)}", t)
    kept_dims = tuple(rho.dims[i] for i in keep)
    size = math.prod(kept_dims)
    return DensityOperator(kept_dims, reduced.reshape(size, size), assume_positive=True)


def marginal(psi, keep):
    """Marginal of a pure state straight from its amplitudes (same result as partial_trace)."""
    n = psi.n_subsystems
    keep = _check_subsystems(keep, n, 'kept subsystems')
    if not keep or len(keep) == n:
        raise OutOfRangeError(f"keep must be a non-empty proper subset of 0..{n - 1}, got {keep}")
    rest = [i for i in range(n) if i not in keep]
    kept_dims = tuple(psi.dims[i] for i in keep)
    m = psi.tensor().transpose(keep + rest).reshape(math.prod(kept_dims), -1)
    return DensityOperator(kept_dims, m @ m.conj().T, assume_positive=True)


def partial_transpose(rho, subsystem):
    """Transpose the indices of one subsystem: <i,j|rho^T_B|k,l> = <i,l|rho|k,j>."""
    n = rho.n_subsystems
    if not 0 <= int(subsystem) < n:
        raise OutOfRangeError(f"subsystem {subsystem} out of range for {n} subsystems")
    size = rho.matrix.shape[0]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = np.swapaxes(t, int(subsystem), n + int(subsystem))
    return t.reshape(size, size)


def reshape_to_cut(state, cut):
    """Group ``cut.left`` first and ``cut.right`` second into a two-party object."""
    n = state.n_subsystems
    cut = cut.validated(n)
    left, right = sorted(cut.left), sorted(cut.right)
    perm = left + right
    dims = (math.prod(state.dims[i] for i in left), math.prod(state.dims[i] for i in right))
    if isinstance(state, StateVector):
        return StateVector(dims, state.tensor().transpose(perm).reshape(-1))
    if isinstance(state, DensityOperator):
        t = state.matrix.reshape(state.dims + state.dims)
        t = t.transpose(perm + [n + i for i in perm])
        size = dims[0] * dims[1]
        return DensityOperator(dims, t.reshape(size, size), assume_positive=True)
    raise TypeError(f"cannot reshape {type(state).__name__} to a cut")


def _complex_gaussian(rng, size):
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def haar_random_state(dims, seed):
    """Haar-uniform pure state: normalized vector of i.i.d. complex Gaussians."""
    dims = _check_dims(dims)
    rng = np.random.default_rng(seed)
    return StateVector.normalized(dims, _complex_gaussian(rng, math.prod(dims)))


@lru_cache(maxsize=1)
def _canonical_layout():
    """Index classes of the three-qutrit canonical form: zero, real non-negative, complex."""
    triples = list(product(range(3), repeat=3))
    zero, real, free = [], [], []
    for ijk in triples:
        values = sorted(ijk)
        # exactly two equal entries i plus one larger entry j: c_jii = c_iji = c_iij = 0
        if len(set(ijk)) == 2 and values[0] == values[1]:
            zero.append(ijk)
        elif sum(1 for x in ijk if x != 2) <= 1:
            real.append(ijk)
        else:
            free.append(ijk)

    def flat(group):
        return np.array([np.ravel_multi_index(t, (3, 3, 3)) for t in group], dtype=np.intp)

    upper = [t for t in triples if min(t) >= 1]
    return {
        'zero': flat(zero),
        'real': flat(real),
        'free': flat(free),
        'c000': np.ravel_multi_index((0, 0, 0), (3, 3, 3)),
        'c111': np.ravel_multi_index((1, 1, 1), (3, 3, 3)),
        'upper': flat(upper),
    }


def canonical_qutrit_sample(seed, budget=None, batch=64):
    """Three-qutrit state in canonical form, drawn by rejection on the ordering constraint.

    Free coefficients are complex Gaussian, the coefficients that must be real
    are half-normal, the forced zeros are exact.  A draw is kept only when
    |c_000| dominates every coefficient and |c_111| dominates every
    coefficient with all indices >= 1.
    """
    budget = budget or get_rejection_budget()
    layout = _canonical_layout()
    rng = np.random.default_rng(seed)
    attempts = failed_000 = failed_111 = 0
    while attempts < budget:
        size = min(batch, budget - attempts)
        c = np.zeros((size, 27), dtype=np.complex128)
        c[:, layout['free']] = _complex_gaussian(rng, (size, layout['free'].size))
        c[:, layout['real']] = np.abs(rng.standard_normal((size, layout['real'].size)))
        mags = np.abs(c)
        ok_000 = mags[:, layout['c000']] >= mags.max(axis=1)
        ok_111 = mags[:, layout['c111']] >= mags[:, layout['upper']].max(axis=1)
        accepted = np.flatnonzero(ok_000 & ok_111)
        if accepted.size:
            first = int(accepted[0])
            attempts += first + 1
            if attempts > budget // 2:
                logger.warning(f"canonical sampler needed {attempts} attempts for seed {seed}")
            return StateVector.normalized((3, 3, 3), c[first])
        attempts += size
        failed_000 += int(np.count_nonzero(~ok_000))
        failed_111 += int(np.count_nonzero(ok_000 & ~ok_111))

    diagnostics = {'c000_not_largest': failed_000, 'c111_not_largest': failed_111}
    logger.error(f"canonical sampler gave up after {attempts} attempts (seed {seed}): {diagnostics}")
    raise RejectionBudgetExceeded(attempts, seed, diagnostics)


def satisfies_canonical_form(psi, atol=0.0):
    """True when the coefficients obey the zero, reality and ordering constraints."""
    layout = _canonical_layout()
    c = psi.amplitudes
    mags = np.abs(c)
    return bool(
        psi.dims == (3, 3, 3)
        and np.all(c[layout['zero']] == 0)
        and np.all(c[layout['real']].imag == 0)
        and np.all(c[layout['real']].real >= 0)
        and mags[layout['c000']] + atol >= mags.max()
        and mags[layout['c111']] + atol >= mags[layout['upper']].max()
    )


def _ket(digits, d=3):
    return np.ravel_multi_index(digits, (d,) * len(digits))


def _sqrt_clamped(x):
    # radicands within 1e-14 below zero are round-off at the p endpoints
    if x < -1e-14:
        raise OutOfRangeError(f"negative radicand {x!r}")
    return math.sqrt(max(x, 0.0))


def resolve_state_name(name):
    """Canonical spelling of a named state, matched case-insensitively."""
    key = {n.lower(): n for n in NAMED_STATES}.get(str(name).lower())
    if key is None:
        raise UnknownStateError(f"unknown state {name!r}; expected one of {', '.join(NAMED_STATES)}")
    return key


def named_state(name, p=None, d=3):
    """Named states: Ou, KS and their superpositions Ou_p, KS_p, plus fixtures.

    ``Ou_p = sqrt(p) Ou + sqrt(1-p) |000>`` and ``KS_p = sqrt(p) KS + sqrt(1-p) |222>``;
    ``MaxEnt`` is the two-qudit maximally entangled state of local dimension
    ``d``; ``GHZ3``, ``W3`` and ``Product`` are three-party states of local
    dimension ``d`` (``d=2`` gives the qubit GHZ and W states).
    """
    key = resolve_state_name(name)
    if key in PARAMETRIZED_STATES:
        if p is None:
            raise OutOfRangeError(f"{key} needs a parameter p in [0, 1]")
        if not 0.0 <= float(p) <= 1.0:
            raise OutOfRangeError(f"p must lie in [0, 1], got {p}")
    if d < 2:
        raise OutOfRangeError(f"local dimension must be >= 2, got {d}")

    if key in ('Ou', 'Ou_p', 'KS', 'KS_p'):
        amps = np.zeros(27, dtype=np.complex128)
        if key.startswith('Ou'):
            for digits, sign in (((0, 1, 2), 1), ((0, 2, 1), -1), ((1, 2, 0), 1),
                                 ((1, 0, 2), -1), ((2, 0, 1), 1), ((2, 1, 0), -1)):
                amps[_ket(digits)] = sign / math.sqrt(6.0)
            anchor = (0, 0, 0)
        else:
            for digits, weight in (((0, 1, 0), math.sqrt(2.0)), ((1, 0, 1), math.sqrt(2.0)),
                                   ((2, 0, 0), 1.0), ((2, 1, 1), 1.0)):
                amps[_ket(digits)] = weight / math.sqrt(6.0)
            anchor = (2, 2, 2)
        if key in PARAMETRIZED_STATES:
            p = float(p)
            amps = _sqrt_clamped(p) * amps
            amps[_ket(anchor)] += _sqrt_clamped(1.0 - p)
        return StateVector((3, 3, 3), amps)

    if key == 'MaxEnt':
        amps = np.zeros(d * d, dtype=np.complex128)
        amps[[_ket((k, k), d) for k in range(d)]] = 1.0 / math.sqrt(d)
        return StateVector((d, d), amps)

    amps = np.zeros(d ** 3, dtype=np.complex128)
    if key == 'GHZ3':
        amps[[_ket((k, k, k), d) for k in range(d)]] = 1.0 / math.sqrt(d)
    elif key == 'W3':
        amps[[_ket(t, d) for t in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]] = 1.0 / math.sqrt(3.0)
    else:
        amps[0] = 1.0
    return StateVector((d, d, d), amps)


def random_mixed(dims, rank, seed):
    """Mixture of ``rank`` Haar pure states with Dirichlet-uniform weights."""
    dims = _check_dims(dims)
    size = math.prod(dims)
    if not 1 <= int(rank) <= size:
        raise OutOfRangeError(f"rank must lie in [1, {size}], got {rank}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(int(rank)))
    phis = _complex_gaussian(rng, (int(rank), size))
    phis /= np.linalg.norm(phis, axis=1, keepdims=True)
    rho = (phis.T * weights) @ phis.conj()
    return DensityOperator(dims, 0.5 * (rho + rho.conj().T), assume_positive=True)


def weyl_operator(d, m, n):
    """W_mn = sum_k w^(k n) |k+m mod d><k| with w = exp(2 pi i / d)."""
    if d < 2 or not (0 <= m < d and 0 <= n < d):
        raise OutOfRangeError(f"Weyl indices ({m}, {n}) out of range for d = {d}")
    k = np.arange(d)
    w = np.zeros((d, d), dtype=np.complex128)
    w[(k + m) % d, k] = np.exp(2j * np.pi * k * n / d)
    return w
