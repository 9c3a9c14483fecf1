"""Dense complex linear algebra for Hilbert spaces of a few qudits.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` (``ComplexMatrix``);
every entry point validates shape and finiteness once and never mutates its
arguments.  The Hermitian eigensolver is a cyclic Jacobi method whose rotations
are scheduled in round-robin order, so each round applies a batch of disjoint
plane rotations to the affected rows and columns at once.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from .conf import get_eigensolver, get_max_dimension, get_tolerances
from .exceptions import ConvergenceError, DimensionError, NonFiniteError, NonHermitianError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix
    sweeps: int = 0

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a, name='matrix'):
    """Validate ``a`` as a finite 2-D complex matrix within the dimension cap."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    limit = get_max_dimension()
    if max(m.shape) > limit:
        raise DimensionError(f"{name} of shape {m.shape} exceeds the {limit} dimension cap")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{name} has NaN or infinite entries")
    return m


def _require_square(m, name):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")


def kron(a, b):
    a = as_matrix(a, 'a')
    b = as_matrix(b, 'b')
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    limit = get_max_dimension()
    if max(rows, cols) > limit:
        raise DimensionError(f"kron result {rows}x{cols} exceeds the {limit} dimension cap")
    return np.kron(a, b)


def hermiticity_deviation(h):
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def hermitian_eig(h, method=None, tol=None):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    ``method`` is ``'jacobi'`` (cyclic Jacobi, the default from
    ``settings.LAB_EIGENSOLVER``) or ``'lapack'`` (``numpy.linalg.eigh``).
    """
    tol = tol or get_tolerances()
    h = as_matrix(h, 'h')
    _require_square(h, 'h')
    deviation = hermiticity_deviation(h)
    if deviation > tol.hermiticity:
        raise NonHermitianError(deviation, tol.hermiticity)
    h = 0.5 * (h + h.conj().T)

    method = method or get_eigensolver()
    if method == 'lapack':
        w, v = np.linalg.eigh(h)
        return EigenDecomposition(eigenvalues=w, eigenvectors=v)
    if method != 'jacobi':
        raise ValueError(f"unknown eigensolver {method!r}")

    w, v, sweeps = _jacobi(h, tol)
    order = np.argsort(w, kind='stable')
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=v[:, order], sweeps=sweeps)


@lru_cache(maxsize=64)
def _round_robin(n):
    """Rounds of disjoint (p, q) index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        rounds.append((
            np.array([p for p, _ in pairs], dtype=np.intp),
            np.array([q for _, q in pairs], dtype=np.intp),
        ))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(h, tol):
    a = h.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v, 0

    target = tol.eigen_convergence * scale
    # entries below the floor are negligible and too small for an accurate rotation phase
    floor = scale * np.finfo(np.float64).eps ** 2
    rounds = _round_robin(n)
    off = _off_norm(a)
    for sweep in range(tol.eigen_max_sweeps):
        if off < target:
            return np.real(np.diag(a)).copy(), v, sweep
        # threshold sweeps: only large elements are rotated while far from convergence
        threshold = max(0.2 * off / n ** 2 if sweep < 3 else 0.0, floor)
        for p, q in rounds:
            b = a[p, q]
            beta = np.abs(b)
            active = beta > threshold
            if not np.any(active):
                continue
            p, q, b, beta = p[active], q[active], b[active], beta[active]
            zeta = (a[q, q].real - a[p, p].real) / (2.0 * beta)
            t = np.where(zeta == 0.0, 1.0, np.sign(zeta) / (np.abs(zeta) + np.hypot(1.0, zeta)))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            phase = np.conj(b) / beta
            # rot[i, j, k] is the rotation entry at (pair[i, k], pair[j, k]); the pairs are disjoint
            rot = np.array([[c, s], [-s * phase, c * phase]])
            pair = np.array([p, q])
            a[:, pair] = np.einsum('nik,ijk->njk', a[:, pair], rot)
            a[pair] = np.einsum('ijk,ikn->jkn', rot.conj(), a[pair])
            v[:, pair] = np.einsum('nik,ijk->njk', v[:, pair], rot)
        a = 0.5 * (a + a.conj().T)
        off = _off_norm(a)
    if off < target:
        return np.real(np.diag(a)).copy(), v, tol.eigen_max_sweeps

    logger.error(f"Jacobi failed on a {n}x{n} matrix: off-diagonal norm {off:.3e}")
    raise ConvergenceError(tol.eigen_max_sweeps, off)


def trace_norm_hermitian(h, method=None, tol=None):
    return float(np.sum(np.abs(hermitian_eig(h, method=method, tol=tol).eigenvalues)))


def unitary_from_generator(h, method=None, tol=None):
    """U = exp(i h) through the eigendecomposition of the Hermitian generator."""
    eig = hermitian_eig(h, method=method, tol=tol)
    v = eig.eigenvectors
    return (v * np.exp(1j * eig.eigenvalues)) @ v.conj().T


def hermitian_dilation(m):
    """[[0, M], [M^dagger, 0]], whose eigenvalues are plus/minus the singular values of M."""
    m = as_matrix(m, 'm')
    rows, cols = m.shape
    out = np.zeros((rows + cols, rows + cols), dtype=np.complex128)
    out[:rows, rows:] = m
    out[rows:, :rows] = m.conj().T
    return out


def singular_values(m, method=None, tol=None):
    """Descending singular values of ``m`` from the Hermitian eigenproblem of its dilation.

    A rectangular ``m`` is first replaced by the square triangular factor of
    its QR decomposition, which keeps the singular values and shrinks the
    dilation to ``2 min(rows, cols)``.
    """
    m = as_matrix(m, 'm')
    rows, cols = m.shape
    if rows > cols:
        m = np.linalg.qr(m, mode='r')
    elif cols > rows:
        m = np.linalg.qr(m.conj().T, mode='r')
    k = min(m.shape)
    w = hermitian_eig(hermitian_dilation(m), method=method, tol=tol).eigenvalues
    return np.clip(w[::-1][:k], 0.0, None)


def psd_sqrt(h, method=None, tol=None):
    """Principal square root of a positive-semidefinite matrix; round-off negatives are cut to 0."""
    tol = tol or get_tolerances()
    eig = hermitian_eig(h, method=method, tol=tol)
    w = np.where(eig.eigenvalues > tol.clamp, eig.eigenvalues, 0.0)
    v = eig.eigenvectors
    return (v * np.sqrt(w)) @ v.conj().T


def is_unitary(u, atol=1e-9):
    u = as_matrix(u, 'u')
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


@lru_cache(maxsize=16)
def hermitian_basis(d):
    """Generalized Gell-Mann matrices: d*d - 1 traceless Hermitian generators of SU(d)."""
    basis = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=np.complex128)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((d, d), dtype=np.complex128)
            anti[j, k], anti[k, j] = -1j, 1j
            basis.extend((sym, anti))
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        basis.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    stacked = np.array(basis)
    stacked.setflags(write=False)
    return stacked
