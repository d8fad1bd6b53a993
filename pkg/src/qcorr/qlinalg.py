"""Dense complex linear algebra for one- and two-qubit operators.

Basis order is |00>, |01>, |10>, |11> with qubit A as the left tensor factor,
so the row index of a two-qubit operator is ``2 * i_A + i_B``.
"""

from typing import NamedTuple

import numpy as np

from qcorr.errors import InvalidArgument, NotPositiveSemidefinite, NumericFailure

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_REL_TOL = 1e-14

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order; ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a, dims=(2, 4)) -> np.ndarray:
    """Return ``a`` as a complex square array, checking its dimension."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise InvalidArgument(f"expected a square matrix of dimension {dims}, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators (``a`` acts on qubit A)."""
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    return np.kron(a, b)


def check_side(keep: str) -> str:
    if not isinstance(keep, str) or keep.upper() not in ("A", "B"):
        raise InvalidArgument(f"subsystem must be 'A' or 'B', got {keep!r}")
    return keep.upper()


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced operator on qubit ``keep`` ("A" or "B") of a 4x4 operator."""
    keep = check_side(keep)
    r = as_matrix(rho, dims=(4,)).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def partial_transpose(rho) -> np.ndarray:
    """Transpose on qubit B of a 4x4 operator."""
    r = as_matrix(rho, dims=(4,)).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def hermitian_part(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Symmetrize ``h``; asymmetry above ``tol`` is an error, not something to repair."""
    m = as_matrix(h)
    asym = np.max(np.abs(m - m.conj().T))
    if asym > tol:
        raise InvalidArgument(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    return (m + m.conj().T) / 2


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # Unitary J with (J^dag B J) diagonal for the block B = [[app, apq], [conj(apq), aqq]].
    b = abs(apq)
    phase = apq / b
    tau = (aqq - app) / (2 * b)
    t = 1.0 / (tau + np.copysign(np.hypot(1.0, tau), tau)) if tau != 0 else 1.0
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])


def herm_eig(h, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm falls below ``1e-14`` of the
    full norm. Raises :class:`NumericFailure` after 100 sweeps without convergence.
    """
    a = hermitian_part(h, tol).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    # elements this small cannot keep the off-diagonal norm above the stopping threshold
    negligible = JACOBI_REL_TOL * scale / n
    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= JACOBI_REL_TOL * scale:
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise NumericFailure(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= negligible:
                    continue
                j = _jacobi_rotation(a[p, p].real, a[q, q].real, a[p, q])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ j
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def eigvalsh(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return herm_eig(h, tol).eigenvalues


def eigvalsh_2x2(m: np.ndarray) -> np.ndarray:
    """Closed-form ascending eigenvalues of a stack of 2x2 Hermitian matrices.

    ``m`` has shape ``(..., 2, 2)``; the result has shape ``(..., 2)``. This is the
    single exact Jacobi rotation for a 2x2 block, written out so it vectorizes.
    """
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    b = m[..., 0, 1]
    mean = (a + d) / 2
    radius = np.hypot((a - d) / 2, np.abs(b))
    return np.stack([mean - radius, mean + radius], axis=-1)


def psd_sqrt(rho, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in ``[-psd_tol, 0)`` are clamped to zero."""
    w, v = herm_eig(rho)
    if w[0] < -psd_tol:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {w[0]:.3e} is below -{psd_tol:g}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T
