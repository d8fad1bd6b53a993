"""Pure states, named mixed-state families and convex mixtures of two qubits.

Density matrices are plain ``numpy`` arrays; every constructor validates its output
with :func:`validate_density_matrix` before returning it.
"""

from typing import NamedTuple

import numpy as np

from qcorr.errors import InvalidArgument, NotPositiveSemidefinite
from qcorr.qlinalg import PSD_TOL, as_matrix, eigvalsh, hermitian_part

NORM_TOL = 1e-12
WEIGHT_TOL = 1e-12

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)
# y-basis kets, written with a tilde in the usual notation
PLUS_I = np.array([1, 1j], dtype=complex) / np.sqrt(2)
MINUS_I = np.array([1, -1j], dtype=complex) / np.sqrt(2)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


class MixtureComponent(NamedTuple):
    weight: float
    state: np.ndarray


def ket(amplitudes) -> np.ndarray:
    """Validate a state vector of dimension 2 or 4."""
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1 or psi.shape[0] not in (2, 4):
        raise InvalidArgument(f"ket must have dimension 2 or 4, got shape {psi.shape}")
    norm = np.vdot(psi, psi).real
    if abs(norm - 1) > NORM_TOL:
        raise InvalidArgument(f"ket is not normalized (norm^2 = {norm!r})")
    return psi


def product_ket(a, b) -> np.ndarray:
    return ket(np.kron(ket(a), ket(b)))


def projector(psi) -> np.ndarray:
    psi = ket(psi)
    return np.outer(psi, psi.conj())


def validate_density_matrix(rho, tol: float = PSD_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity within ``tol``; return the symmetrized matrix."""
    m = hermitian_part(as_matrix(rho), tol)
    tr = np.trace(m).real
    if abs(tr - 1) > tol:
        raise InvalidArgument(f"trace is {tr!r}, expected 1")
    lowest = eigvalsh(m)[0]
    if lowest < -tol:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {lowest:.3e} is below -{tol:g}")
    return m


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidArgument(f"{name} must lie in [0, 1], got {value!r}")
    return value


def bloch_ket(theta: float, phi: float) -> np.ndarray:
    """cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>."""
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=complex)


def bell() -> np.ndarray:
    """|Phi+><Phi+| with |Phi+> = (|00> + |11>)/sqrt(2)."""
    return projector(PHI_PLUS)


def rho_abc(which: str, mix: float | None = None) -> np.ndarray:
    """Separable examples built on |++>: a pure, b orthogonal mixture, c non-orthogonal mixture.

    ``mix`` is the weight on |++><++| and is ignored for ``"a"``.
    """
    pp = projector(product_ket(PLUS, PLUS))
    if which == "a":
        return validate_density_matrix(pp)
    if mix is None:
        raise InvalidArgument(f"rho_{which} requires a mixing parameter")
    w = _check_probability("mix", mix)
    if which == "b":
        other = projector(product_ket(MINUS, MINUS))
    elif which == "c":
        other = projector(product_ket(KET0, KET0))
    else:
        raise InvalidArgument(f"unknown state rho_{which!s}; expected a, b or c")
    return validate_density_matrix(w * pp + (1 - w) * other)


_RHO_1234 = {
    1: ((KET0, KET0), (KET1, KET1)),
    2: ((PLUS, PLUS), (KET0, MINUS)),
    3: ((PLUS, PLUS), (MINUS, KET0)),
    4: ((PLUS, PLUS), (KET0, KET0)),
}


def rho_1234(which: int, p: float) -> np.ndarray:
    """Two-component separable mixtures p|first><first| + (1-p)|second><second|.

    1: |00>,|11> (classical); 2: |++>,|0->; 3: |++>,|-0>; 4: |++>,|00>.
    """
    if which not in _RHO_1234:
        raise InvalidArgument(f"unknown state rho{which!s}; expected 1, 2, 3 or 4")
    p = _check_probability("p", p)
    first, second = _RHO_1234[which]
    return validate_density_matrix(
        p * projector(product_ket(*first)) + (1 - p) * projector(product_ket(*second))
    )


def werner(p: float) -> np.ndarray:
    """(1-p) I/4 + p |Phi+><Phi+|."""
    p = _check_probability("p", p)
    return validate_density_matrix((1 - p) * np.eye(4) / 4 + p * bell())


WERNER_PRODUCT_KETS = (
    (PLUS, PLUS),
    (MINUS, MINUS),
    (KET0, KET0),
    (KET1, KET1),
    (PLUS_I, MINUS_I),
    (MINUS_I, PLUS_I),
)


def werner_separable_decomposition(p: float) -> list[MixtureComponent]:
    """Werner state written as a mixture of I/4 and six product states.

    Weight ``1 - 3p`` sits on I/4 and ``p/2`` on each product state, so the mixture is
    physical only for ``p <= 1/3``.
    """
    p = _check_probability("p", p)
    if 1 - 3 * p < -WEIGHT_TOL:
        raise InvalidArgument(
            f"p = {p!r} exceeds 1/3: the separable form is a valid density operator only when p <= 1/3"
        )
    components = [MixtureComponent(max(1 - 3 * p, 0.0), np.eye(4, dtype=complex) / 4)]
    components += [MixtureComponent(p / 2, projector(product_ket(a, b))) for a, b in WERNER_PRODUCT_KETS]
    return components


def rotated_kets(n: complex) -> tuple[np.ndarray, np.ndarray]:
    """The n-rotated basis |+>_n = N(|0> + n|1>), |->_n = N(-conj(n)|0> + |1>)."""
    n = complex(n)
    norm = 1 / np.sqrt(1 + abs(n) ** 2)
    return (
        norm * np.array([1, n], dtype=complex),
        norm * np.array([-np.conj(n), 1], dtype=complex),
    )


def rotation_unitary(n: complex) -> np.ndarray:
    """Single-qubit unitary sending |0> to |+>_n and |1> to |->_n."""
    plus_n, minus_n = rotated_kets(n)
    return np.column_stack([plus_n, minus_n])


def generalized_werner(p: float, n: complex = 0.0, k: float = 1.0) -> np.ndarray:
    """(1-p) I/4 + p |Phi_nk><Phi_nk| with |Phi_nk> = N_nk(|+>_n|+>_n + k|->_n|->_n).

    ``n`` is the local superposition parameter (complex allowed), ``k >= 0`` the nonlocal
    one. ``(n, k) = (0, 1)`` gives the Werner state; ``k = 0`` is separable.
    """
    p = _check_probability("p", p)
    if isinstance(k, complex) or not np.isreal(k):
        raise InvalidArgument(f"k must be real, got {k!r}")
    k = float(k)
    if k < 0:
        raise InvalidArgument(f"k must be non-negative, got {k!r}")
    plus_n, minus_n = rotated_kets(n)
    phi = (np.kron(plus_n, plus_n) + k * np.kron(minus_n, minus_n)) / np.sqrt(1 + k * k)
    return validate_density_matrix((1 - p) * np.eye(4) / 4 + p * np.outer(phi, phi.conj()))


def mix(components) -> np.ndarray:
    """Convex combination of ``(weight, density matrix)`` pairs."""
    components = [MixtureComponent(float(w), as_matrix(s)) for w, s in components]
    if not components:
        raise InvalidArgument("mixture needs at least one component")
    weights = np.array([c.weight for c in components])
    if np.any(weights < 0):
        raise InvalidArgument(f"negative mixture weight in {weights.tolist()}")
    if abs(weights.sum() - 1) > WEIGHT_TOL:
        raise InvalidArgument(f"mixture weights sum to {weights.sum()!r}, expected 1")
    dims = {c.state.shape for c in components}
    if len(dims) != 1:
        raise InvalidArgument(f"mixture components have different shapes {sorted(dims)}")
    return validate_density_matrix(sum(c.weight * c.state for c in components))


def load_density_matrix(text: str) -> np.ndarray:
    """Parse 16 complex entries given as 32 whitespace-separated reals (row-major re/im pairs)."""
    try:
        values = [float(tok) for tok in text.split()]
    except ValueError as exc:
        raise InvalidArgument(f"could not parse density matrix: {exc}") from None
    if len(values) != 32:
        raise InvalidArgument(f"expected 32 numbers (16 re/im pairs), got {len(values)}")
    pairs = np.array(values).reshape(16, 2)
    return validate_density_matrix((pairs[:, 0] + 1j * pairs[:, 1]).reshape(4, 4))
