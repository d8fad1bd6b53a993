"""Correlation measures for two-qubit density matrices.

Entropies are in bits. The measured side of a discord is named explicitly: ``"B"``
means the projective measurement acts on qubit B and the conditional state lives on
qubit A (the D(X:Y) convention), ``"A"`` is the mirrored quantity.
"""

import enum
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize

from qcorr.errors import InvalidArgument, NotPositiveSemidefinite, NumericFailure
from qcorr.qlinalg import (
    PSD_TOL,
    SY,
    check_side,
    as_matrix,
    eigvalsh,
    eigvalsh_2x2,
    hermitian_part,
    partial_trace,
    partial_transpose,
    psd_sqrt,
)
from qcorr.states import validate_density_matrix

DISCORD_ZERO_TOL = 1e-6
DISCORD_CLAMP = 1e-9
OUTCOME_TOL = 1e-14
IMAG_TOL = 1e-10
GRID_SIZE = 64
REFINE_ITERS = 500
REFINE_STARTS = 5
REFINE_FATOL = 1e-10

_SY_SY = np.kron(SY, SY)


def _xlog2x(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def entropy(rho, psd_tol: float = PSD_TOL) -> float:
    """Von Neumann entropy in bits."""
    w = eigvalsh(as_matrix(rho))
    if w[0] < -psd_tol:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {w[0]:.3e} is below -{psd_tol:g}")
    return float(max(-np.sum(_xlog2x(np.clip(w, 0.0, None))), 0.0))


def covariance(rho, ox, oy) -> float:
    """Tr(rho ox⊗oy) - Tr(rho_A ox) Tr(rho_B oy) for single-qubit observables."""
    rho = validate_density_matrix(rho)
    try:
        ox = hermitian_part(as_matrix(ox, dims=(2,)))
        oy = hermitian_part(as_matrix(oy, dims=(2,)))
    except InvalidArgument as exc:
        raise InvalidArgument(f"observable: {exc}") from None
    joint = np.trace(rho @ np.kron(ox, oy))
    value = joint - np.trace(partial_trace(rho, "A") @ ox) * np.trace(partial_trace(rho, "B") @ oy)
    if abs(value.imag) > IMAG_TOL:
        raise InvalidArgument(f"covariance has imaginary part {value.imag:.3e}")
    return float(value.real)


def negativity(rho) -> float:
    """(||rho^T_B||_1 - 1) / 2, clamped at zero."""
    w = eigvalsh(partial_transpose(validate_density_matrix(rho)))
    return float(max((np.sum(np.abs(w)) - 1) / 2, 0.0))


def is_entangled(rho, psd_tol: float = PSD_TOL) -> bool:
    """Peres-Horodecki test, exact for two qubits."""
    w = eigvalsh(partial_transpose(validate_density_matrix(rho, psd_tol)))
    return bool(w[0] < -psd_tol)


def mutual_information_total(rho) -> float:
    rho = validate_density_matrix(rho)
    return (
        entropy(partial_trace(rho, "A")) + entropy(partial_trace(rho, "B")) - entropy(rho)
    )


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-one projective basis {|psi(theta, phi)><psi|, I - |psi><psi|} on one qubit."""

    theta: float
    phi: float = 0.0

    def kets(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        e = np.exp(1j * self.phi)
        return np.array([c, e * s]), np.array([-np.conj(e) * s, c])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        k0, _ = self.kets()
        p0 = np.outer(k0, k0.conj())
        return p0, np.eye(2) - p0


def _basis_kets(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Outcome kets for a batch of angles, shape ``(G, 2 outcomes, 2 amplitudes)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    k0 = np.stack([c + 0j, e * s], axis=-1)
    k1 = np.stack([-np.conj(e) * s, c + 0j], axis=-1)
    return np.stack([k0, k1], axis=-2)


def _conditional_entropies(rho: np.ndarray, measured: str, theta, phi) -> np.ndarray:
    """Average entropy of the unmeasured qubit after measuring ``measured`` at each angle pair."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    kets = _basis_kets(theta, phi)
    r = rho.reshape(2, 2, 2, 2)
    if measured == "B":
        # sigma_A[a, a'] = sum_{b, b'} conj(psi_b) rho[a b, a' b'] psi_b'
        sigma = np.einsum("gjb,abcd,gjd->gjac", kets.conj(), r, kets)
    else:
        sigma = np.einsum("gja,abcd,gjc->gjbd", kets.conj(), r, kets)
    probs = np.real(np.trace(sigma, axis1=-2, axis2=-1))
    mu = np.clip(eigvalsh_2x2(sigma), 0.0, None)
    # sum_j p_j H(sigma_j / p_j) = -sum mu log mu + sum_j p_j log p_j
    per_outcome = -np.sum(_xlog2x(mu), axis=-1) + _xlog2x(probs)
    per_outcome = np.where(probs < OUTCOME_TOL, 0.0, per_outcome)
    return np.sum(per_outcome, axis=-1)


def conditional_entropy_after_measurement(rho, measured: str, basis: MeasurementBasis) -> float:
    measured = check_side(measured)
    rho = validate_density_matrix(rho)
    return float(_conditional_entropies(rho, measured, basis.theta, basis.phi)[0])


def _discord_offset(rho: np.ndarray, measured: str) -> float:
    return entropy(partial_trace(rho, measured)) - entropy(rho)


def discord_function(rho, measured: str, basis: MeasurementBasis) -> float:
    """H(measured marginal) - H(joint) + conditional entropy for one measurement basis."""
    measured = check_side(measured)
    rho = validate_density_matrix(rho)
    value = _discord_offset(rho, measured) + _conditional_entropies(rho, measured, basis.theta, basis.phi)[0]
    return float(_clamp(value))


def discord_function_grid(rho, measured: str, theta, phi) -> np.ndarray:
    """Discord function on the outer product grid ``theta x phi``, shape ``(len(theta), len(phi))``."""
    measured = check_side(measured)
    rho = validate_density_matrix(rho)
    tt, pp = np.meshgrid(np.asarray(theta, float), np.asarray(phi, float), indexing="ij")
    values = _discord_offset(rho, measured) + _conditional_entropies(rho, measured, tt.ravel(), pp.ravel())
    return values.reshape(tt.shape)


def _clamp(value: float) -> float:
    if value < -DISCORD_CLAMP:
        raise NumericFailure(f"discord function evaluated to {value:.3e} < 0", best_value=value)
    return max(float(value), 0.0)


class DiscordResult(NamedTuple):
    """Minimum found, its canonical angles, and the total Nelder-Mead iterations spent."""

    value: float
    theta: float
    phi: float
    iterations: int


def _canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    theta = theta % (2 * np.pi)
    if theta > np.pi:
        theta = 2 * np.pi - theta
        phi += np.pi
    return float(theta), float(phi % (2 * np.pi))


def minimize_discord(
    rho,
    measured: str,
    grid: int = GRID_SIZE,
    refine_iters: int = REFINE_ITERS,
    starts: int = REFINE_STARTS,
) -> DiscordResult:
    """Minimize the discord function over projective bases on ``measured``.

    A ``grid x grid`` scan over theta in [0, pi] and phi in [0, 2 pi) seeds Nelder-Mead
    runs from the ``starts`` lowest points. Ties on the grid go to the smallest
    (theta, phi). Raises :class:`NumericFailure` if no refinement run converges.
    """
    measured = check_side(measured)
    rho = validate_density_matrix(rho)
    if grid < 2 or refine_iters < 1:
        raise InvalidArgument("grid must be >= 2 and refine_iters >= 1")
    offset = _discord_offset(rho, measured)
    thetas = np.linspace(0.0, np.pi, grid)
    phis = 2 * np.pi * np.arange(grid) / grid
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = offset + _conditional_entropies(rho, measured, tt.ravel(), pp.ravel())
    order = np.argsort(values, kind="stable")

    best = DiscordResult(float(values[order[0]]), float(tt.ravel()[order[0]]), float(pp.ravel()[order[0]]), 0)
    if best.value <= 0.0:
        return DiscordResult(_clamp(best.value), best.theta, best.phi, 0)

    def objective(x: np.ndarray) -> float:
        return float(offset + _conditional_entropies(rho, measured, x[0], x[1])[0])

    step = np.array([thetas[1] - thetas[0], phis[1] - phis[0]])
    any_converged = False
    total_iters = 0
    for idx in order[:starts]:
        x0 = np.array([tt.ravel()[idx], pp.ravel()[idx]])
        simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "maxiter": refine_iters,
                "xatol": np.inf,
                "fatol": REFINE_FATOL,
            },
        )
        any_converged |= res.status == 0
        total_iters += int(res.nit)
        if res.fun < best.value:
            theta, phi = _canonical_angles(*res.x)
            best = DiscordResult(float(res.fun), theta, phi, 0)
    if not any_converged:
        raise NumericFailure(
            f"discord refinement did not converge within {refine_iters} iterations",
            best_value=max(best.value, 0.0),
        )
    return best._replace(value=_clamp(best.value), iterations=total_iters)


def discord(rho, measured: str, grid: int = GRID_SIZE, refine_iters: int = REFINE_ITERS) -> float:
    """Quantum discord with the projective measurement on qubit ``measured``."""
    return minimize_discord(rho, measured, grid, refine_iters).value


class DiscordVector(NamedTuple):
    """``d_xy``: measurement on B, D(X:Y). ``d_yx``: measurement on A, D(Y:X)."""

    d_xy: float
    d_yx: float

    def measured(self, side: str) -> float:
        return self.d_xy if check_side(side) == "B" else self.d_yx

    def is_zero(self, tol: float = DISCORD_ZERO_TOL) -> bool:
        return max(self) <= tol


def discord_vector(rho, grid: int = GRID_SIZE, refine_iters: int = REFINE_ITERS) -> DiscordVector:
    return DiscordVector(discord(rho, "B", grid, refine_iters), discord(rho, "A", grid, refine_iters))


def concurrence(rho, psd_tol: float = PSD_TOL) -> float:
    """Spin-flip concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the descending square roots of the spectrum of sqrt(rho) rho~ sqrt(rho),
    rho~ = (sy⊗sy) conj(rho) (sy⊗sy). They are taken as the singular values of
    M = sqrt(rho) (sy⊗sy) conj(sqrt(rho)), whose Gram matrix M M^dag is that product;
    square-rooting its eigenvalues would amplify round-off to ~1e-8 on rank-deficient states.
    """
    rho = validate_density_matrix(rho, psd_tol)
    root = psd_sqrt(rho, psd_tol)
    lam = np.linalg.svd(root @ _SY_SY @ root.conj(), compute_uv=False)
    return float(min(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0), 1.0))


def gw_threshold(k: float) -> float:
    """Mixing weight above which the generalized Werner state is entangled: (1+k^2)/(1+k^2+4k)."""
    k = float(k)
    if k < 0:
        raise InvalidArgument(f"k must be non-negative, got {k!r}")
    return (1 + k * k) / (1 + k * k + 4 * k)


def bisect_boundary(predicate: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-6) -> float:
    """Locate the point where ``predicate`` flips from False (at ``lo``) to True (at ``hi``)."""
    if predicate(lo) or not predicate(hi):
        raise NumericFailure(f"no sign change in [{lo:g}, {hi:g}]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


class Label(enum.Enum):
    ENTANGLED = "Entangled"
    LOCAL_QUANTUMNESS_ONLY = "LocalQuantumnessOnly"
    CLASSICAL_OR_PRODUCT = "ClassicalOrProduct"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Classification:
    label: Label
    is_entangled: bool
    discord: DiscordVector


def label_for(entangled: bool, discord: DiscordVector, zero_tol: float = DISCORD_ZERO_TOL) -> Label:
    if entangled:
        return Label.ENTANGLED
    if not discord.is_zero(zero_tol):
        return Label.LOCAL_QUANTUMNESS_ONLY
    return Label.CLASSICAL_OR_PRODUCT


def classify(
    rho,
    zero_tol: float = DISCORD_ZERO_TOL,
    psd_tol: float = PSD_TOL,
    grid: int = GRID_SIZE,
    refine_iters: int = REFINE_ITERS,
) -> Classification:
    """Entangled / separable with local quantumness / classical-or-product."""
    rho = validate_density_matrix(rho, psd_tol)
    entangled = is_entangled(rho, psd_tol)
    dv = discord_vector(rho, grid, refine_iters)
    return Classification(label_for(entangled, dv, zero_tol), entangled, dv)
