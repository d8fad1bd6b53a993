"""Random ensembles and independent oracles used across the test suite."""

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

ACCEPTANCE_LINES: list[str] = []


def random_density_matrix(rng, dim=4, rank=None):
    """Hilbert-Schmidt (Ginibre) random state, optionally rank-deficient."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim=2):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (x + x.conj().T) / 2


def charpoly_roots(h):
    """Eigenvalues as roots of the characteristic polynomial (Faddeev-LeVerrier + companion matrix)."""
    n = h.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(h)
    for k in range(1, n + 1):
        m = h @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(h @ m) / k)
    return np.sort(np.roots(coeffs).real)


def _binary_entropy_of_bloch(r):
    lam = np.clip((1 + r) / 2, 0.0, 1.0)
    out = np.zeros_like(lam)
    for x in (lam, 1 - lam):
        mask = x > 0
        out[mask] -= x[mask] * np.log2(x[mask])
    return out


def correlation_data(rho):
    a = np.array([np.trace(rho @ np.kron(s, np.eye(2))).real for s in PAULI])
    b = np.array([np.trace(rho @ np.kron(np.eye(2), s)).real for s in PAULI])
    t = np.array([[np.trace(rho @ np.kron(si, sj)).real for sj in PAULI] for si in PAULI])
    return a, b, t


def oracle_discord_function(rho, measured, theta, phi):
    """Discord function via Bloch vectors and the correlation matrix.

    Measuring B along unit vector m gives outcome probabilities (1 +- b.m)/2 and
    conditional Bloch vectors (a +- T m)/(1 +- b.m) on A; measuring A mirrors this.
    """
    a, b, t = correlation_data(rho)
    if measured == "A":
        a, b, t = b, a, t.T
    theta = np.asarray(theta, float)
    phi = np.asarray(phi, float)
    m = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    bm = m @ b
    tm = m @ t.T
    cond = np.zeros(theta.shape)
    for sign in (1, -1):
        prob = (1 + sign * bm) / 2
        safe = np.where(prob > 1e-14, prob, 1.0)
        r = np.linalg.norm(a + sign * tm, axis=-1) / (2 * safe)
        cond += np.where(prob > 1e-14, prob * _binary_entropy_of_bloch(np.clip(r, 0, 1)), 0.0)
    joint = np.linalg.eigvalsh(rho)
    joint = joint[joint > 1e-15]
    s_joint = -np.sum(joint * np.log2(joint))
    s_measured = _binary_entropy_of_bloch(np.array([np.linalg.norm(b)]))[0]
    return s_measured - s_joint + cond


def oracle_discord(rho, measured, n_grid=1024, chunk=128):
    """Minimum of the discord function over an n_grid x n_grid (theta, phi) grid."""
    thetas = np.linspace(0, np.pi, n_grid)
    phis = 2 * np.pi * np.arange(n_grid) / n_grid
    best = np.inf
    for start in range(0, n_grid, chunk):
        tt, pp = np.meshgrid(thetas[start:start + chunk], phis, indexing="ij")
        best = min(best, float(np.min(oracle_discord_function(rho, measured, tt, pp))))
    return best


def werner_discord_closed_form(p):
    """Discord of the Werner state from its Bell-diagonal form (|c_i| = p for all i)."""
    def xlog(x):
        return x * np.log2(x) if x > 0 else 0.0

    return xlog(1 - p) / 4 - xlog(1 + p) / 2 + xlog(1 + 3 * p) / 4


def binary_entropy(x):
    return float(-sum(v * np.log2(v) for v in (x, 1 - x) if v > 0))
