import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcorr import states
from qcorr.errors import InvalidArgument, NotPositiveSemidefinite
from qcorr.qlinalg import SX, SY, SZ

probs = st.floats(min_value=0.0, max_value=1.0)
reals = st.floats(min_value=-3.0, max_value=3.0)
SWAP = np.eye(4)[[0, 2, 1, 3]]


def assert_density_matrix(rho, tol=1e-10):
    assert np.max(np.abs(rho - rho.conj().T)) <= tol
    assert abs(np.trace(rho) - 1) <= tol
    assert np.linalg.eigvalsh(rho)[0] >= -tol


def proj(psi):
    return np.outer(psi, psi.conj())


def test_bloch_ket_poles_and_equator():
    np.testing.assert_allclose(states.bloch_ket(0, 0), [1, 0])
    psi = states.bloch_ket(np.pi, 0)
    assert abs(abs(np.vdot([0, 1], psi)) - 1) < 1e-12
    np.testing.assert_allclose(states.bloch_ket(np.pi / 2, 0), states.PLUS, atol=1e-12)


@given(reals, reals)
def test_bloch_ket_normalized(theta, phi):
    assert abs(np.linalg.norm(states.bloch_ket(theta, phi)) - 1) < 1e-12


def test_rho_a_is_pure():
    rho = states.rho_abc("a")
    assert abs(np.trace(rho @ rho) - 1) < 1e-12
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 1


def test_rho_b_degenerate_mixture():
    pp = proj(np.kron(states.PLUS, states.PLUS))
    np.testing.assert_allclose(states.rho_abc("b", 1), pp, atol=1e-12)


def test_rho_c_spectrum_from_gram_matrix():
    kets = [np.kron(states.PLUS, states.PLUS), np.kron(states.KET0, states.KET0)]
    w = np.array([0.5, 0.5])
    gram = np.array([[np.vdot(a, b) for b in kets] for a in kets])
    expected = np.linalg.eigvalsh(np.sqrt(np.outer(w, w)) * gram)
    np.testing.assert_allclose(expected, [0.25, 0.75], atol=1e-12)
    spectrum = np.sort(np.linalg.eigvalsh(states.rho_abc("c", 0.5)))
    np.testing.assert_allclose(spectrum, [0, 0, 0.25, 0.75], atol=1e-12)


@pytest.mark.parametrize("which,mix", [("b", 1.5), ("c", -0.1), ("d", 0.5), ("b", None)])
def test_rho_abc_rejects(which, mix):
    with pytest.raises(InvalidArgument):
        states.rho_abc(which, mix)


def test_rho_1234_examples():
    np.testing.assert_allclose(states.rho_1234(1, 0.5), np.diag([0.5, 0, 0, 0.5]), atol=1e-12)
    np.testing.assert_allclose(
        states.rho_1234(4, 1), proj(np.kron(states.PLUS, states.PLUS)), atol=1e-12
    )
    assert np.linalg.matrix_rank(states.rho_1234(2, 0.5), tol=1e-10) == 2


@pytest.mark.parametrize("which,p", [(5, 0.5), (0, 0.5), (1, 1.01), (2, -0.5)])
def test_rho_1234_rejects(which, p):
    with pytest.raises(InvalidArgument):
        states.rho_1234(which, p)


@given(probs)
def test_rho2_rho3_are_swaps(p):
    np.testing.assert_allclose(SWAP @ states.rho_1234(2, p) @ SWAP, states.rho_1234(3, p), atol=1e-12)


def test_werner_examples():
    np.testing.assert_allclose(states.werner(0), np.eye(4) / 4, atol=1e-12)
    np.testing.assert_allclose(states.werner(1), states.bell(), atol=1e-12)
    spectrum = np.linalg.eigvalsh(states.werner(0.5))
    np.testing.assert_allclose(spectrum, [0.125, 0.125, 0.125, 0.625], atol=1e-12)


@pytest.mark.parametrize("p", [-0.01, 1.01, np.nan])
def test_werner_rejects(p):
    with pytest.raises(InvalidArgument):
        states.werner(p)


def pauli_form(p):
    # I/4 + (p/4)(XX - YY + ZZ)
    return np.eye(4) / 4 + p / 4 * (np.kron(SX, SX) - np.kron(SY, SY) + np.kron(SZ, SZ))


def test_werner_pauli_expansion():
    for p in np.linspace(0, 1, 11):
        np.testing.assert_allclose(states.werner(p), pauli_form(p), atol=1e-12)


def test_decomposition_at_zero_and_boundary():
    comps = states.werner_separable_decomposition(0)
    np.testing.assert_allclose(states.mix(comps), states.werner(0), atol=1e-12)
    assert comps[0].weight == 1 and all(c.weight == 0 for c in comps[1:])

    comps = states.werner_separable_decomposition(1 / 3)
    assert len(comps) == 7
    assert comps[0].weight == 0
    np.testing.assert_allclose([c.weight for c in comps[1:]], [1 / 6] * 6, atol=1e-15)


def test_decomposition_matches_pauli_form():
    comps = states.werner_separable_decomposition(0.2)
    assert abs(sum(c.weight for c in comps) - 1) < 1e-12
    assembled = states.mix(comps)
    assert np.max(np.abs(assembled - pauli_form(0.2))) < 1e-12
    assert np.max(np.abs(assembled - states.werner(0.2))) < 1e-12


def test_decomposition_components_are_product_states():
    for c in states.werner_separable_decomposition(0.1)[1:]:
        # a 4x4 pure product state has rank-1 reshuffled amplitude matrix
        w, v = np.linalg.eigh(c.state)
        psi = v[:, -1].reshape(2, 2)
        assert np.linalg.matrix_rank(psi, tol=1e-10) == 1


def test_decomposition_rejects_above_one_third():
    with pytest.raises(InvalidArgument, match="p <= 1/3"):
        states.werner_separable_decomposition(0.35)


def test_generalized_werner_reduces_to_werner():
    for p in np.linspace(0, 1, 11):
        np.testing.assert_allclose(states.generalized_werner(p, 0, 1), states.werner(p), atol=1e-12)


@given(probs, reals)
def test_generalized_werner_k0_is_ppt(p, n):
    rho = states.generalized_werner(p, n, 0)
    pt = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    assert np.linalg.eigvalsh(pt)[0] >= -1e-12


def test_generalized_werner_example():
    assert_density_matrix(states.generalized_werner(0.9, 0.7, 0.5))


@pytest.mark.parametrize("kwargs", [dict(p=1.2), dict(p=0.5, k=-1), dict(p=0.5, k=1j)])
def test_generalized_werner_rejects(kwargs):
    with pytest.raises(InvalidArgument):
        states.generalized_werner(**kwargs)


def test_rotated_basis_orthonormal():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = complex(*rng.normal(scale=2, size=2))
        plus_n, minus_n = states.rotated_kets(n)
        assert abs(np.vdot(plus_n, minus_n)) < 1e-12
        assert abs(np.linalg.norm(plus_n) - 1) < 1e-12
        assert abs(np.linalg.norm(minus_n) - 1) < 1e-12


@settings(max_examples=100, deadline=None)
@given(probs, reals, reals, st.floats(min_value=0, max_value=5))
def test_generalized_werner_local_unitary_structure(p, nre, nim, k):
    n = complex(nre, nim)
    u = np.kron(states.rotation_unitary(n), states.rotation_unitary(n))
    expected = u @ states.generalized_werner(p, 0, k) @ u.conj().T
    np.testing.assert_allclose(states.generalized_werner(p, n, k), expected, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from("bc"), probs)
def test_rho_abc_invariants(which, mix):
    assert_density_matrix(states.rho_abc(which, mix))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([1, 2, 3, 4]), probs)
def test_rho_1234_invariants(which, p):
    assert_density_matrix(states.rho_1234(which, p))


@settings(max_examples=100, deadline=None)
@given(probs, reals, reals, st.floats(min_value=0, max_value=10))
def test_generalized_werner_invariants(p, nre, nim, k):
    assert_density_matrix(states.generalized_werner(p, complex(nre, nim), k))


def test_mix_examples():
    rho = states.werner(0.3)
    np.testing.assert_allclose(states.mix([(1, rho)]), rho)
    e00, e11 = np.diag([1.0, 0, 0, 0]), np.diag([0, 0, 0, 1.0])
    np.testing.assert_allclose(states.mix([(0.5, e00), (0.5, e11)]), states.rho_1234(1, 0.5))


@pytest.mark.parametrize(
    "components",
    [
        [(0.5, np.eye(4) / 4)],
        [(1.5, np.eye(4) / 4), (-0.5, np.eye(4) / 4)],
        [],
        [(0.5, np.eye(4) / 4), (0.5, np.eye(2) / 2)],
    ],
)
def test_mix_rejects(components):
    with pytest.raises(InvalidArgument):
        states.mix(components)


def test_validate_density_matrix_rejects():
    with pytest.raises(InvalidArgument):
        states.validate_density_matrix(np.eye(4) / 2)
    with pytest.raises(NotPositiveSemidefinite):
        states.validate_density_matrix(np.diag([1.2, -0.2, 0, 0]))
    with pytest.raises(InvalidArgument):
        states.validate_density_matrix(np.eye(3) / 3)


def test_ket_validation():
    with pytest.raises(InvalidArgument):
        states.ket([1, 1])
    with pytest.raises(InvalidArgument):
        states.ket([1, 0, 0])


def test_load_density_matrix_round_trip():
    rho = states.generalized_werner(0.6, 0.3 + 0.2j, 0.8)
    text = " ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in rho.ravel())
    np.testing.assert_allclose(states.load_density_matrix(text), rho, atol=1e-15)
    with pytest.raises(InvalidArgument):
        states.load_density_matrix("1 0 0")
    with pytest.raises(InvalidArgument):
        states.load_density_matrix("x " * 32)
