import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellqc import qsim
from bellqc.errors import ContractViolationError, InvalidInputError

from . import oracles

R2 = 1 / math.sqrt(2)
angles = st.floats(-10.0, 10.0, allow_nan=False)


def test_basis_constants_follow_pauli_convention():
    assert np.allclose(qsim.SIGMA3 @ qsim.KET0, qsim.KET0)
    assert np.allclose(qsim.SIGMA3 @ qsim.KET1, -qsim.KET1)
    assert np.allclose(qsim.SIGMA2, oracles.S2)


class TestPrepareEncodedState:
    def test_zero_phase_is_hadamard_on_zero(self):
        assert np.allclose(qsim.prepare_encoded_state(0.0), [R2, R2], atol=1e-15)

    def test_quarter_turn(self):
        expected = oracles.encoded(math.pi / 2)
        assert np.allclose(expected, [1j * R2, -1j * R2], atol=1e-15)
        assert np.allclose(qsim.prepare_encoded_state(math.pi / 2), expected, atol=1e-14)

    @pytest.mark.parametrize("phase", [-7.3, -1.0, 0.25, 3.0, 12.5])
    def test_matches_matrix_product(self, phase):
        s = qsim.prepare_encoded_state(phase)
        assert np.allclose(s, oracles.encoded(phase), atol=1e-13)
        assert abs(np.vdot(s, s).real - 1) < 1e-12

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(InvalidInputError):
            qsim.prepare_encoded_state(bad)


class TestSu2Rotate:
    def test_identity(self, rng):
        s = oracles.random_states(rng, 1, 2)[0]
        assert np.allclose(qsim.su2_rotate(s, 0, 0, 0), s, atol=1e-15)

    def test_half_y_turn_sends_zero_to_minus_one(self):
        expected = oracles.rotation((0, math.pi / 2, 0)) @ oracles.KET0
        assert np.allclose(expected, [0, -1], atol=1e-15)
        assert np.allclose(qsim.su2_rotate(qsim.KET0, 0, math.pi / 2, 0), expected, atol=1e-15)

    def test_matches_expm(self, rng):
        for _ in range(50):
            theta = rng.uniform(-4, 4, 3)
            s = oracles.random_states(rng, 1, 2)[0]
            assert np.allclose(qsim.su2_rotate(s, *theta), oracles.rotation(theta) @ s, atol=1e-13)

    def test_rejects_unnormalized_state(self):
        with pytest.raises(ContractViolationError):
            qsim.su2_rotate([1.0, 1.0], 0, 0, 0)


def test_unitarity_over_many_draws(rng):
    n = 10_000
    states = oracles.random_states(rng, n, 2)
    thetas = rng.uniform(-2 * math.pi, 2 * math.pi, size=(n, 3))
    phases = rng.uniform(-20, 20, size=n)
    worst = 0.0
    for s, th, ph in zip(states, thetas, phases):
        out = qsim.su2_rotate(s, *th)
        enc = qsim.prepare_encoded_state(ph)
        worst = max(worst, abs(np.vdot(out, out).real - 1), abs(np.vdot(enc, enc).real - 1))
    assert worst < 1e-12


def test_gates_are_unitary(rng):
    for _ in range(100):
        U = qsim.su2_matrix(*rng.uniform(-5, 5, 3))
        assert np.max(np.abs(U.conj().T @ U - np.eye(2))) < 1e-12


class TestProbMinus:
    def test_eigenstate(self):
        assert qsim.prob_minus(qsim.KET1) == 1.0

    def test_equal_superposition(self):
        assert qsim.prob_minus([R2, R2]) == pytest.approx(0.5, abs=1e-15)

    def test_phased_superposition(self):
        s = [1j * R2, -1j * R2]
        assert qsim.prob_minus(s) == pytest.approx(abs(s[1]) ** 2, abs=1e-15)
        assert qsim.prob_minus(s) == pytest.approx(0.5, abs=1e-15)

    def test_complement(self, rng):
        s = oracles.random_states(rng, 1, 2)[0]
        assert qsim.prob_plus(s) + qsim.prob_minus(s) == pytest.approx(1.0, abs=1e-15)


class TestBellOperator:
    def test_matches_kronecker_oracle(self):
        assert np.allclose(qsim.bell_operator(), oracles.bell_matrix(), atol=1e-15)

    def test_off_diagonal_entry(self):
        B = qsim.bell_operator()
        assert oracles.bell_matrix()[1, 2].real == pytest.approx(2 * math.sqrt(2))
        assert B[1, 2] == pytest.approx(2 * math.sqrt(2), abs=1e-15)

    def test_zero_diagonal(self):
        assert np.all(np.diag(oracles.bell_matrix()) == 0)
        assert np.all(np.diag(qsim.bell_operator()) == 0)

    def test_hermitian_and_spectrum(self):
        B = qsim.bell_operator()
        assert qsim.is_hermitian(B)
        eig = np.linalg.eigvalsh(B)
        t = 2 * math.sqrt(2)
        assert all(min(abs(e - t), abs(e), abs(e + t)) < 1e-12 for e in eig)

    def test_returns_a_copy(self):
        B = qsim.bell_operator()
        B[0, 0] = 99
        assert qsim.bell_operator()[0, 0] == 0


class TestExpectation:
    def test_bell_state_reaches_tsirelson(self):
        s = np.array([0, 1, 1, 0]) / math.sqrt(2)
        assert qsim.expectation(qsim.bell_operator(), s) == pytest.approx(2 * math.sqrt(2), abs=1e-12)

    def test_product_zero_state(self):
        s = np.array([1, 0, 0, 0])
        assert oracles.bell_value(s) == 0
        assert qsim.expectation(qsim.bell_operator(), s) == 0

    def test_identity_gives_norm(self, rng):
        s = oracles.random_states(rng, 1, 4)[0]
        assert qsim.expectation(np.eye(4), s) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_hermitian(self, rng):
        op = np.zeros((4, 4), dtype=complex)
        op[0, 1] = 1.0
        with pytest.raises(ContractViolationError):
            qsim.expectation(op, oracles.random_states(rng, 1, 4)[0])

    def test_rejects_wrong_shape(self):
        with pytest.raises(InvalidInputError):
            qsim.expectation(np.eye(2), [1, 0, 0, 0])

    def test_matches_oracle(self, rng):
        B = qsim.bell_operator()
        for s in oracles.random_states(rng, 200, 4):
            assert qsim.expectation(B, s) == pytest.approx(oracles.bell_value(s).real, abs=1e-12)


def test_tsirelson_bound_over_random_states(rng):
    B = qsim.bell_operator()
    states = oracles.random_states(rng, 10_000, 4)
    values = np.array([qsim.expectation(B, s) for s in states])
    assert np.all(np.abs(values) <= 2 * math.sqrt(2) + 1e-9)


def test_expectation_realness_random_hermitian(rng):
    for _ in range(500):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        op = (A + A.conj().T) / 2
        s = oracles.random_states(rng, 1, 4)[0]
        assert abs(np.vdot(s, op @ s).imag) < 1e-10
        qsim.expectation(op, s)


@settings(max_examples=200, deadline=None)
@given(
    re=st.lists(st.floats(-1, 1), min_size=4, max_size=4),
    im=st.lists(st.floats(-1, 1), min_size=4, max_size=4),
    phi=angles,
)
def test_global_phase_invariance(re, im, phi):
    z = np.array(re) + 1j * np.array(im)
    n = np.linalg.norm(z)
    if n < 1e-3:
        return
    s4 = z / n
    s2 = z[:2] / np.linalg.norm(z[:2]) if np.linalg.norm(z[:2]) > 1e-3 else np.array([1, 0])
    g = np.exp(1j * phi)
    B = qsim.bell_operator()
    assert abs(qsim.expectation(B, g * s4) - qsim.expectation(B, s4)) < 1e-12
    assert abs(qsim.prob_minus(g * s2) - qsim.prob_minus(s2)) < 1e-12
