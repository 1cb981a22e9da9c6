"""Exact statevector arithmetic for one and two qubits.

States are plain ``complex128`` numpy arrays: length 2 for a single qubit and
length 4 for the (sample, label) register.  Two-qubit amplitudes are ordered
``|q_sample q_label>`` so index ``2*s + l`` holds ``|s l>``::

    [|00>, |01>, |10>, |11>]

Measurement outcomes follow the usual Pauli convention, ``sigma3|0> = +|0>``
and ``sigma3|1> = -|1>``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ContractViolationError, InvalidInputError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
IMAG_TOL = 1e-10

SQRT2 = math.sqrt(2.0)
TSIRELSON = 2.0 * SQRT2

I2 = np.eye(2, dtype=np.complex128)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / SQRT2

KET0 = np.array([1, 0], dtype=np.complex128)
KET1 = np.array([0, 1], dtype=np.complex128)


def _check_finite_angle(value, name):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


def as_state(amps, n_qubits=None):
    """Validate ``amps`` as a unit-norm pure state and return a complex copy."""
    s = np.array(amps, dtype=np.complex128).reshape(-1)
    if s.size not in (2, 4):
        raise InvalidInputError(f"state must have 2 or 4 amplitudes, got {s.size}")
    if n_qubits is not None and s.size != 2**n_qubits:
        raise InvalidInputError(f"expected a {n_qubits}-qubit state, got {s.size} amplitudes")
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("state amplitudes must be finite")
    norm2 = float(np.vdot(s, s).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ContractViolationError(f"state is not unit norm (|s|^2 = {norm2!r})")
    return s


def phase_z(alpha):
    """``exp(i sigma3 alpha)``, diagonal."""
    alpha = _check_finite_angle(alpha, "alpha")
    return np.array(
        [[np.exp(1j * alpha), 0], [0, np.exp(-1j * alpha)]], dtype=np.complex128
    )


def rot_y(alpha):
    """``exp(i sigma2 alpha) = [[cos, sin], [-sin, cos]]``."""
    alpha = _check_finite_angle(alpha, "alpha")
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


def su2_matrix(theta1, theta2, theta3):
    """The rotation ``exp(i s3 t3) exp(i s2 t2) exp(i s3 t1)`` as one 2x2 matrix."""
    return phase_z(theta3) @ rot_y(theta2) @ phase_z(theta1)


def apply_gate(gate, state):
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise InvalidInputError(f"single-qubit gate must be 2x2, got {gate.shape}")
    return gate @ as_state(state, 1)


def prepare_encoded_state(phase):
    """Encode a scalar phase as ``exp(i sigma3 phase) H |0>``.

    >>> prepare_encoded_state(0.0)
    array([0.70710678+0.j, 0.70710678+0.j])
    """
    phase = _check_finite_angle(phase, "phase")
    return np.array(
        [np.exp(1j * phase), np.exp(-1j * phase)], dtype=np.complex128
    ) / SQRT2


def su2_rotate(state, theta1, theta2, theta3):
    """Apply ``exp(i s3 t3) exp(i s2 t2) exp(i s3 t1)`` to a one-qubit state."""
    return su2_matrix(theta1, theta2, theta3) @ as_state(state, 1)


def prob_minus(state):
    """Probability of the ``sigma3 = -1`` outcome, i.e. ``|<1|s>|^2``."""
    s = as_state(state, 1)
    return float(abs(s[1]) ** 2)


def prob_plus(state):
    return 1.0 - prob_minus(state)


def is_hermitian(op, tol=HERMITIAN_TOL):
    op = np.asarray(op)
    return op.ndim == 2 and op.shape[0] == op.shape[1] and bool(
        np.max(np.abs(op - op.conj().T)) <= tol
    )


def expectation(op, state):
    """Real expectation ``<s|op|s>`` of a Hermitian two-qubit operator.

    Raises ``ContractViolationError`` if ``op`` is not Hermitian or the
    imaginary residue exceeds ``IMAG_TOL``.
    """
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (4, 4):
        raise InvalidInputError(f"two-qubit operator must be 4x4, got {op.shape}")
    if not is_hermitian(op):
        raise ContractViolationError("operator is not Hermitian")
    s = as_state(state, 2)
    value = np.vdot(s, op @ s)
    if abs(value.imag) >= IMAG_TOL:
        raise ContractViolationError(
            f"expectation has imaginary residue {value.imag!r}"
        )
    return float(value.real)


_BELL = SQRT2 * (np.kron(SIGMA1, SIGMA1) + np.kron(SIGMA2, SIGMA2))
_BELL.setflags(write=False)


def bell_operator():
    """CHSH operator ``sqrt(2) (s1 x s1 + s2 x s2)`` with eigenvalues in {-2*sqrt2, 0, 2*sqrt2}."""
    return _BELL.copy()
