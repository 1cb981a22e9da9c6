"""Vectorized numpy kernels (reference path, always available)."""

import numpy as np

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def embed_phases(X, w):
    return X @ w


def batch_amplitudes(X, w, U):
    phase = X @ w
    enc = np.empty((X.shape[0], 2), dtype=np.complex128)
    enc[:, 0] = np.exp(1j * phase) * _INV_SQRT2
    enc[:, 1] = np.exp(-1j * phase) * _INV_SQRT2
    return enc @ U.T


def batch_prob_minus(X, w, U):
    amps = batch_amplitudes(X, w, U)
    return amps[:, 1].real ** 2 + amps[:, 1].imag ** 2


def pair_bell(Xp, Xm, w, U, B):
    a = batch_amplitudes(Xp, w, U)
    b = batch_amplitudes(Xm, w, U)
    psi = np.empty((a.shape[0], 4), dtype=np.complex128)
    psi[:, 0] = a[:, 0] * _INV_SQRT2
    psi[:, 1] = b[:, 0] * _INV_SQRT2
    psi[:, 2] = a[:, 1] * _INV_SQRT2
    psi[:, 3] = b[:, 1] * _INV_SQRT2
    return np.einsum("ij,jk,ik->i", psi.conj(), B, psi).real
