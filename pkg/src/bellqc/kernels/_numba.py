"""numba-compiled kernels; same signatures and semantics as ``_numpy``."""

import numpy as np
from numba import njit

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@njit(cache=True)
def embed_phases(X, w):
    n, d = X.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(d):
            acc += X[i, j] * w[j]
        out[i] = acc
    return out


@njit(cache=True)
def _rotated(phase, U):
    e0 = np.exp(1j * phase) * _INV_SQRT2
    e1 = np.exp(-1j * phase) * _INV_SQRT2
    return U[0, 0] * e0 + U[0, 1] * e1, U[1, 0] * e0 + U[1, 1] * e1


@njit(cache=True)
def batch_amplitudes(X, w, U):
    phase = embed_phases(X, w)
    n = X.shape[0]
    out = np.empty((n, 2), dtype=np.complex128)
    for i in range(n):
        out[i, 0], out[i, 1] = _rotated(phase[i], U)
    return out


@njit(cache=True)
def batch_prob_minus(X, w, U):
    phase = embed_phases(X, w)
    n = X.shape[0]
    out = np.empty(n)
    for i in range(n):
        _, s1 = _rotated(phase[i], U)
        out[i] = s1.real * s1.real + s1.imag * s1.imag
    return out


@njit(cache=True)
def pair_bell(Xp, Xm, w, U, B):
    pp = embed_phases(Xp, w)
    pm = embed_phases(Xm, w)
    m = Xp.shape[0]
    out = np.empty(m)
    psi = np.empty(4, dtype=np.complex128)
    for i in range(m):
        a0, a1 = _rotated(pp[i], U)
        b0, b1 = _rotated(pm[i], U)
        psi[0] = a0 * _INV_SQRT2
        psi[1] = b0 * _INV_SQRT2
        psi[2] = a1 * _INV_SQRT2
        psi[3] = b1 * _INV_SQRT2
        acc = 0.0 + 0.0j
        for j in range(4):
            row = 0.0 + 0.0j
            for k in range(4):
                row += B[j, k] * psi[k]
            acc += np.conj(psi[j]) * row
        out[i] = acc.real
    return out
