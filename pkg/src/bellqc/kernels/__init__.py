"""Batched hot-path kernels for the classifier and the Bell cost.

Two interchangeable implementations exist: numba-compiled loops (``_numba``)
and vectorized numpy (``_numpy``).  numba is used when importable unless the
environment variable ``BELLQC_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.  ``BACKEND`` names the active one.

All kernels take a feature matrix ``X`` of shape ``(n, d)``, weights ``w`` of
shape ``(d,)`` and the 2x2 complex rotation ``U``; ``pair_bell`` also takes the
4x4 Bell operator ``B`` and returns the per-pair matrix expectation.
"""

import os

import numpy as np

from . import _numpy


def _numba_requested():
    flag = os.environ.get("BELLQC_DISABLE_NUMBA", "")
    return flag in ("", "0")


_impl = _numpy
BACKEND = "numpy"
if _numba_requested():
    try:
        from . import _numba as _impl  # noqa: F811

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is optional
        _impl = _numpy


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def embed_phases(X, w):
    return _impl.embed_phases(_f64(X), _f64(w))


def batch_amplitudes(X, w, U):
    return _impl.batch_amplitudes(_f64(X), _f64(w), _c128(U))


def batch_prob_minus(X, w, U):
    return _impl.batch_prob_minus(_f64(X), _f64(w), _c128(U))


def pair_bell(Xp, Xm, w, U, B):
    return _impl.pair_bell(_f64(Xp), _f64(Xm), _f64(w), _c128(U), _c128(B))


def implementations():
    """Map of backend name to implementation module, for tests and benchmarks."""
    impls = {"numpy": _numpy}
    try:
        from . import _numba

        impls["numba"] = _numba
    except ImportError:  # pragma: no cover
        pass
    return impls
