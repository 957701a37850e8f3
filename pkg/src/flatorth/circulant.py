"""Circulant matrices and their spectra.

A circulant row ``x`` of length ``n`` generates the matrix with entry
``(i, j) = x[(j - i) % n]``.  Transforms use the positive exponent
``X[k] = sum_j x[j] exp(+2 pi i j k / n)`` without normalisation; that
matrix is orthogonal exactly when every ``|X[k]| = 1``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DimensionError, PreconditionError
from .linalg import as_matrix
from .numtheory import is_prime


def as_row(x) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError(f"expected a non-empty 1-D row, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("row has non-finite entries")
    return a


def dft(x) -> np.ndarray:
    """Positive-exponent DFT of ``x`` (length-``n`` complex vector)."""
    a = np.asarray(x)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("dft needs a non-empty 1-D vector")
    return a.size * np.fft.ifft(a)


def dft_naive(x, chunk: int = 256) -> np.ndarray:
    """O(n^2) reference transform.  Phases use ``(j*k) mod n`` so they stay exact."""
    a = np.asarray(x)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("dft needs a non-empty 1-D vector")
    n = a.size
    j = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    for start in range(0, n, chunk):
        k = np.arange(start, min(n, start + chunk), dtype=np.int64)
        phase = (k[:, None] * j[None, :]) % n
        out[start:start + k.size] = np.exp(2j * np.pi * phase / n) @ a
    return out


def circulant_matrix(x) -> np.ndarray:
    x = as_row(x)
    n = x.size
    idx = np.arange(n)
    return x[(idx[None, :] - idx[:, None]) % n]


def is_circulant_orthogonal(x, tol: float = 1e-10) -> bool:
    moduli = np.abs(dft(as_row(x)))
    return bool(np.all(np.abs(moduli - 1.0) <= tol))


def spectral_defect(x) -> float:
    """``max_k | |X[k]| - 1 |``."""
    return float(np.max(np.abs(np.abs(dft(as_row(x))) - 1.0)))


@lru_cache(maxsize=256)
def _character(p: int) -> np.ndarray:
    if p < 3 or not is_prime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    v = -np.ones(p)
    v[np.arange(1, p, dtype=np.int64) ** 2 % p] = 1.0
    v[0] = 0.0
    v.flags.writeable = False
    return v


def character_vector(p: int) -> np.ndarray:
    """Quadratic character of ``Z_p``: ``v[0] = 0``, ``v[j] = legendre(j, p)``."""
    return _character(p).copy()


def flatness_at_roots(x) -> tuple[float, float]:
    """Min and max of ``|sum_j x_j w^(jk)|`` over the n-th roots of unity ``w^k``."""
    moduli = np.abs(dft(as_row(x)))
    return float(moduli.min()), float(moduli.max())


def detect_circulant(m, tol: float = 1e-12) -> np.ndarray | None:
    """First row of ``m`` if ``m`` is circulant (this orientation), else ``None``."""
    a = as_matrix(m)
    row = a[0].copy()
    if np.max(np.abs(circulant_matrix(row) - a)) <= tol:
        return row
    return None
