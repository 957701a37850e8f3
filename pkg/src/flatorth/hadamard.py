"""Hadamard matrices: Sylvester, Paley I, regular order-4^m families,
standard form, and recovery of a Hadamard matrix from the signs of a
sufficiently flat orthogonal matrix.

Sign matrices are ``int8`` arrays with entries exactly ``+1`` or ``-1``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import (
    FlatnessInsufficientError,
    InternalContradictionError,
    PreconditionError,
    UnsupportedDimensionError,
)
from .linalg import ORTHO_TOL, as_matrix, gram_defect
from .numtheory import is_prime, legendre

F2 = np.array([[1, 1], [1, -1]], dtype=np.int8)
REGULAR_SEED = np.array(
    [[1, 1, 1, -1],
     [1, 1, -1, 1],
     [1, -1, 1, 1],
     [-1, 1, 1, 1]], dtype=np.int8)


def _kron_power(base: np.ndarray, r: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.int8)
    for _ in range(r):
        out = np.kron(out, base).astype(np.int8)
    return out


def sylvester(r: int) -> np.ndarray:
    """Hadamard matrix of order ``2**r``."""
    if r < 0:
        raise PreconditionError("r must be >= 0")
    return _kron_power(F2, r)


def paley_I(p: int) -> np.ndarray:
    """Paley type I Hadamard matrix of order ``p + 1`` for a prime ``p = 3 (mod 4)``.

    Border of ``+1`` (corner included); core ``q[i, j] = legendre(i - j, p)``
    with ``-1`` on the diagonal.
    """
    if not is_prime(p) or p % 4 != 3:
        raise PreconditionError(f"paley_I needs a prime p = 3 (mod 4), got {p}")
    chi = np.array([legendre(k, p) for k in range(p)], dtype=np.int8)
    idx = np.arange(p)
    core = chi[(idx[:, None] - idx[None, :]) % p]
    core[idx, idx] = -1
    h = np.ones((p + 1, p + 1), dtype=np.int8)
    h[1:, 1:] = core
    return h


def regular_hadamard(m: int) -> np.ndarray:
    """Regular Hadamard matrix of order ``4**m``; every row and column sums to ``2**m``."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    return _kron_power(REGULAR_SEED, m)


def is_hadamard(s) -> bool:
    s = np.asarray(s)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] == 0:
        return False
    if not np.all(np.abs(s) == 1):
        return False
    n = s.shape[0]
    si = s.astype(np.int64)
    return bool(np.array_equal(si @ si.T, n * np.eye(n, dtype=np.int64)))


def standardize(h) -> np.ndarray:
    """Flip row and column signs so the first row and column are all ``+1``."""
    h = np.asarray(h)
    if not is_hadamard(h):
        raise PreconditionError("standardize needs a Hadamard matrix")
    out = (h * h[:, :1]).astype(np.int8)
    return (out * out[:1, :]).astype(np.int8)


@lru_cache(maxsize=None)
def _hadamard_recipe(n: int):
    """Recipe tuple for a Hadamard matrix of order ``n``, or ``None``."""
    if n < 1:
        return None
    if n & (n - 1) == 0:
        return ("sylvester", n.bit_length() - 1)
    if n % 4:
        return None
    if is_prime(n - 1) and (n - 1) % 4 == 3:
        return ("paley_I", n - 1)
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            left, right = _hadamard_recipe(d), _hadamard_recipe(n // d)
            if left is not None and right is not None:
                return ("kron", left, right)
    return None


def hadamard_available(n: int) -> bool:
    """Whether :func:`hadamard_of_order` can build order ``n``."""
    return _hadamard_recipe(n) is not None


def _build(recipe) -> np.ndarray:
    kind = recipe[0]
    if kind == "sylvester":
        return sylvester(recipe[1])
    if kind == "paley_I":
        return paley_I(recipe[1])
    return np.kron(_build(recipe[1]), _build(recipe[2])).astype(np.int8)


def describe_recipe(recipe) -> str:
    if recipe[0] == "kron":
        return f"kron({describe_recipe(recipe[1])}, {describe_recipe(recipe[2])})"
    return f"{recipe[0]}({recipe[1]})"


def hadamard_of_order(n: int) -> tuple[np.ndarray, str]:
    """A Hadamard matrix of order ``n`` from Sylvester, Paley I and Kronecker
    products of those, with a string naming how it was built."""
    recipe = _hadamard_recipe(n)
    if recipe is None:
        raise UnsupportedDimensionError(f"no Hadamard matrix of order {n} is constructible here")
    return _build(recipe), describe_recipe(recipe)


def envelope_epsilon(m) -> float:
    """Smallest ``eps`` with ``(1-eps)/n <= m_ij**2 <= (1+eps)/n`` for all entries."""
    a = as_matrix(m)
    n = a.shape[0]
    sq = a * a * n
    return float(max(1.0 - sq.min(), sq.max() - 1.0))


def extraction_threshold(n: int) -> float:
    """Envelope width below which the sign pattern must be Hadamard."""
    return (1.0 if n % 2 else 2.0) / n


def extract_hadamard(m) -> np.ndarray:
    """Sign matrix of an orthogonal matrix flat enough to force it to be Hadamard.

    Raises :class:`FlatnessInsufficientError` when the observed envelope is
    not strictly below ``1/n`` (odd ``n``) or ``2/n`` (even ``n``), and
    :class:`InternalContradictionError` if a qualifying input nevertheless
    yields a non-Hadamard sign pattern.
    """
    a = as_matrix(m)
    n = a.shape[0]
    defect = gram_defect(a)
    if defect > ORTHO_TOL:
        raise PreconditionError(f"matrix is not orthogonal (gram defect {defect:.3e})")
    eps = envelope_epsilon(a)
    limit = extraction_threshold(n)
    if not eps < limit:
        raise FlatnessInsufficientError(
            f"envelope {eps:.6g} is not below {limit:.6g} for n={n}")
    s = np.where(a > 0, 1, -1).astype(np.int8)
    if not is_hadamard(s):
        raise InternalContradictionError(
            f"flat orthogonal matrix of order {n} (eps={eps:.3g}) has non-Hadamard signs")
    if n >= 3 and n % 4:
        raise InternalContradictionError(f"Hadamard sign pattern at order {n}, not a multiple of 4")
    return s
