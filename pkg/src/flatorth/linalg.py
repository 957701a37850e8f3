"""Dense matrices, orthogonality certificates and flatness metrics.

A matrix is a plain 2-D ``numpy.ndarray`` of float64.  Every construction in
the package is certified with :func:`gram_defect` and summarised with a
:class:`FlatnessReport`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionError

#: Gram defect at or below which a matrix counts as orthogonal.
ORTHO_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite square float64 array, or raise."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix has non-finite entries")
    return a


def gram_defect(m) -> float:
    """Largest absolute entry of ``M^T M - I``."""
    a = as_matrix(m)
    g = a.T @ a
    g[np.diag_indices_from(g)] -= 1.0
    return float(np.max(np.abs(g)))


def is_orthogonal(m, tol: float = ORTHO_TOL) -> bool:
    return gram_defect(m) <= tol


@dataclass(frozen=True)
class FlatnessReport:
    """Entry-modulus summary of an ``n x n`` matrix.

    ``l`` and ``u`` are the smallest and largest entry moduli, ``f`` the
    flatness ``max(|1 - l*sqrt(n)|, |u*sqrt(n) - 1|)`` and ``gram_defect``
    the orthogonality certificate.
    """

    n: int
    l: float
    u: float
    f: float
    gram_defect: float

    @property
    def orthogonal(self) -> bool:
        return self.gram_defect <= ORTHO_TOL

    def as_dict(self) -> dict:
        return asdict(self)


def flatness_from_extremes(n: int, l: float, u: float) -> float:
    root = math.sqrt(n)
    return max(abs(1.0 - l * root), abs(u * root - 1.0))


def flatness_metrics(m) -> FlatnessReport:
    a = as_matrix(m)
    n = a.shape[0]
    mod = np.abs(a)
    l, u = float(mod.min()), float(mod.max())
    return FlatnessReport(n=n, l=l, u=u, f=flatness_from_extremes(n, l, u),
                          gram_defect=gram_defect(a))


def kronecker(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal matrix ``a ⊕ b``."""
    a, b = as_matrix(a), as_matrix(b)
    p, q = a.shape[0], b.shape[0]
    out = np.zeros((p + q, p + q))
    out[:p, :p] = a
    out[p:, p:] = b
    return out


def direct_sum_all(blocks) -> np.ndarray:
    blocks = [as_matrix(b) for b in blocks]
    if not blocks:
        raise DimensionError("direct sum of no blocks")
    total = sum(b.shape[0] for b in blocks)
    out = np.zeros((total, total))
    k = 0
    for b in blocks:
        d = b.shape[0]
        out[k:k + d, k:k + d] = b
        k += d
    return out
