"""Flat orthogonal matrix constructions.

Every public constructor returns a :class:`ConstructionResult` whose matrix
has already been certified orthogonal (gram defect <= 1e-10); a construction
that fails its own certificate raises :class:`InternalContradictionError`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import hadamard as had
from .circulant import as_row, character_vector, circulant_matrix, dft, is_circulant_orthogonal
from .errors import InternalContradictionError, PreconditionError
from .linalg import ORTHO_TOL, FlatnessReport, flatness_from_extremes, flatness_metrics
from .numtheory import crt_index, goldbach_decompose, is_prime

log = logging.getLogger(__name__)

#: First row of the 4 x 4 real circulant Hadamard matrix, normalised.
CIRCULANT_HADAMARD_4 = np.array([1.0, 1.0, 1.0, -1.0]) / 2.0

DEFAULT_MAX_TRIALS = 50
#: Calibrated constant in the default acceptance threshold ``C * p**(-1/4)``.
TARGET_CONSTANT = 8.0


@dataclass(frozen=True)
class ConstructionResult:
    matrix: np.ndarray
    report: FlatnessReport
    provenance: dict
    circulant_row: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.report.n


def _finish(matrix: np.ndarray, provenance: dict, row: np.ndarray | None = None) -> ConstructionResult:
    report = flatness_metrics(matrix)
    if report.gram_defect > ORTHO_TOL:
        raise InternalContradictionError(
            f"{provenance.get('construction')} produced a non-orthogonal matrix "
            f"(gram defect {report.gram_defect:.3e})")
    return ConstructionResult(matrix=matrix, report=report, provenance=provenance, circulant_row=row)


def _normalized_sylvester(r: int) -> np.ndarray:
    return had.sylvester(r) / math.sqrt(2 ** r)


def sylvester_result(r: int) -> ConstructionResult:
    return _finish(_normalized_sylvester(r), {"construction": "sylvester", "r": r})


def block_embed(n: int) -> ConstructionResult:
    """Orthogonal matrix of order ``n`` whose entries all have modulus >= 1/(2 sqrt n).

    ``n = 2**r + q`` with ``q < 2**r``.  The normalised Sylvester matrix ``H``
    is extended by ``I_q`` and conjugated by a 45-degree rotation pairing the
    last ``q`` coordinates of ``H`` with those of ``I_q``.  At ``n = 3`` that
    rotation leaves a diagonal entry of ``(1 - 1/sqrt 2)/2``, below the bound,
    so order 3 uses the reflection ``I - (2/3) J`` instead.
    """
    if n < 2:
        raise PreconditionError("block_embed needs n >= 2")
    r = n.bit_length() - 1
    big = 2 ** r
    q, s = n - big, 2 * big - n
    prov = {"construction": "block_embed", "n": n, "r": r, "q": q, "s": s}
    if q == 0:
        return _finish(_normalized_sylvester(r), prov)
    if n == 3:
        prov["variant"] = "householder"
        return _finish(np.eye(3) - 2.0 / 3.0 * np.ones((3, 3)), prov)
    h = _normalized_sylvester(r)
    hss, hsq, hqs, hqq = h[:s, :s], h[:s, s:], h[s:, :s], h[s:, s:]
    c = 1.0 / math.sqrt(2.0)
    eye = np.eye(q)
    m = np.block([
        [hss, c * hsq, -c * hsq],
        [c * hqs, (hqq + eye) / 2, (eye - hqq) / 2],
        [-c * hqs, (eye - hqq) / 2, (hqq + eye) / 2],
    ])
    return _finish(m, prov)


def design_values(n: int) -> tuple[float, float]:
    """The two entry values ``(x, y)`` of the order-``n`` Hadamard-design matrix."""
    root = math.sqrt(n + 1)
    x = -1.0 / (root - 1.0)
    return x, 2.0 / root + x


def hadamard_design_matrix(n: int) -> ConstructionResult:
    """Delete the first row and column of a standardised Hadamard matrix of
    order ``n + 1`` and map ``+1 -> x``, ``-1 -> y``."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    h, source = had.hadamard_of_order(n + 1)
    core = had.standardize(h)[1:, 1:]
    x, y = design_values(n)
    m = np.where(core > 0, x, y)
    return _finish(m, {"construction": "hadamard_design", "n": n, "hadamard": source, "x": x, "y": y})


def circulant_paley(p: int) -> ConstructionResult:
    """Circulant matrix with entry ``x`` where ``i - j`` is a nonzero square mod ``p``, ``y`` elsewhere."""
    if not is_prime(p) or p % 4 != 3:
        raise PreconditionError(f"circulant_paley needs a prime p = 3 (mod 4), got {p}")
    x, y = design_values(p)
    chi = character_vector(p)
    # entry (i, j) = row[(j - i) % p], i.e. row[k] is decided by the character of -k
    row = np.where(chi[(-np.arange(p)) % p] == 1, x, y)
    return _finish(circulant_matrix(row), {"construction": "circulant_paley", "p": p, "x": x, "y": y}, row)


@dataclass(frozen=True)
class RandomizedCirculantParams:
    p: int
    seed: int = 0
    max_trials: int = DEFAULT_MAX_TRIALS
    target_f: float | None = None

    def __post_init__(self):
        if not is_prime(self.p) or self.p % 4 != 1:
            raise PreconditionError(f"randomized_circulant needs a prime p = 1 (mod 4), got {self.p}")
        if not 0 <= self.seed < 2 ** 64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")
        if self.max_trials < 1:
            raise PreconditionError("max_trials must be >= 1")

    @property
    def rho(self) -> float:
        return self.p ** -0.5

    @property
    def threshold(self) -> float:
        return default_target(self.p) if self.target_f is None else self.target_f


def default_target(p: int) -> float:
    return TARGET_CONSTANT * p ** -0.25


@dataclass(frozen=True)
class RandomizedTrial:
    """One draw: ``flipped`` lists the non-residues ``y`` in ``1..(p-1)/2`` with
    ``xi_y = 1/2``; ``z`` is the +-1 vector and ``row = dft(z)/p``."""

    p: int
    seed: int
    index: int
    flipped: tuple[int, ...]
    z: np.ndarray
    row: np.ndarray
    f: float


def trial_rng(seed: int, p: int, index: int) -> np.random.Generator:
    # counter-based: trial `index` never depends on how many trials ran before it
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(p, index)))


def randomized_trial(p: int, seed: int, index: int) -> RandomizedTrial:
    params = RandomizedCirculantParams(p=p, seed=seed)
    v = character_vector(p)
    half_nonres = [y for y in range(1, (p - 1) // 2 + 1) if v[y] == -1]
    draws = trial_rng(seed, p, index).random(len(half_nonres)) < params.rho
    w = np.zeros(p)
    w[0] = 0.25
    flipped = tuple(y for y, hit in zip(half_nonres, draws) if hit)
    for y in flipped:
        w[y] = w[p - y] = 0.5
    z = v + 4.0 * w
    if not np.all(np.abs(z) == 1.0):
        raise InternalContradictionError(f"z is not +-1 valued at p={p}, trial {index}")
    spectrum = dft(z)
    if np.max(np.abs(spectrum.imag)) > 1e-9 * p:
        raise InternalContradictionError(f"symmetric z has a non-real transform at p={p}")
    row = spectrum.real / p
    mod = np.abs(row)
    f = flatness_from_extremes(p, float(mod.min()), float(mod.max()))
    return RandomizedTrial(p=p, seed=seed, index=index, flipped=flipped, z=z, row=row, f=f)


def select_trial(params: RandomizedCirculantParams) -> tuple[RandomizedTrial, bool, int]:
    """Run trials in index order; return ``(chosen, accepted, trials_run)``.

    The first trial with ``f <= params.threshold`` wins; otherwise the
    flattest trial (earliest on ties).
    """
    best = None
    for t in range(params.max_trials):
        trial = randomized_trial(params.p, params.seed, t)
        if trial.f <= params.threshold:
            return trial, True, t + 1
        if best is None or trial.f < best.f:
            best = trial
    return best, False, params.max_trials


def randomized_circulant(params: RandomizedCirculantParams) -> ConstructionResult:
    """Flat circulant orthogonal matrix of prime order ``p = 1 (mod 4)``.

    If no trial reaches ``params.threshold`` within ``max_trials`` the
    flattest one is returned with ``provenance["accepted"] = False``.
    Orthogonality holds for every trial regardless.
    """
    trial, accepted, runs = select_trial(params)
    if not accepted:
        log.warning("randomized_circulant p=%d seed=%d: no trial reached f <= %.4g (best %.4g)",
                    params.p, params.seed, params.threshold, trial.f)
    prov = {
        "construction": "randomized_circulant", "p": params.p, "seed": params.seed,
        "rho": params.rho, "max_trials": params.max_trials, "target_f": params.threshold,
        "trial": trial.index, "trials_run": runs, "accepted": accepted,
    }
    return _finish(circulant_matrix(trial.row), prov, trial.row)


def regular_values(n: int) -> tuple[float, float, float]:
    """``(positive, negative, border)`` entry values for the order-``n+1`` extension."""
    b = (1.0 - (n + 1) ** -0.5) / n
    root = math.sqrt(n)
    return 1.0 / root - b, -1.0 / root - b, -1.0 / math.sqrt(n + 1)


def regular_extension(m: int) -> ConstructionResult:
    """Order ``4**m + 1`` matrix from the regular Hadamard matrix of order ``4**m``."""
    h = had.regular_hadamard(m)
    n = h.shape[0]
    pos, neg, a = regular_values(n)
    out = np.full((n + 1, n + 1), a)
    out[:n, :n] = np.where(h > 0, pos, neg)
    return _finish(out, {"construction": "regular_extension", "m": m, "n": n + 1})


def tensor_compose(factors) -> ConstructionResult:
    """Kronecker product of the factor matrices, left to right."""
    factors = list(factors)
    if not factors:
        raise PreconditionError("tensor_compose needs at least one factor")
    if len(factors) == 1:
        return factors[0]
    for fac in factors:
        if not fac.report.orthogonal:
            raise PreconditionError("tensor_compose factors must be orthogonal")
    m = reduce(np.kron, (fac.matrix for fac in factors))
    return _finish(m, {"construction": "tensor", "factors": [fac.provenance for fac in factors]})


def crt_row(rows) -> np.ndarray:
    """``y[k] = prod_j x_j[k mod n_j]`` for rows of pairwise-coprime lengths."""
    rows = [as_row(x) for x in rows]
    lengths = [x.size for x in rows]
    n = math.prod(lengths)
    residues = np.array([crt_index(k, lengths) for k in range(n)], dtype=np.int64).reshape(n, len(rows))
    y = np.ones(n)
    for j, x in enumerate(rows):
        y *= x[residues[:, j]]
    return y


def crt_circulant_product(rows, provenances=None) -> ConstructionResult:
    """Circulant orthogonal matrix of order ``prod n_j`` from circulant
    orthogonal rows of pairwise-coprime lengths."""
    rows = [as_row(x) for x in rows]
    if not rows:
        raise PreconditionError("crt_circulant_product needs at least one row")
    for x in rows:
        if not is_circulant_orthogonal(x, ORTHO_TOL):
            raise PreconditionError(f"length-{x.size} row does not generate an orthogonal circulant")
    y = crt_row(rows)
    prov = {"construction": "crt", "lengths": [x.size for x in rows]}
    if provenances is not None:
        prov["factors"] = list(provenances)
    return _finish(circulant_matrix(y), prov, y)


def circulant_hadamard4() -> ConstructionResult:
    row = CIRCULANT_HADAMARD_4.copy()
    return _finish(circulant_matrix(row), {"construction": "circulant_hadamard4"}, row)


def prime_block(p: int, seed: int = 0) -> ConstructionResult:
    """The flattest prime-order block available: Sylvester at 2, Paley circulant
    for ``p = 3 (mod 4)``, randomized circulant for ``p = 1 (mod 4)``."""
    if p == 2:
        return sylvester_result(1)
    if p % 4 == 3:
        return circulant_paley(p)
    return randomized_circulant(RandomizedCirculantParams(p=p, seed=seed))


def goldbach_blockdiag(n: int, seed: int = 0) -> ConstructionResult:
    """Block-diagonal matrix with one flat prime-order block per part of
    :func:`goldbach_decompose`.  Controls the largest entry only: off-block
    zeros make the smallest entry 0."""
    dec = goldbach_decompose(n)
    blocks = [prime_block(p, seed) for p in dec.parts]
    m = np.zeros((n, n))
    k = 0
    for blk in blocks:
        d = blk.n
        m[k:k + d, k:k + d] = blk.matrix
        k += d
    prov = {"construction": "goldbach_blockdiag", "n": n, "parts": list(dec.parts),
            "window": dec.window, "seed": seed, "blocks": [b.provenance for b in blocks]}
    return _finish(m, prov)
