"""Primality, factorisation, quadratic characters, prime decompositions and
CRT index maps.  Everything here is exact integer arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import DecompositionNotFoundError, PreconditionError

# Deterministic Miller-Rabin bases; correct for every n < 3.3e24 (so all of 64-bit).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes ``p`` with ``lo <= p <= hi``."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


@dataclass(frozen=True)
class Factorization:
    """``n = 2**two_exponent * prod(odd_primes)``; odd primes sorted, with multiplicity."""

    n: int
    two_exponent: int
    odd_primes: tuple[int, ...] = ()

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.odd_primes:
            out[p] = out.get(p, 0) + 1
        return out

    @property
    def squarefree_odd(self) -> bool:
        return len(set(self.odd_primes)) == len(self.odd_primes)


def factorize(n: int) -> Factorization:
    if n < 1:
        raise PreconditionError(f"cannot factorize {n}")
    m, s = n, 0
    while m % 2 == 0:
        m //= 2
        s += 1
    odd = []
    d = 3
    while m > 1 and not is_prime(m):
        if d * d > m:
            break
        while m % d == 0:
            odd.append(d)
            m //= d
        d += 2
    if m > 1:
        odd.append(m)
    return Factorization(n=n, two_exponent=s, odd_primes=tuple(sorted(odd)))


def _require_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise PreconditionError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Quadratic character of ``a`` modulo the odd prime ``p`` (Euler's criterion)."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def quadratic_residues(p: int) -> set[int]:
    """Nonzero squares modulo ``p``."""
    _require_odd_prime(p)
    return {x * x % p for x in range(1, p)}


@dataclass(frozen=True)
class PrimeDecomposition:
    """``n`` written as 3 (odd ``n``) or 4 (even ``n``) primes close to ``n/k``.

    ``window`` is the achieved relative deviation ``max |p - n/k| / (n/k)``;
    ``search_window`` the search radius at which the decomposition was found.
    Every part lies in ``[(1-w) n/k, (1+w) n/k]`` for both.
    """

    n: int
    parts: tuple[int, ...]
    window: float
    search_window: float = field(default=0.0)


GOLDBACH_START_WINDOW = 0.05


def _best_in_window(n: int, k: int, eps: float) -> tuple[int, ...] | None:
    centre = n / k
    lo = max(2, math.ceil(centre * (1 - eps) - 1e-9))
    hi = math.floor(centre * (1 + eps) + 1e-9)
    cand = primes_between(lo, hi)
    cand_set = set(cand)
    best_key, best = None, None
    for head in combinations_with_replacement(cand, k - 1):
        last = n - sum(head)
        if last < head[-1] or last not in cand_set:
            continue
        parts = head + (last,)
        key = (max(abs(p - centre) for p in parts), parts)
        if best_key is None or key < best_key:
            best_key, best = key, parts
    return best


def goldbach_decompose(n: int, eps0: float = GOLDBACH_START_WINDOW) -> PrimeDecomposition:
    """Three primes (odd ``n >= 9``) or four primes (even ``n >= 12``) summing to ``n``.

    The window starts at ``eps0`` and doubles (capped at 1) until some
    decomposition fits.  The winner minimises the largest deviation from
    ``n/k``; ties go to the lexicographically smallest sorted tuple.
    """
    if (n % 2 == 1 and n < 9) or (n % 2 == 0 and n < 12):
        raise DecompositionNotFoundError(f"{n} is below the decomposition threshold (9 odd, 12 even)")
    if not 0 < eps0 <= 1:
        raise PreconditionError("eps0 must lie in (0, 1]")
    k = 3 if n % 2 else 4
    eps = eps0
    while True:
        parts = _best_in_window(n, k, eps)
        if parts is not None:
            centre = n / k
            achieved = max(abs(p - centre) for p in parts) / centre
            return PrimeDecomposition(n=n, parts=parts, window=achieved, search_window=eps)
        if eps >= 1:
            raise DecompositionNotFoundError(f"no {k}-prime decomposition of {n}")
        eps = min(1.0, 2 * eps)


def _check_coprime(moduli) -> None:
    moduli = list(moduli)
    if not moduli or any(m < 1 for m in moduli):
        raise PreconditionError("moduli must be positive integers")
    for i, a in enumerate(moduli):
        for b in moduli[i + 1:]:
            if math.gcd(a, b) != 1:
                raise PreconditionError(f"moduli {a} and {b} are not coprime")


def crt_index(k: int, moduli) -> tuple[int, ...]:
    """Image of ``k mod prod(moduli)`` under ``Z_n -> Z_{m_1} x ... x Z_{m_r}``."""
    _check_coprime(moduli)
    n = math.prod(moduli)
    k %= n
    return tuple(k % m for m in moduli)


def crt_combine(residues, moduli) -> int:
    """Inverse of :func:`crt_index`."""
    _check_coprime(moduli)
    n = math.prod(moduli)
    total = 0
    for r, m in zip(residues, moduli):
        c = n // m
        total += r * c * pow(c, -1, m)
    return total % n
