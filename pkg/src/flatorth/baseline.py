"""Entry statistics of Haar-random orthogonal matrices, for comparison with
the deterministic constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .linalg import gram_defect


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a Gaussian matrix, columns sign-corrected so ``diag(R) > 0``."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


@dataclass(frozen=True)
class BaselineStats:
    n: int
    trials: int
    seed: int
    u: np.ndarray
    l: np.ndarray
    gram_defects: np.ndarray

    def quantiles(self, qs=(0.1, 0.5, 0.9)) -> dict:
        return {
            "u": {q: float(np.quantile(self.u, q)) for q in qs},
            "l": {q: float(np.quantile(self.l, q)) for q in qs},
        }

    def summary(self) -> dict:
        root = math.sqrt(self.n)
        med_u, med_l = float(np.median(self.u)), float(np.median(self.l))
        return {
            "n": self.n, "trials": self.trials, "seed": self.seed,
            "median_u": med_u, "median_l": med_l,
            "median_u_sqrt_n_over_sqrt_log_n": med_u * root / math.sqrt(math.log(self.n)),
            "median_l_times_n": med_l * self.n,
            "block_embed_floor": 1.0 / (2.0 * root),
            "max_gram_defect": float(self.gram_defects.max()),
            "quantiles": self.quantiles(),
        }


def random_baseline(n: int, trials: int, seed: int = 0) -> BaselineStats:
    if n < 2 or trials < 1:
        raise PreconditionError("random_baseline needs n >= 2 and trials >= 1")
    rng = np.random.default_rng(seed)
    u = np.empty(trials)
    l = np.empty(trials)
    defects = np.empty(trials)
    for t in range(trials):
        q = haar_orthogonal(n, rng)
        mod = np.abs(q)
        u[t], l[t] = mod.max(), mod.min()
        defects[t] = gram_defect(q)
    return BaselineStats(n=n, trials=trials, seed=seed, u=u, l=l, gram_defects=defects)
