"""Choose and execute a construction for an arbitrary order ``n``.

A plan is a tree whose leaves are single constructions and whose inner
nodes combine children by Kronecker product (``tensor``), block-diagonal sum
(``direct_sum``) or CRT circulant product (``crt``).  Leaf extremes are
known in closed form (or, for the randomized circulant, by running the
seeded trials), and the combinators act on them exactly:

* tensor / crt: ``l`` and ``u`` multiply;
* direct_sum: ``u`` is the maximum, ``l`` is 0.

So every prediction equals the measured value of the executed plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import constructions as cons
from .errors import (DecompositionNotFoundError, InternalContradictionError, NoPlanError,
                     PreconditionError)
from .hadamard import hadamard_available
from .linalg import direct_sum_all, flatness_from_extremes
from .numtheory import goldbach_decompose, is_prime

OBJECTIVES = ("max_l", "min_u", "min_f", "require_circulant")
_CLI_NAMES = {"max-l": "max_l", "min-u": "min_u", "min-f": "min_f", "circulant": "require_circulant"}


def normalize_objective(name: str) -> str:
    obj = _CLI_NAMES.get(name, name)
    if obj not in OBJECTIVES:
        raise PreconditionError(f"unknown objective {name!r}; pick one of {', '.join(OBJECTIVES)}")
    return obj


@dataclass(frozen=True)
class Leaf:
    name: str
    n: int
    params: tuple[tuple[str, int], ...] = ()

    kind = "leaf"

    def describe(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({args})"

    def leaves(self) -> int:
        return 1


@dataclass(frozen=True)
class Combine:
    kind: str
    children: tuple

    @property
    def n(self) -> int:
        dims = [c.n for c in self.children]
        return sum(dims) if self.kind == "direct_sum" else math.prod(dims)

    def describe(self) -> str:
        return f"{self.kind}(" + ", ".join(c.describe() for c in self.children) + ")"

    def leaves(self) -> int:
        return sum(c.leaves() for c in self.children)


@dataclass(frozen=True)
class Prediction:
    n: int
    l: float
    u: float

    @property
    def f(self) -> float:
        return flatness_from_extremes(self.n, self.l, self.u)


@dataclass(frozen=True)
class ConstructionPlan:
    target_n: int
    objective: str
    seed: int
    tree: Leaf | Combine
    predicted: Prediction
    alternatives: tuple = field(default=())

    def describe(self) -> str:
        return self.tree.describe()

    def as_dict(self) -> dict:
        return {
            "n": self.target_n, "objective": self.objective, "seed": self.seed,
            "tree": self.tree.describe(),
            "predicted": {"l": self.predicted.l, "u": self.predicted.u, "f": self.predicted.f},
            "alternatives": [
                {"tree": t.describe(), "l": p.l, "u": p.u, "f": p.f} for t, p in self.alternatives
            ],
        }


# -- leaf extremes ---------------------------------------------------------

def block_embed_extremes(n: int) -> tuple[float, float]:
    r = n.bit_length() - 1
    big = 2 ** r
    q = n - big
    h = 1.0 / math.sqrt(big)
    if q == 0:
        return h, h
    if n == 3:
        return 1.0 / 3.0, 2.0 / 3.0
    small = [h / math.sqrt(2.0), (1.0 - h) / 2.0, h]
    if q >= 2:
        small.append(h / 2.0)
    return min(small), max(h, (1.0 + h) / 2.0)


def _pair(values) -> tuple[float, float]:
    mods = [abs(v) for v in values]
    return min(mods), max(mods)


@lru_cache(maxsize=4096)
def leaf_extremes(leaf: Leaf) -> tuple[float, float]:
    p = dict(leaf.params)
    name = leaf.name
    if name in ("sylvester", "sylvester0"):
        return (1.0 / math.sqrt(leaf.n),) * 2
    if name == "circulant_hadamard4":
        return 0.5, 0.5
    if name == "block_embed":
        return block_embed_extremes(leaf.n)
    if name in ("hadamard_design", "circulant_paley"):
        x, y = cons.design_values(leaf.n)
        return _pair([y]) if leaf.n == 1 else _pair([x, y])
    if name == "regular_extension":
        return _pair(cons.regular_values(leaf.n - 1))
    if name == "randomized_circulant":
        trial, _, _ = cons.select_trial(cons.RandomizedCirculantParams(p=leaf.n, seed=p["seed"]))
        return _pair([trial.row.min(), trial.row.max(), np.abs(trial.row).min()])
    raise PreconditionError(f"unknown leaf {name}")


def predict(node) -> Prediction:
    if node.kind == "leaf":
        l, u = leaf_extremes(node)
        return Prediction(node.n, l, u)
    preds = [predict(c) for c in node.children]
    if node.kind == "direct_sum":
        return Prediction(node.n, 0.0, max(p.u for p in preds))
    return Prediction(node.n, math.prod(p.l for p in preds), math.prod(p.u for p in preds))


# -- candidate generation ----------------------------------------------------

def _score(objective: str, pred: Prediction) -> float:
    if objective == "max_l":
        return -pred.l
    if objective == "min_u":
        return pred.u
    return pred.f


# exact ties prefer the more specific construction (Sylvester over an
# equivalent block_embed at powers of two, and so on)
_PRIORITY = {
    "sylvester0": 0, "sylvester": 0, "circulant_hadamard4": 1, "circulant_paley": 2,
    "hadamard_design": 3, "regular_extension": 4, "randomized_circulant": 5, "block_embed": 9,
}


def _priority(tree) -> int:
    if tree.kind == "leaf":
        return _PRIORITY[tree.name]
    return sum(_priority(c) for c in tree.children)


def _rank_key(objective: str, tree) -> tuple:
    score = round(_score(objective, predict(tree)), 12)
    return (score, tree.leaves(), _priority(tree), tree.describe())


def _flatten(kind: str, children) -> Combine:
    flat = []
    for c in children:
        flat.extend(c.children if c.kind == kind else [c])
    return Combine(kind, tuple(flat))


def prime_leaf(p: int, seed: int) -> Leaf:
    """The prime-order block used by the Goldbach direct sum."""
    if p == 2:
        return Leaf("sylvester", 2, (("r", 1),))
    if p % 4 == 3:
        return Leaf("circulant_paley", p, (("p", p),))
    return Leaf("randomized_circulant", p, (("p", p), ("seed", seed)))


def direct_leaves(n: int, seed: int, circulant: bool) -> list[Leaf]:
    out: list[Leaf] = []
    if n == 1:
        return [Leaf("sylvester0", 1)]
    if n == 4:
        out.append(Leaf("circulant_hadamard4", 4))
    if is_prime(n) and n > 2:
        out.append(prime_leaf(n, seed))
    if circulant:
        return out
    if n & (n - 1) == 0:
        out.append(Leaf("sylvester", n, (("r", n.bit_length() - 1),)))
    if hadamard_available(n + 1):
        out.append(Leaf("hadamard_design", n, (("n", n),)))
    m = round(math.log(n - 1, 4)) if n > 2 else 0
    if m >= 1 and 4 ** m + 1 == n:
        out.append(Leaf("regular_extension", n, (("m", m),)))
    out.append(Leaf("block_embed", n, (("n", n),)))
    return out


def goldbach_tree(n: int, seed: int) -> Combine | None:
    try:
        dec = goldbach_decompose(n)
    except DecompositionNotFoundError:
        return None
    return Combine("direct_sum", tuple(prime_leaf(p, seed) for p in dec.parts))


@lru_cache(maxsize=None)
def _candidates(n: int, objective: str, seed: int) -> tuple:
    circulant = objective == "require_circulant"
    cands: list = list(direct_leaves(n, seed, circulant))
    for d in range(2, math.isqrt(n) + 1):
        if n % d:
            continue
        e = n // d
        if circulant:
            if math.gcd(d, e) != 1:
                continue
            left, right = _best(d, objective, seed), _best(e, objective, seed)
            if left is not None and right is not None:
                cands.append(_flatten("crt", (left, right)))
        else:
            cands.append(_flatten("tensor", (_best(d, objective, seed), _best(e, objective, seed))))
            # a circulant split carries the same prediction; keep it on offer
            if math.gcd(d, e) == 1:
                left = _best(d, "require_circulant", seed)
                right = _best(e, "require_circulant", seed)
                if left is not None and right is not None:
                    cands.append(_flatten("crt", (left, right)))
    if not circulant:
        gb = goldbach_tree(n, seed)
        if gb is not None:
            cands.append(gb)
    # different splits can flatten to the same tree
    unique = {t.describe(): t for t in cands}
    return tuple(sorted(unique.values(), key=lambda t: _rank_key(objective, t)))


def _best(n: int, objective: str, seed: int):
    cands = _candidates(n, objective, seed)
    return cands[0] if cands else None


def plan(n: int, objective: str = "min_f", seed: int = 0) -> ConstructionPlan:
    """Best construction tree for order ``n`` under ``objective``.

    Candidates are the direct leaves for ``n``, every two-way factor split
    (recursively planned), and the Goldbach block-diagonal sum.  Ranking is by
    predicted objective, then fewer leaves, then construction priority,
    then the tree's text.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    objective = normalize_objective(objective)
    cands = _candidates(n, objective, seed)
    if not cands:
        raise NoPlanError(f"no {objective} construction for n={n}")
    best = cands[0]
    if best.n != n:
        raise InternalContradictionError(f"plan for {n} composes to {best.n}")
    alts = tuple((t, predict(t)) for t in cands[1:6])
    return ConstructionPlan(target_n=n, objective=objective, seed=seed, tree=best,
                            predicted=predict(best), alternatives=alts)


# -- execution -----------------------------------------------------------------

def _run_leaf(leaf: Leaf) -> cons.ConstructionResult:
    p = dict(leaf.params)
    if leaf.name == "sylvester0":
        return cons.sylvester_result(0)
    if leaf.name == "sylvester":
        return cons.sylvester_result(p["r"])
    if leaf.name == "circulant_hadamard4":
        return cons.circulant_hadamard4()
    if leaf.name == "block_embed":
        return cons.block_embed(leaf.n)
    if leaf.name == "hadamard_design":
        return cons.hadamard_design_matrix(leaf.n)
    if leaf.name == "circulant_paley":
        return cons.circulant_paley(leaf.n)
    if leaf.name == "regular_extension":
        return cons.regular_extension(p["m"])
    if leaf.name == "randomized_circulant":
        return cons.randomized_circulant(cons.RandomizedCirculantParams(p=leaf.n, seed=p["seed"]))
    raise PreconditionError(f"unknown leaf {leaf.name}")


def execute(node) -> cons.ConstructionResult:
    if node.kind == "leaf":
        return _run_leaf(node)
    parts = [execute(c) for c in node.children]
    if node.kind == "tensor":
        return cons.tensor_compose(parts)
    if node.kind == "crt":
        return cons.crt_circulant_product([r.circulant_row for r in parts],
                                          [r.provenance for r in parts])
    prov = {"construction": "direct_sum", "blocks": [r.provenance for r in parts]}
    return cons._finish(direct_sum_all([r.matrix for r in parts]), prov)


def generate(n: int, objective: str = "min_f", seed: int = 0) -> cons.ConstructionResult:
    """Plan and build a certified orthogonal matrix of order ``n``."""
    pl = plan(n, objective, seed)
    res = execute(pl.tree)
    prov = dict(res.provenance)
    prov["plan"] = pl.describe()
    prov["objective"] = pl.objective
    return cons.ConstructionResult(matrix=res.matrix, report=res.report, provenance=prov,
                                   circulant_row=res.circulant_row)
