"""Flat real orthogonal matrices: every entry close to ``1/sqrt(n)``."""

from .constructions import (
    ConstructionResult,
    RandomizedCirculantParams,
    block_embed,
    circulant_paley,
    crt_circulant_product,
    goldbach_blockdiag,
    hadamard_design_matrix,
    randomized_circulant,
    regular_extension,
    tensor_compose,
)
from .linalg import FlatnessReport, direct_sum, flatness_metrics, gram_defect, kronecker
from .planner import generate, plan

__all__ = [
    "ConstructionResult", "FlatnessReport", "RandomizedCirculantParams",
    "block_embed", "circulant_paley", "crt_circulant_product", "direct_sum", "flatness_metrics",
    "generate", "goldbach_blockdiag", "gram_defect", "hadamard_design_matrix", "kronecker",
    "plan", "randomized_circulant", "regular_extension", "tensor_compose",
]
__version__ = "0.1.0"
