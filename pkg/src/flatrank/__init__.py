"""flatrank: exact flattening ranks of finite-field tensors and their
extremal-combinatorics application pipelines."""

__version__ = "0.1.0"

from .field import FieldDescriptor, FieldElement, make_binary_field, make_prime_field
from .tensor import (
    Tensor,
    add_tensors,
    axis_constant_construction,
    flatten,
    flattening_rank,
    is_semi_diagonal,
    max_flattening_rank,
    partition_construction,
    subtensor,
    sum_flattening_ranks,
)

__all__ = [
    "__version__",
    "FieldDescriptor",
    "FieldElement",
    "make_prime_field",
    "make_binary_field",
    "Tensor",
    "flatten",
    "flattening_rank",
    "max_flattening_rank",
    "sum_flattening_ranks",
    "is_semi_diagonal",
    "subtensor",
    "add_tensors",
    "partition_construction",
    "axis_constant_construction",
]
