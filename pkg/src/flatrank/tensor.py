"""Dense tensors over a finite field and their flattening ranks.

A d-dimensional tensor on axis sizes (a_0, ..., a_{d-1}) stores its entries
row-major as canonical integer representatives.  Flattening along axis i views
the tensor as a matrix whose rows are indexed by axis i and whose columns run
mixed-radix over the remaining axes in their original order, least-significant
axis last (i.e. exactly numpy's ``moveaxis(arr, i, 0).reshape(rows, -1)``).
That column encoding is part of the file-format contract.

Also provides the two extremal semi-diagonal constructions: the block
partition tensor whose every flattening rank equals ceil(a / (d-1)), and the
axis-constant tensor whose chosen flattening rank collapses to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Sequence

import numpy as np

from .field import FieldDescriptor
from .linalg import matrix_rank

__all__ = [
    "Tensor",
    "FlatteningMatrix",
    "flatten",
    "flattening_rank",
    "max_flattening_rank",
    "sum_flattening_ranks",
    "is_semi_diagonal",
    "subtensor",
    "add_tensors",
    "partition_construction",
    "axis_constant_construction",
    "decode_column",
]

MAX_ENTRIES = 1 << 24


@dataclass(frozen=True)
class Tensor:
    """Immutable dense tensor; ``entries[flat]`` with row-major flat indexing."""

    dims: tuple[int, ...]
    field: FieldDescriptor
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.dims) < 1 or any(a < 1 for a in self.dims):
            raise ValueError(f"dims must be positive, got {self.dims}")
        size = math.prod(self.dims)
        if size > MAX_ENTRIES:
            raise ValueError(f"tensor with {size} entries exceeds the {MAX_ENTRIES} dense cap")
        if len(self.entries) != size:
            raise ValueError(f"expected {size} entries, got {len(self.entries)}")
        order = self.field.order
        for e in self.entries:
            if not 0 <= e < order:
                raise ValueError(f"entry {e!r} is not canonical in {self.field}")

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def flat_index(self, index: Sequence[int]) -> int:
        if len(index) != self.ndim:
            raise ValueError("multi-index arity mismatch")
        flat = 0
        for m, a in zip(index, self.dims):
            if not 0 <= m < a:
                raise IndexError(f"index {tuple(index)} out of range for dims {self.dims}")
            flat = flat * a + m
        return flat

    def get(self, index: Sequence[int]) -> int:
        return self.entries[self.flat_index(index)]

    def to_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64).reshape(self.dims)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    @classmethod
    def from_array(cls, arr: np.ndarray, field: FieldDescriptor) -> "Tensor":
        return cls(tuple(int(a) for a in arr.shape), field, tuple(int(v) for v in arr.reshape(-1)))

    @classmethod
    def from_function(
        cls, dims: Sequence[int], field: FieldDescriptor, fn: Callable[[tuple[int, ...]], int]
    ) -> "Tensor":
        entries = tuple(fn(idx) for idx in product(*(range(a) for a in dims)))
        return cls(tuple(dims), field, entries)

    @classmethod
    def zeros(cls, dims: Sequence[int], field: FieldDescriptor) -> "Tensor":
        return cls(tuple(dims), field, (0,) * math.prod(dims))


@dataclass(frozen=True)
class FlatteningMatrix:
    """Axis-i matrix view of a tensor; rows = axis size, cols = product of the rest."""

    rows: int
    cols: int
    axis: int
    field: FieldDescriptor
    entries: tuple[tuple[int, ...], ...]

    def entry(self, r: int, c: int) -> int:
        return self.entries[r][c]

    def row_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _check_axis(t: Tensor, axis: int) -> None:
    if not 0 <= axis < t.ndim:
        raise IndexError(f"axis {axis} out of range for a {t.ndim}-dimensional tensor")


def decode_column(col: int, dims: Sequence[int], axis: int) -> tuple[int, ...]:
    """Column index of the axis-``axis`` flattening -> multi-index of the other axes."""
    rest = [dims[j] for j in range(len(dims)) if j != axis]
    out = [0] * len(rest)
    for j in range(len(rest) - 1, -1, -1):
        col, out[j] = divmod(col, rest[j])
    return tuple(out)


def flatten(t: Tensor, axis: int) -> FlatteningMatrix:
    _check_axis(t, axis)
    arr = t.to_array()
    mat = np.moveaxis(arr, axis, 0).reshape(t.dims[axis], -1)
    return FlatteningMatrix(
        rows=int(mat.shape[0]),
        cols=int(mat.shape[1]),
        axis=axis,
        field=t.field,
        entries=tuple(tuple(int(v) for v in row) for row in mat),
    )


def _flattening_rows(t: Tensor, axis: int) -> list[list[int]]:
    arr = t.to_array()
    return np.moveaxis(arr, axis, 0).reshape(t.dims[axis], -1).tolist()


def flattening_rank(t: Tensor, axis: int) -> int:
    """Exact rank of the axis-``axis`` flattening over the tensor's field."""
    _check_axis(t, axis)
    return matrix_rank(_flattening_rows(t, axis), t.field)


def max_flattening_rank(t: Tensor) -> int:
    return max(flattening_rank(t, i) for i in range(t.ndim))


def sum_flattening_ranks(t: Tensor) -> int:
    return sum(flattening_rank(t, i) for i in range(t.ndim))


def _require_cubical(t: Tensor) -> int:
    a = t.dims[0]
    if any(s != a for s in t.dims):
        raise ValueError(f"operation requires a cubical tensor, got dims {t.dims}")
    return a


def is_semi_diagonal(t: Tensor) -> bool:
    """Nonzero on every constant multi-index, zero on every all-distinct one.

    Mixed multi-indices are unconstrained.  When d exceeds the axis size there
    are no all-distinct tuples, so only the diagonal is checked.
    """
    a = _require_cubical(t)
    d = t.ndim
    for x in range(a):
        if t.entries[t.flat_index((x,) * d)] == 0:
            return False
    for idx in permutations(range(a), d):
        if t.entries[t.flat_index(idx)] != 0:
            return False
    return True


def subtensor(t: Tensor, subsets: Sequence[Sequence[int]]) -> Tensor:
    """Restriction of ``t`` to the given index subset on each axis."""
    if len(subsets) != t.ndim:
        raise ValueError("need one index subset per axis")
    cleaned = []
    for ax, sub in enumerate(subsets):
        sub = list(sub)
        if not sub:
            raise ValueError(f"axis {ax}: empty index subset")
        if len(set(sub)) != len(sub):
            raise ValueError(f"axis {ax}: duplicate indices in subset")
        if any(not 0 <= v < t.dims[ax] for v in sub):
            raise IndexError(f"axis {ax}: subset out of range")
        cleaned.append(sub)
    arr = t.to_array()[np.ix_(*cleaned)]
    return Tensor.from_array(arr, t.field)


def add_tensors(s: Tensor, t: Tensor) -> Tensor:
    if s.dims != t.dims:
        raise ValueError(f"shape mismatch: {s.dims} vs {t.dims}")
    if s.field != t.field:
        raise ValueError(f"field mismatch: {s.field} vs {t.field}")
    f = s.field
    if f.kind == "binary":
        entries = tuple(a ^ b for a, b in zip(s.entries, t.entries))
    else:
        p = f.p
        entries = tuple((a + b) % p for a, b in zip(s.entries, t.entries))
    return Tensor(s.dims, f, entries)


def negate_tensor(t: Tensor) -> Tensor:
    f = t.field
    return Tensor(t.dims, f, tuple(f.neg(e) for e in t.entries))


def partition_construction(a: int, d: int, field: FieldDescriptor) -> Tensor:
    """Semi-diagonal tensor on A^d that is 1 exactly on blocks of a partition.

    The ground set is split into consecutive blocks of size d-1 (the last may
    be shorter), giving ceil(a/(d-1)) parts; every flattening rank equals the
    number of parts, which is the minimum any semi-diagonal tensor can attain.
    """
    if a < 1 or d < 2:
        raise ValueError("need a >= 1 and d >= 2")
    size = a**d
    if size > MAX_ENTRIES:
        raise ValueError("construction exceeds the dense entry cap")
    entries = [0] * size
    for start in range(0, a, d - 1):
        block = range(start, min(start + d - 1, a))
        for idx in product(block, repeat=d):
            flat = 0
            for m in idx:
                flat = flat * a + m
            entries[flat] = 1
    return Tensor((a,) * d, field, tuple(entries))


def num_partition_parts(a: int, d: int) -> int:
    return -(-a // (d - 1))


def axis_constant_construction(a: int, d: int, axis: int, field: FieldDescriptor) -> Tensor:
    """Tensor that is 1 iff all coordinates except ``axis`` agree.

    Its ``axis`` flattening has rank 1 (all rows equal).  For d >= 3 (or
    a == 1) it is semi-diagonal; for d == 2 and a >= 2 it degenerates to the
    all-ones matrix, which is not.
    """
    if a < 1 or d < 2:
        raise ValueError("need a >= 1 and d >= 2")
    if not 0 <= axis < d:
        raise IndexError(f"axis {axis} out of range")
    size = a**d
    if size > MAX_ENTRIES:
        raise ValueError("construction exceeds the dense entry cap")
    entries = [0] * size
    for c in range(a):
        for x in range(a):
            idx = [c] * d
            idx[axis] = x
            flat = 0
            for m in idx:
                flat = flat * a + m
            entries[flat] = 1
    return Tensor((a,) * d, field, tuple(entries))


@lru_cache(maxsize=None)
def classify_indices(a: int, d: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Flat indices of an A^d tensor split into (diagonal, all-distinct, mixed)."""
    diag, distinct, mixed = [], [], []
    for flat, idx in enumerate(product(range(a), repeat=d)):
        s = set(idx)
        if len(s) == 1:
            diag.append(flat)
        elif len(s) == d:
            distinct.append(flat)
        else:
            mixed.append(flat)
    return tuple(diag), tuple(distinct), tuple(mixed)
