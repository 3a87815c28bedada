"""Exact rank and determinant kernels over finite fields.

Three elimination paths, dispatched on the field:

* GF(2): rows are Python ints used as bit-vectors; elimination is word-wide XOR.
* GF(p), p odd prime: numpy int64 rows reduced mod p (residues stay below
  2^31, so products of two fit int64 exactly).
* GF(2^k), k >= 2: numpy rows with multiplication through discrete-log tables
  (k <= 16), falling back to scalar shift-and-reduce arithmetic for larger k.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import FieldDescriptor, discrete_log_tables

__all__ = [
    "rank_gf2_bitrows",
    "bitrows_from_lists",
    "matrix_rank",
    "determinant",
    "solve_is_independent",
]


def rank_gf2_bitrows(rows: Sequence[int]) -> int:
    """Rank over GF(2) of rows given as bit-packed ints (bit c = column c)."""
    pivots: dict[int, int] = {}
    rank = 0
    for v in rows:
        while v:
            h = v.bit_length()
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                rank += 1
                break
            v ^= p
    return rank


def bitrows_from_lists(rows: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for row in rows:
        acc = 0
        for c, v in enumerate(row):
            if v & 1:
                acc |= 1 << c
        out.append(acc)
    return out


def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    m = mat.astype(np.int64) % p
    nrows, ncols = m.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        column = m[rank:, col]
        nz = np.nonzero(column)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        below = m[rank + 1 :, col]
        hit = np.nonzero(below)[0]
        if hit.size:
            rows = rank + 1 + hit
            m[rows] = (m[rows] - below[hit, None] * m[rank]) % p
        rank += 1
    return rank


def _table_ops(field: FieldDescriptor):
    exp, log = discrete_log_tables(field)
    return np.asarray(exp, dtype=np.int64), np.asarray(log, dtype=np.int64)


def _rank_gf2k(mat: np.ndarray, field: FieldDescriptor) -> int:
    if field.k > 16:
        return _rank_generic(mat.tolist(), field)
    exp, log = _table_ops(field)
    m = mat.astype(np.int64)
    nrows, ncols = m.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        column = m[rank:, col]
        nz = np.nonzero(column)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        pivrow = m[rank]
        inv_log = (field.order - 1 - log[pivrow[col]]) % (field.order - 1)
        below = m[rank + 1 :, col]
        hit = np.nonzero(below)[0]
        if hit.size:
            rows = rank + 1 + hit
            # factor[i] * pivrow eliminated from each hit row; exp/log handle
            # the products, zeros in pivrow masked out explicitly
            flog = log[below[hit]] + inv_log
            prod_log = flog[:, None] + log[pivrow][None, :]
            prod = exp[prod_log % (field.order - 1)]
            prod[:, pivrow == 0] = 0
            m[rows] ^= prod
        rank += 1
    return rank


def _rank_generic(rows: list[list[int]], field: FieldDescriptor) -> int:
    nrows = len(rows)
    if nrows == 0:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for r in range(rank + 1, nrows):
            f = rows[r][col]
            if f:
                rows[r] = [field.sub(a, field.mul(f, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def matrix_rank(rows: Sequence[Sequence[int]], field: FieldDescriptor) -> int:
    """Exact rank of a dense matrix of representatives over the given field."""
    if len(rows) == 0 or len(rows[0]) == 0:
        return 0
    if field.order == 2:
        return rank_gf2_bitrows(bitrows_from_lists(rows))
    if field.kind == "prime":
        return _rank_mod_p(np.asarray(rows, dtype=np.int64), field.p)
    return _rank_gf2k(np.asarray(rows, dtype=np.int64), field)


def determinant(rows: Sequence[Sequence[int]], field: FieldDescriptor) -> int:
    """Determinant of a square matrix by elimination; returns a representative."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant requires a square matrix")
    if field.kind == "binary" and 2 <= field.k <= 16:
        return _det_gf2k_tables(rows, field)
    m = [list(r) for r in rows]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = field.neg(det)
        pivval = m[col][col]
        det = field.mul(det, pivval)
        inv = field.inv(pivval)
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                scale = field.mul(f, inv)
                mr = m[r]
                mc = m[col]
                for c in range(col, n):
                    mr[c] = field.sub(mr[c], field.mul(scale, mc[c]))
    return det


def _det_gf2k_tables(rows: Sequence[Sequence[int]], field: FieldDescriptor) -> int:
    """Elimination determinant with discrete-log multiplication (binary field)."""
    exp, log = discrete_log_tables(field)
    order_m1 = field.order - 1
    n = len(rows)
    m = [list(r) for r in rows]
    det_log = 0
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]  # char 2: swaps do not flip sign
        mc = m[col]
        pivval = mc[col]
        det_log = (det_log + log[pivval]) % order_m1
        inv_log = (order_m1 - log[pivval]) % order_m1
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                scale_log = (log[f] + inv_log) % order_m1
                mr = m[r]
                for c in range(col, n):
                    v = mc[c]
                    if v:
                        mr[c] ^= exp[scale_log + log[v]]
    return exp[det_log]


def solve_is_independent(vectors: Sequence[Sequence[int]], field: FieldDescriptor) -> bool:
    """True iff the given vectors are linearly independent over the field."""
    if len(vectors) == 0:
        return True
    return matrix_rank(vectors, field) == len(vectors)
