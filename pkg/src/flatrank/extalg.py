"""Exterior algebra over characteristic-2 fields.

Grade-r elements keep a sparse map from r-subsets of [n] (n-bit masks) to
nonzero field values.  In characteristic 2 the wedge is commutative and free
of signs: the coordinate of u ^ v at K is the sum of u(I) * v(J) over disjoint
splittings I | J = K, and the coordinates of a wedge of grade-1 vectors are
exactly the maximal minors of their stacked matrix.  A wedge of vectors
vanishes precisely when the vectors are linearly dependent, which is the
engine behind the disjointness-detecting tensors in the rainbow module.

Moment-curve vectors (1, t, t^2, ...) for pairwise-distinct parameters t give
deterministic general-position families: any n of them are independent by the
Vandermonde determinant.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .field import FieldDescriptor

__all__ = [
    "ExtVector",
    "wedge",
    "add_ext",
    "scalar_mul_ext",
    "ext_basis_vector",
    "grade1_vector",
    "wedge_of_vectors",
    "top_coefficient",
    "moment_curve_vectors",
]


def _require_char2(field: FieldDescriptor) -> None:
    if field.characteristic != 2:
        raise ValueError(f"exterior algebra support is restricted to characteristic 2, got {field}")


@dataclass(frozen=True)
class ExtVector:
    """Homogeneous element of grade ``grade`` in the exterior algebra of F^n.

    ``coords`` maps n-bit masks of popcount ``grade`` to nonzero representatives.
    A grade above n is legal and forces the zero vector (no such subsets exist).
    """

    n: int
    grade: int
    field: FieldDescriptor
    coords: Mapping[int, int] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        _require_char2(self.field)
        if not 0 <= self.n <= 63:
            raise ValueError("ambient dimension must be in 0..63")
        if self.grade < 0:
            raise ValueError("grade must be nonnegative")
        for mask, val in self.coords.items():
            if mask >> self.n or mask.bit_count() != self.grade:
                raise ValueError(f"key {mask:#x} is not a {self.grade}-subset of [{self.n}]")
            self.field.validate(val)
            if val == 0:
                raise ValueError("coords must omit zero values")

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtVector):
            return NotImplemented
        return (
            self.n == other.n
            and self.grade == other.grade
            and self.field == other.field
            and dict(self.coords) == dict(other.coords)
        )


def _check_compatible(u: ExtVector, v: ExtVector) -> None:
    if u.n != v.n:
        raise ValueError(f"ambient dimension mismatch: {u.n} vs {v.n}")
    if u.field != v.field:
        raise ValueError(f"field mismatch: {u.field} vs {v.field}")


def wedge(u: ExtVector, v: ExtVector) -> ExtVector:
    """Wedge product; bilinear, associative, and commutative (characteristic 2)."""
    _check_compatible(u, v)
    f = u.field
    out: dict[int, int] = {}
    for i_mask, a in u.coords.items():
        for j_mask, b in v.coords.items():
            if i_mask & j_mask:
                continue
            k_mask = i_mask | j_mask
            prev = out.get(k_mask, 0)
            acc = f.add(prev, f.mul(a, b))
            if acc:
                out[k_mask] = acc
            elif k_mask in out:
                del out[k_mask]
    return ExtVector(n=u.n, grade=u.grade + v.grade, field=f, coords=out)


def add_ext(u: ExtVector, v: ExtVector) -> ExtVector:
    _check_compatible(u, v)
    if u.grade != v.grade:
        raise ValueError(f"grade mismatch: {u.grade} vs {v.grade}")
    f = u.field
    out = dict(u.coords)
    for mask, b in v.coords.items():
        acc = f.add(out.get(mask, 0), b)
        if acc:
            out[mask] = acc
        elif mask in out:
            del out[mask]
    return ExtVector(n=u.n, grade=u.grade, field=f, coords=out)


def scalar_mul_ext(c: int, u: ExtVector) -> ExtVector:
    f = u.field
    f.validate(c)
    if c == 0:
        return ExtVector(n=u.n, grade=u.grade, field=f, coords={})
    return ExtVector(
        n=u.n, grade=u.grade, field=f, coords={m: f.mul(c, v) for m, v in u.coords.items()}
    )


def ext_basis_vector(n: int, mask: int, field: FieldDescriptor) -> ExtVector:
    """e_I for the subset given as a mask."""
    return ExtVector(n=n, grade=mask.bit_count(), field=field, coords={mask: 1})


def grade1_vector(vec: Sequence[int], field: FieldDescriptor) -> ExtVector:
    n = len(vec)
    coords = {1 << i: field.validate(v) for i, v in enumerate(vec) if v}
    return ExtVector(n=n, grade=1, field=field, coords=coords)


def wedge_of_vectors(vs: Sequence[Sequence[int]], field: FieldDescriptor) -> ExtVector:
    """Iterated wedge of grade-1 vectors; zero iff they are linearly dependent.

    The coordinate at an r-subset I equals the r x r minor of the stacked
    matrix on columns I (sign-free in characteristic 2).
    """
    _require_char2(field)
    if not vs:
        raise ValueError("need at least one vector")
    n = len(vs[0])
    if any(len(v) != n for v in vs):
        raise ValueError("vectors must share a common length")
    if len(vs) > n:
        raise ValueError(f"cannot wedge {len(vs)} vectors in dimension {n}")
    acc = grade1_vector(vs[0], field)
    for v in vs[1:]:
        acc = wedge(acc, grade1_vector(v, field))
    return acc


def top_coefficient(w: ExtVector) -> int:
    """The scalar identifying a top-grade element with a multiple of e_1^...^e_n."""
    if w.grade != w.n:
        raise ValueError(f"top coefficient needs grade {w.n}, got grade {w.grade}")
    return w.coords.get((1 << w.n) - 1, 0)


def moment_curve_vectors(m: int, n: int, field: FieldDescriptor) -> list[tuple[int, ...]]:
    """m moment-curve vectors (1, t, ..., t^(n-1)) in general position.

    Parameter j is the (j+1)-st nonzero field element in increasing
    representative order; distinct parameters make every n-subset a Vandermonde
    system, hence independent.
    """
    _require_char2(field)
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    if m >= field.order:
        raise ValueError(f"{field} has fewer than {m} nonzero elements")
    out = []
    for j in range(1, m + 1):
        t = j
        row = [1]
        for _ in range(n - 1):
            row.append(field.mul(row[-1], t))
        out.append(tuple(row))
    return out
