"""Exact solving and counting for systems x = B x^[p] + C over finite fields.

x^[p] raises coordinates to the p-th power, so over any finite extension the
defining map is affine over the prime field; solving reduces to one F_p-linear
solve after expanding coordinates in a power basis.  Geometric (closed-field)
solution counts come from the stabilized rank of the twisted iterate of
x -> B x^[p], computed with entrywise inverse-Frobenius powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import NotSingular, WittcrysError
from .fields import FFElement, FieldDesc, embed, frobenius, make_field
from .linalg import det, first_dependent_row, fp_solve_affine, rref

Vector = Tuple[FFElement, ...]


@dataclass(frozen=True)
class ASSystem:
    """x = B x^[p] + C with all coefficients in one finite field."""

    field: FieldDesc
    nvars: int
    B: Tuple[Tuple[FFElement, ...], ...]
    C: Tuple[FFElement, ...]

    def __post_init__(self):
        n = self.nvars
        if len(self.B) != n or any(len(r) != n for r in self.B) or len(self.C) != n:
            raise WittcrysError("inconsistent system dimensions")
        for r in self.B:
            for e in r:
                if e.field is not self.field:
                    raise WittcrysError("B entry outside the stated field")
        for e in self.C:
            if e.field is not self.field:
                raise WittcrysError("C entry outside the stated field")


def as_system(field: FieldDesc, B: Sequence[Sequence[FFElement]],
              C: Sequence[FFElement]) -> ASSystem:
    return ASSystem(field, len(C), tuple(tuple(r) for r in B), tuple(C))


@dataclass(frozen=True)
class SolutionSet:
    """All solutions over one fixed extension field.

    ``all`` is ``particular`` translated by the homogeneous solutions when a
    particular solution exists (torsor structure); every list is sorted by the
    coordinate coefficient vectors so output is reproducible.
    """

    field: FieldDesc
    particular: Optional[Vector]
    homogeneous: Tuple[Vector, ...]
    all: Tuple[Vector, ...]


def _sol_key(v: Vector):
    return tuple(x.coeffs for x in v)


def solve_over(sys: ASSystem, ext_degree: int) -> SolutionSet:
    """All solutions with coordinates in the degree-``ext_degree`` extension.

    The map x -> x - B x^[p] - C is affine over F_p once each coordinate is
    expanded in a power basis, so this is a single exact linear solve; the
    homogeneous space is enumerated (its F_p-dimension never exceeds nvars).
    """
    if ext_degree < 1:
        raise WittcrysError("extension degree must be >= 1")
    base = sys.field
    p, n = base.p, sys.nvars
    K = base if ext_degree == 1 else make_field(p, base.degree * ext_degree)
    Bk = [[embed(e, K) for e in row] for row in sys.B]
    Ck = [embed(e, K) for e in sys.C]
    N = K.degree
    dim = n * N
    basis = [K.element_from_int(p ** j) for j in range(N)]  # 1, z, z^2, ...

    columns: List[List[int]] = []
    for i in range(n):
        for j in range(N):
            bj = basis[j]
            bjp = bj ** p
            col = [0] * dim
            for r in range(n):
                entry = (bj if r == i else K.zero) - Bk[r][i] * bjp
                for t, c in enumerate(entry.coeffs):
                    col[r * N + t] = (col[r * N + t] + c) % p
            columns.append(col)
    rows = [[columns[c][r] for c in range(dim)] for r in range(dim)]
    rhs = [0] * dim
    for r in range(n):
        for t, c in enumerate(Ck[r].coeffs):
            rhs[r * N + t] = c

    particular_vec, kernel = fp_solve_affine(rows, rhs, p)

    def decode(flat: List[int]) -> Vector:
        out = []
        for i in range(n):
            acc = K.zero
            for j in range(N):
                if flat[i * N + j]:
                    acc = acc + basis[j] * flat[i * N + j]
            out.append(acc)
        return tuple(out)

    homogeneous = []
    k = len(kernel)
    for mask in range(p ** k):
        combo = [0] * dim
        mm = mask
        for v in kernel:
            c = mm % p
            mm //= p
            if c:
                combo = [(a + c * b) % p for a, b in zip(combo, v)]
        homogeneous.append(decode(combo))
    homogeneous.sort(key=_sol_key)

    if particular_vec is None:
        return SolutionSet(K, None, tuple(homogeneous), ())
    particular = decode(particular_vec)
    allsol = sorted(
        (tuple(a + b for a, b in zip(particular, h)) for h in homogeneous),
        key=_sol_key)
    return SolutionSet(K, particular, tuple(homogeneous), tuple(allsol))


def _inv_frob_matrix(B, t: int):
    return [[frobenius(e, -t) for e in row] for row in B]


def _mat_mul_field(a, b, field: FieldDesc):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = field.zero
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def geometric_count(sys: ASSystem) -> Tuple[int, int]:
    """(m, p^m): the closed-field homogeneous solution count.

    m is the stabilized rank of the n-fold twisted iterate of x -> B x^[p],
    formed as the product of the entrywise inverse-Frobenius twists
    B^[p^-n] * ... * B^[p^-1] (most-twisted factor leftmost, matching the
    order in which the substitution x = B x^[p] composes with itself); the
    image chain stabilizes within n factors.
    """
    n = sys.nvars
    field = sys.field
    if n == 0:
        return 0, 1
    prod = _inv_frob_matrix(sys.B, n)
    for t in range(n - 1, 0, -1):
        prod = _mat_mul_field(prod, _inv_frob_matrix(sys.B, t), field)
    m = len(rref([list(r) for r in prod])[1])
    return m, field.p ** m


def boundary_test(sys: ASSystem) -> bool:
    """True iff the projective closure meets the hyperplane at infinity.

    Equivalent to the singularity of the entrywise p-th-root matrix B1 (which
    satisfies B1^[p] = B).
    """
    n = sys.nvars
    B1 = _inv_frob_matrix(sys.B, 1)
    return not det([list(r) for r in B1]) if n else False


@dataclass(frozen=True)
class RecoverMap:
    """Affine reconstruction of the eliminated variable.

    The eliminated coordinate equals sum(coeffs[i] * x_i) + offset, with the
    sum over the surviving variables in their reduced order; coefficients live
    in the original base field and are embedded on application, so recovery
    works over every extension.
    """

    index: int  # position of the eliminated variable in the original order
    coeffs: Tuple[FFElement, ...]
    offset: FFElement

    def apply(self, reduced: Sequence[FFElement], K: FieldDesc) -> Vector:
        val = embed(self.offset, K)
        for c, x in zip(self.coeffs, reduced):
            val = val + embed(c, K) * x
        full = list(reduced)
        full.insert(self.index, val)
        return tuple(full)


def eliminate_variable(sys: ASSystem) -> Tuple[ASSystem, RecoverMap]:
    """Remove one variable using a row dependency of the p-th-root matrix.

    Requires boundary_test(sys) to hold (B1 singular).  The dependent row is
    the first row expressible in earlier rows; substituting the induced linear
    relation yields an (n-1)-variable system whose solutions correspond
    bijectively to the original ones through the returned RecoverMap.
    """
    field = sys.field
    n = sys.nvars
    B1 = _inv_frob_matrix(sys.B, 1)
    dep = first_dependent_row([list(r) for r in B1])
    if dep is None:
        raise NotSingular("the p-th-root matrix is invertible")
    r_idx, d = dep
    p = field.p
    dp = [c ** p for c in d]  # row_r of B = sum(dp_i * row_i of B)
    offset = sys.C[r_idx]
    for i, c in enumerate(dp):
        offset = offset - c * sys.C[i]
    # x_r = sum(dp_i * x_i) + offset; substitute x_r^p into the other rows
    dpp = [c ** p for c in dp]
    offp = offset ** p
    keep = [i for i in range(n) if i != r_idx]
    newB = []
    newC = []
    for j in keep:
        row = []
        for i in keep:
            entry = sys.B[j][i]
            if i < r_idx:
                entry = entry + sys.B[j][r_idx] * dpp[i]
            row.append(entry)
        newB.append(tuple(row))
        newC.append(sys.C[j] + sys.B[j][r_idx] * offp)
    reduced = ASSystem(field, n - 1, tuple(newB), tuple(newC))
    # coefficients of the recovery in reduced variable order: only variables
    # originally before r_idx can appear in the dependency
    coeffs = []
    for i in keep:
        coeffs.append(dp[i] if i < r_idx else field.zero)
    recover = RecoverMap(r_idx, tuple(coeffs), offset)
    return reduced, recover


def moore_determinant(w: Sequence[FFElement]) -> FFElement:
    """det of the matrix with entry (i, j) = w_i^(p^(j-1)).

    Nonzero exactly when the w_i are linearly independent over F_p.
    """
    if not w:
        raise WittcrysError("empty element list")
    field = w[0].field
    k = len(w)
    mat = [[frobenius(w[i], j) for j in range(k)] for i in range(k)]
    return det(mat)
