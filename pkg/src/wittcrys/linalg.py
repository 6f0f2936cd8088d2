"""Exact linear algebra over finite fields and over truncated Witt rings.

Field-side routines use plain Gaussian elimination with deterministic
pivoting (first usable row/column).  The W_m routines exploit that W_m is a
local ring: a square matrix is invertible iff it is invertible mod p, and
inverses are obtained by Newton lifting of a mod-p inverse through the
precision levels.  Span membership over W_m uses valuation-pivoted column
elimination; division by p is exact (shift plus inverse Frobenius).
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .fields import FFElement, FieldDesc, frobenius
from .witt import WittStructure, WittVector, sigma_inv, witt_mul, witt_one, witt_zero

Matrix = List[List[FFElement]]


# ---------------------------------------------------------------------------
# finite-field matrices
# ---------------------------------------------------------------------------

def identity(field: FieldDesc, n: int) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    field = a[0][0].field
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = field.zero
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a: Matrix, x: Sequence[FFElement]) -> List[FFElement]:
    field = a[0][0].field if a and a[0] else x[0].field
    out = []
    for row in a:
        acc = field.zero
        for aij, xj in zip(row, x):
            acc = acc + aij * xj
        out.append(acc)
    return out


def rref(mat: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns (deterministic)."""
    m = [list(row) for row in mat]
    if not m or not m[0]:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat: Matrix) -> int:
    return len(rref(mat)[1])


def solve(mat: Matrix, rhs: Sequence[FFElement]) -> Optional[List[FFElement]]:
    """One solution of mat . x = rhs, or None.  Free variables are set to 0."""
    if not mat:
        return []
    rows, cols = len(mat), len(mat[0])
    field = mat[0][0].field
    aug = [list(mat[i]) + [rhs[i]] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None  # pivot in the rhs column: inconsistent
    x = [field.zero] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def nullspace(mat: Matrix, cols: Optional[int] = None) -> List[List[FFElement]]:
    """Deterministic basis of the right kernel."""
    if not mat:
        return []
    ncols = cols if cols is not None else len(mat[0])
    field = mat[0][0].field
    red, pivots = rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def inverse(mat: Matrix) -> Optional[Matrix]:
    n = len(mat)
    field = mat[0][0].field
    aug = [list(mat[i]) + identity(field, n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def det(mat: Matrix) -> FFElement:
    n = len(mat)
    field = mat[0][0].field
    m = [list(row) for row in mat]
    result = field.one
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            return field.zero
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            result = -result
        result = result * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def first_dependent_row(mat: Matrix) -> Optional[Tuple[int, List[FFElement]]]:
    """Smallest r with row_r in the span of rows 0..r-1, plus the coefficients.

    Returns (r, [d_0, ..., d_{r-1}]) with row_r = sum(d_i * row_i), or None
    when all rows are independent.
    """
    if not mat:
        return None
    field = mat[0][0].field
    ncols = len(mat[0])
    # each basis entry: (reduced vector, its original row index, expansion e)
    # satisfying reduced = row_orig - sum(e[i] * row_i)
    basis: List[Tuple[List[FFElement], int, List[FFElement]]] = []
    for r, row in enumerate(mat):
        vec = list(row)
        e = [field.zero] * r
        for bvec, borig, bexp in basis:
            lead = next((c for c in range(ncols) if bvec[c]), None)
            if lead is not None and vec[lead]:
                f = vec[lead] * bvec[lead].inverse()
                vec = [a - f * b for a, b in zip(vec, bvec)]
                e[borig] = e[borig] + f
                for i in range(len(bexp)):
                    e[i] = e[i] - f * bexp[i]
        if not any(vec):
            return r, e
        basis.append((vec, r, e))
    return None


# ---------------------------------------------------------------------------
# prime-field matrices as plain ints (hot paths)
# ---------------------------------------------------------------------------

def fp_rref(rows: List[List[int]], p: int) -> Tuple[List[List[int]], List[int]]:
    m = [list(r) for r in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] % p), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def fp_solve_affine(rows: List[List[int]], rhs: List[int], p: int):
    """Particular solution and kernel basis of rows . x = rhs over F_p."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    red, pivots = fp_rref(aug, p)
    if ncols in pivots:
        return None, []
    particular = [0] * ncols
    for r, c in enumerate(pivots):
        particular[c] = red[r][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-red[r][f]) % p
        kernel.append(v)
    return particular, kernel


# ---------------------------------------------------------------------------
# W_m matrices
# ---------------------------------------------------------------------------

WMatrix = List[List[WittVector]]


def wm_identity(st: WittStructure, field: FieldDesc, n: int) -> WMatrix:
    one, zero = witt_one(st, field), witt_zero(st, field)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def wm_mat_mul(a: WMatrix, b: WMatrix) -> WMatrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    st, field = a[0][0].structure, a[0][0].field
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = witt_zero(st, field)
            for k in range(inner):
                acc = acc + witt_mul(a[i][k], b[k][j])
            row.append(acc)
        out.append(row)
    return out


def wm_mat_vec(a: WMatrix, x: Sequence[WittVector]) -> List[WittVector]:
    st, field = x[0].structure, x[0].field
    out = []
    for row in a:
        acc = witt_zero(st, field)
        for aij, xj in zip(row, x):
            acc = acc + witt_mul(aij, xj)
        out.append(acc)
    return out


def wm_reduce_mod_p(a: WMatrix) -> Matrix:
    return [[entry.comps[0] for entry in row] for row in a]


def wm_valuation(x: WittVector) -> int:
    """Index of the first nonzero component; m for the zero vector."""
    for i, c in enumerate(x.comps):
        if c:
            return i
    return x.structure.m


def wm_divide_p(x: WittVector, v: int) -> WittVector:
    """Exact division by p^v as a lift to full precision (top digits zero).

    Valid whenever the valuation of x is >= v; uses p*a = V(sigma(a)), so the
    quotient digits are inverse-Frobenius twists of the shifted components.
    """
    if v == 0:
        return x
    st, field = x.structure, x.field
    if any(x.comps[i] for i in range(v)):
        raise ValueError("element is not divisible by the requested power of p")
    shifted = x.comps[v:] + (field.zero,) * v
    return WittVector(st, field, tuple(frobenius(c, -v) for c in shifted))


def wm_scalar_inverse(x: WittVector) -> WittVector:
    """Inverse of a unit of W_m (unit <=> nonzero first component)."""
    st, field = x.structure, x.field
    if not x.comps[0]:
        raise ZeroDivisionError("not a unit in W_m")
    # Newton lift of the residue inverse: w <- w(2 - x w)
    w = WittVector(st, field, (x.comps[0].inverse(),) + (field.zero,) * (st.m - 1))
    two = witt_one(st, field) + witt_one(st, field)
    steps = 1
    while (1 << steps) < st.m:
        steps += 1
    for _ in range(steps):
        w = witt_mul(w, two - witt_mul(x, w))
    return w


def wm_inverse(a: WMatrix) -> Optional[WMatrix]:
    """Inverse of a square W_m matrix, or None if it is singular mod p."""
    st, field = a[0][0].structure, a[0][0].field
    n = len(a)
    a0 = [[entry.comps[0] for entry in row] for row in a]
    inv0 = inverse(a0)
    if inv0 is None:
        return None
    x = [[WittVector(st, field, (entry,) + (field.zero,) * (st.m - 1)) for entry in row]
         for row in inv0]
    two_i = [[(witt_one(st, field) + witt_one(st, field)) if i == j else witt_zero(st, field)
              for j in range(n)] for i in range(n)]
    steps = 1
    while (1 << steps) < st.m:
        steps += 1
    for _ in range(steps):
        ax = wm_mat_mul(a, x)
        corr = [[two_i[i][j] - ax[i][j] for j in range(n)] for i in range(n)]
        x = wm_mat_mul(x, corr)
    # verify exactly; Newton depth is sized for the precision, so this holds
    check = wm_mat_mul(a, x)
    ident = wm_identity(st, field, n)
    if check != ident:
        return None
    return x


def wm_in_span(columns: List[List[WittVector]], b: List[WittVector]) -> bool:
    """Is b in the W_m-span of the given column vectors?

    Valuation-pivoted column elimination; exact, no coefficient recovery.
    """
    if not b:
        return True
    st, field = b[0].structure, b[0].field
    cols = [list(c) for c in columns]
    target = list(b)
    nrows = len(b)
    used_rows = set()
    while True:
        best = None  # (valuation, col_index, row_index)
        for ci, col in enumerate(cols):
            for ri in range(nrows):
                if ri in used_rows:
                    continue
                v = wm_valuation(col[ri])
                if v < st.m and (best is None or v < best[0]):
                    best = (v, ci, ri)
        if best is None:
            break
        v, ci, ri = best
        pivot_col = cols.pop(ci)
        pivot = pivot_col[ri]
        unit_inv = wm_scalar_inverse(wm_divide_p(pivot, v))
        # clear row ri from the remaining columns and from the target
        def eliminate(vec: List[WittVector]) -> Optional[List[WittVector]]:
            e = vec[ri]
            ev = wm_valuation(e)
            if ev >= st.m:
                return vec
            if ev < v:
                return None
            q = witt_mul(wm_divide_p(e, v), unit_inv)
            return [x - witt_mul(q, y) for x, y in zip(vec, pivot_col)]
        new_cols = []
        for col in cols:
            r = eliminate(col)
            if r is None:
                # column has smaller valuation at this row than the pivot;
                # cannot happen because the pivot was chosen minimal
                raise AssertionError("pivot selection violated minimality")
            new_cols.append(r)
        cols = new_cols
        t = eliminate(target)
        if t is None:
            return False
        target = t
        used_rows.add(ri)
    return all(wm_valuation(x) >= st.m for x in target)
