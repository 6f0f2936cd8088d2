"""Compile horizontality equations at a point into a solvable system.

Inputs are already specialized at a k-point of the parameter chart: the
basis-expression matrix a_bar (row j holds the coordinates of e_j in the
twisted-image basis), its direction derivatives da_bar, the twisted images
phi_images (row i holds the coordinates of the weight-adjusted image of e_i),
and the chart coordinates z of the point.

Writing a candidate connection as the flat one plus sum x_{ijl} e_{ij} (x) dz_l
and identifying coefficients yields one equation per triple (i, j, l):

    x_{ijl} = L_{ijl}(x_{..l}^p) + c_{ijl},

where the linear form only involves variables x_{i'i2 l} with weights
(eps_{i'}, eps_{i2}) = (0, 1), with coefficient
a_bar[j][i2] * phi_images[i'][i] * z_l^(p-1), and the constant collects
sum_i phi_images[i][.] da_bar[j][i][l].  Directions never couple.

The infinitesimal-symmetry reduction imposes, for each direction, the
functionals vanishing on a given rank-d matrix subspace, eliminates the
pivot variables, and rewrites the system on the d * (#directions) survivors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .artin_schreier import ASSystem, as_system
from .errors import InconsistentInput, RankDeficientLie, WittcrysError
from .fields import FFElement, FieldDesc, embed
from .linalg import mat_mul, identity, nullspace, rank, rref


@dataclass(frozen=True)
class ConnectionInput:
    """Specialized coefficient data for the compiler.

    Conventions (all indices 1-based in the math, 0-based in storage):
      * a_bar[j][i] multiplies the i-th twisted image in the expansion of e_j;
      * phi_images[i][s] is the e_s-coordinate of the twisted image of e_i
        (for weight-0 rows this is the plain reduced operator image);
      * da_bar[j][i][l] is the dz_l-coefficient of the derivative of a_bar[j][i];
      * z_point[l] is the l-th coordinate of the point.

    The defining relation e_j = sum_i a_bar[j][i] * image_i, i.e.
    a_bar . phi_images = identity, is checked at construction.
    """

    field: FieldDesc
    d_M: int
    d: int
    eps: Tuple[int, ...]
    a_bar: Tuple[Tuple[FFElement, ...], ...]
    da_bar: Tuple[Tuple[Tuple[FFElement, ...], ...], ...]
    phi_images: Tuple[Tuple[FFElement, ...], ...]
    z_point: Tuple[FFElement, ...]

    def __post_init__(self):
        dm, d = self.d_M, self.d
        if d < 1:
            raise InconsistentInput("the parameter space must have dimension >= 1")
        if len(self.eps) != dm or any(e not in (0, 1) for e in self.eps):
            raise InconsistentInput("eps must be a 0/1 vector of length d_M")
        if len(self.a_bar) != dm or any(len(r) != dm for r in self.a_bar):
            raise InconsistentInput("a_bar must be d_M x d_M")
        if len(self.phi_images) != dm or any(len(r) != dm for r in self.phi_images):
            raise InconsistentInput("phi_images must be d_M x d_M")
        if (len(self.da_bar) != dm or any(len(r) != dm for r in self.da_bar)
                or any(len(c) != d for r in self.da_bar for c in r)):
            raise InconsistentInput("da_bar must be d_M x d_M x d")
        if len(self.z_point) != d:
            raise InconsistentInput("z_point must have length d")
        prod = mat_mul([list(r) for r in self.a_bar], [list(r) for r in self.phi_images])
        if prod != identity(self.field, dm):
            raise InconsistentInput("a_bar . phi_images is not the identity")


def connection_input(field: FieldDesc, eps: Sequence[int],
                     a_bar, da_bar, phi_images, z_point) -> ConnectionInput:
    dm = len(eps)
    d = len(z_point)
    return ConnectionInput(
        field, dm, d, tuple(int(e) for e in eps),
        tuple(tuple(r) for r in a_bar),
        tuple(tuple(tuple(c) for c in r) for r in da_bar),
        tuple(tuple(r) for r in phi_images),
        tuple(z_point))


def variable_index(d_M: int, d: int, i: int, j: int, l: int) -> int:
    """Flat position of x_{ijl}; i, j, l are 1-based."""
    return ((i - 1) * d_M + (j - 1)) * d + (l - 1)


def compile_system(inp: ConnectionInput) -> ASSystem:
    """The point-specialized system in d_M^2 * d variables.

    B is supported only on variable pairs with weights (0, 1), scaled by
    z_l^(p-1); compiling at the origin therefore always yields B = 0 and the
    unique solution x = C.
    """
    field = inp.field
    p = field.p
    dm, d = inp.d_M, inp.d
    nvars = dm * dm * d
    zero = field.zero
    B = [[zero] * nvars for _ in range(nvars)]
    C = [zero] * nvars
    zpow = [z ** (p - 1) if z else zero for z in inp.z_point]
    for l in range(1, d + 1):
        zl = zpow[l - 1]
        for j in range(1, dm + 1):
            for s in range(1, dm + 1):
                row = variable_index(dm, d, s, j, l)
                acc = zero
                for i0 in range(1, dm + 1):
                    acc = acc + inp.phi_images[i0 - 1][s - 1] * inp.da_bar[j - 1][i0 - 1][l - 1]
                C[row] = acc
                if not zl:
                    continue
                for i2 in range(1, dm + 1):
                    if inp.eps[i2 - 1] != 1:
                        continue
                    a = inp.a_bar[j - 1][i2 - 1]
                    if not a:
                        continue
                    for ip in range(1, dm + 1):
                        if inp.eps[ip - 1] != 0:
                            continue
                        coeff = a * inp.phi_images[ip - 1][s - 1] * zl
                        if coeff:
                            col = variable_index(dm, d, ip, i2, l)
                            B[row][col] = B[row][col] + coeff
    return as_system(field, B, C)


@dataclass(frozen=True)
class LieBasis:
    """d linearly independent d_M x d_M matrices spanning the allowed span."""

    field: FieldDesc
    dim: int
    mats: Tuple[Tuple[Tuple[FFElement, ...], ...], ...]

    def __post_init__(self):
        if self.dim != len(self.mats) or self.dim < 1:
            raise WittcrysError("dim must equal the number of matrices and be >= 1")


def lie_basis(field: FieldDesc, mats) -> LieBasis:
    return LieBasis(field, len(mats), tuple(tuple(tuple(r) for r in m) for m in mats))


@dataclass(frozen=True)
class LinearRecovery:
    """Reconstruction of the full variable vector from the reduced one.

    Eliminated (pivot) slots are homogeneous linear combinations of the free
    slots within the same direction; coefficients are embedded on application
    so recovery works over every extension field.
    """

    d_M: int
    d: int
    free_slots: Tuple[int, ...]     # flattened (i, j) positions kept, ascending
    pivot_slots: Tuple[int, ...]    # flattened positions eliminated
    expansion: Tuple[Tuple[FFElement, ...], ...]  # pivot -> coeffs over free slots

    def apply(self, reduced: Sequence[FFElement], K: FieldDesc) -> Tuple[FFElement, ...]:
        dm, d = self.d_M, self.d
        nred = len(self.free_slots)
        full = [K.zero] * (dm * dm * d)
        for l in range(d):
            for fpos, slot in enumerate(self.free_slots):
                full[slot * d + l] = reduced[fpos * d + l]
            for t, slot in enumerate(self.pivot_slots):
                acc = K.zero
                for fpos in range(nred):
                    c = self.expansion[t][fpos]
                    if c:
                        acc = acc + embed(c, K) * reduced[fpos * d + l]
                full[slot * d + l] = acc
        return tuple(full)

    def satisfies_constraints(self, full: Sequence[FFElement], lie: "LieBasis",
                              K: FieldDesc) -> bool:
        """Check the per-direction span constraints on a full vector."""
        dm, d = self.d_M, self.d
        flat_mats = [[embed(m[i][j], K) for i in range(dm) for j in range(dm)]
                     for m in lie.mats]
        for l in range(d):
            x = [full[slot * d + l] for slot in range(dm * dm)]
            # x must lie in the span of the flattened basis matrices
            rows = flat_mats + [x]
            if rank(rows) != len(flat_mats):
                return False
        return True


def reduce_by_lie_constraints(sys: ASSystem, lie: LieBasis) -> Tuple[ASSystem, LinearRecovery]:
    """Impose the span constraints per direction and eliminate pivot slots.

    For each direction the matrix X_l with entries x_{ijl} must lie in the
    span of the basis matrices; this is d_M^2 - d independent homogeneous
    conditions, eliminating that many variables per direction and leaving d
    per direction.  The reduced system keeps the equations of the surviving
    slots (substituted); recovered vectors satisfy the constraints and those
    equations, and the solutions of the original system satisfying the
    constraints correspond exactly to the reduced solutions whose recovery
    also satisfies the eliminated equations.
    """
    field = sys.field
    dm = len(lie.mats[0])
    if sys.nvars % (dm * dm):
        raise WittcrysError("variable count is not a multiple of d_M^2")
    d = sys.nvars // (dm * dm)
    flat = [[m[i][j] for i in range(dm) for j in range(dm)] for m in lie.mats]
    if rank([list(r) for r in flat]) != lie.dim:
        raise RankDeficientLie("basis matrices are linearly dependent")
    ann = nullspace([list(r) for r in flat], dm * dm)
    if not ann:
        # full matrix space: nothing to eliminate
        recovery = LinearRecovery(dm, d, tuple(range(dm * dm)), (), ())
        return sys, recovery
    red, pivots = rref([list(v) for v in ann])
    free = [c for c in range(dm * dm) if c not in pivots]
    # pivot slot = - sum over free slots of R[t][f] * x_f
    expansion = tuple(tuple(-red[t][f] for f in free) for t in range(len(pivots)))
    p = field.p
    exp_p = [[c ** p for c in row] for row in expansion]
    free_pos = {slot: idx for idx, slot in enumerate(free)}
    pivot_pos = {slot: idx for idx, slot in enumerate(pivots)}

    nred = len(free) * d
    zero = field.zero
    newB = [[zero] * nred for _ in range(nred)]
    newC = [zero] * nred

    def red_index(fpos: int, l: int) -> int:
        return fpos * d + l

    for fpos, slot in enumerate(free):
        for l in range(d):
            row_old = slot * d + l
            row_new = red_index(fpos, l)
            newC[row_new] = sys.C[row_old]
            for col_old in range(sys.nvars):
                coeff = sys.B[row_old][col_old]
                if not coeff:
                    continue
                cslot, cl = divmod(col_old, d)
                if cslot in free_pos:
                    newB[row_new][red_index(free_pos[cslot], cl)] = (
                        newB[row_new][red_index(free_pos[cslot], cl)] + coeff)
                else:
                    t = pivot_pos[cslot]
                    for f2, cexp in enumerate(exp_p[t]):
                        if cexp:
                            newB[row_new][red_index(f2, cl)] = (
                                newB[row_new][red_index(f2, cl)] + coeff * cexp)
    reduced = as_system(field, newB, newC)
    recovery = LinearRecovery(dm, d, tuple(free), tuple(pivots), expansion)
    return reduced, recovery
