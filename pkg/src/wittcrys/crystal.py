"""Cycle-type Dieudonne-style modules over truncated Witt vectors.

A cycle type is a permutation pi of {1..d} stored as disjoint cycles plus a
0/1 weight vector eps.  The associated standard module has a semilinear
operator acting on the canonical basis by phi(a_i) = p^(eps_i) * a_{pi(i)};
its Newton polygon is computed combinatorially (weight over length, one slope
per cycle), which is exact and independent of the working precision.

Index convention: a cycle (i_1, ..., i_q) means pi(i_j) = i_{j+1} and
pi(i_q) = i_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence, Tuple

from .errors import WittcrysError
from .fields import FieldDesc
from .linalg import det, wm_divide_p, wm_in_span, wm_valuation
from .witt import (WittStructure, WittVector, witt_p_power, witt_structure,
                   witt_zero)


class CycleType:
    """Disjoint cycles partitioning {1..d_M} plus Hodge weights eps."""

    __slots__ = ("cycles", "eps", "d_M", "_pi")

    def __init__(self, cycles: Sequence[Sequence[int]], eps: Sequence[int]):
        cycles = tuple(tuple(int(i) for i in c) for c in cycles)
        eps = tuple(int(e) for e in eps)
        seen = [i for c in cycles for i in c]
        d = len(seen)
        if sorted(seen) != list(range(1, d + 1)):
            raise WittcrysError(f"cycles {cycles} do not partition 1..{d}")
        if len(eps) != d or any(e not in (0, 1) for e in eps):
            raise WittcrysError("eps must be a 0/1 vector matching the rank")
        self.cycles = cycles
        self.eps = eps
        self.d_M = d
        pi: Dict[int, int] = {}
        for c in cycles:
            for j, i in enumerate(c):
                pi[i] = c[(j + 1) % len(c)]
        self._pi = pi

    def pi(self, i: int) -> int:
        return self._pi[i]

    def pi_power(self, i: int, t: int) -> int:
        for _ in range(t % self.order()):
            i = self._pi[i]
        return i

    def order(self) -> int:
        return lcm(*[len(c) for c in self.cycles])

    def cycle_of(self, i: int) -> Tuple[int, ...]:
        for c in self.cycles:
            if i in c:
                return c
        raise KeyError(i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleType):
            return NotImplemented
        return self.cycles == other.cycles and self.eps == other.eps

    def __hash__(self) -> int:
        return hash((self.cycles, self.eps))

    def __repr__(self) -> str:
        return f"CycleType(cycles={self.cycles}, eps={self.eps})"


@dataclass(frozen=True)
class Polygon:
    """Sorted (slope, multiplicity) pairs; slopes are exact rationals."""

    points: Tuple[Tuple[Fraction, int], ...]

    def __post_init__(self):
        slopes = [s for s, _ in self.points]
        if slopes != sorted(slopes) or len(set(slopes)) != len(slopes):
            raise WittcrysError("polygon slopes must be strictly increasing")
        if any(m <= 0 for _, m in self.points):
            raise WittcrysError("polygon multiplicities must be positive")
        if any(s < 0 or s > 1 for s, _ in self.points):
            raise WittcrysError("polygon slopes must lie in [0, 1]")

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.points)

    def total_rise(self) -> Fraction:
        return sum((s * m for s, m in self.points), Fraction(0))

    def slopes(self) -> Tuple[Fraction, ...]:
        return tuple(s for s, _ in self.points)


def _merge_polygon(pairs: Sequence[Tuple[Fraction, int]]) -> Polygon:
    acc: Dict[Fraction, int] = {}
    for s, m in pairs:
        acc[s] = acc.get(s, 0) + m
    return Polygon(tuple(sorted(acc.items())))


class StdModule:
    """Standard module (M, F^1, phi) for a cycle type, at finite precision.

    phi_matrix realizes phi on the canonical basis: column i-1 holds the
    coordinates of phi(a_i), a single entry p^(eps_i) in row pi(i)-1.  The
    lattice axioms (p M inside phi(M); phi(M + F^1/p) = M) are verified at
    construction.
    """

    __slots__ = ("p", "m", "field", "ctype", "phi_matrix", "hodge_rank", "structure")

    def __init__(self, p: int, m: int, field: FieldDesc, ctype: CycleType,
                 phi_matrix: List[List[WittVector]],
                 phi_over_p_columns: "List[List[WittVector]]" = None):
        self.p = p
        self.m = m
        self.field = field
        self.ctype = ctype
        self.phi_matrix = phi_matrix
        self.hodge_rank = sum(ctype.eps)
        self.structure = witt_structure(p, m)
        ok, reason = verify_lattice_axioms(self.structure, field, phi_matrix,
                                           ctype.eps, phi_over_p_columns)
        if not ok:
            raise WittcrysError(f"lattice axioms fail: {reason}")

    @property
    def d_M(self) -> int:
        return self.ctype.d_M

    def __repr__(self) -> str:
        return (f"StdModule(p={self.p}, m={self.m}, cycles={self.ctype.cycles}, "
                f"eps={self.ctype.eps})")


def verify_lattice_axioms(st: WittStructure, field: FieldDesc,
                          phi_matrix: List[List[WittVector]],
                          eps: Sequence[int],
                          phi_over_p_columns: List[List[WittVector]] = None) -> Tuple[bool, str]:
    """Check p*M in phi(M) and phi(M + F^1/p) = M by exact span computations.

    Accepts any phi matrix (not only cycle type).  The F^1/p part uses the
    weight-1 columns divided by p: pass them in ``phi_over_p_columns`` when
    they are known exactly (the standard modules do), otherwise they are read
    off the stored columns -- which requires m >= 2, since at precision 1 a
    multiple of p retains no information about its cofactor.
    """
    d = len(phi_matrix)
    if d == 0:
        return True, ""
    zero = witt_zero(st, field)
    columns = [[phi_matrix[r][c] for r in range(d)] for c in range(d)]
    # axiom 1: each p*e_j lies in the column span of phi
    p_unit = witt_p_power(st, field, 1)
    for j in range(d):
        target = [p_unit if r == j else zero for r in range(d)]
        if not wm_in_span(columns, target):
            return False, f"p*e_{j+1} not in phi(M)"
    # axiom 2: phi(M + F^1/p) = M, i.e. the adjusted columns span M
    adjusted = []
    for c in range(d):
        col = columns[c]
        if eps[c] == 1:
            if phi_over_p_columns is not None:
                col = phi_over_p_columns[c]
            else:
                if st.m < 2:
                    return False, ("cannot divide a weight-1 column by p at "
                                   "precision 1; supply phi_over_p_columns")
                if any(wm_valuation(x) < 1 for x in col if x):
                    return False, f"column {c+1} not divisible by p"
                col = [wm_divide_p(x, 1) for x in col]
        adjusted.append(col)
    mod_p = [[adjusted[c][r].comps[0] for c in range(d)] for r in range(d)]
    if not det(mod_p):
        return False, "phi(M + F^1/p) is a proper submodule"
    return True, ""


def standard_module(p: int, m: int, ctype: CycleType, field: FieldDesc) -> StdModule:
    """The matrix realization of phi(a_i) = p^(eps_i) a_{pi(i)}."""
    st = witt_structure(p, m)
    d = ctype.d_M
    zero = witt_zero(st, field)
    one = witt_p_power(st, field, 0)
    mat = [[zero for _ in range(d)] for _ in range(d)]
    over_p = []
    for i in range(1, d + 1):
        mat[ctype.pi(i) - 1][i - 1] = witt_p_power(st, field, ctype.eps[i - 1])
        # phi(a_i) / p = a_{pi(i)} exactly, at every precision
        over_p.append([one if r == ctype.pi(i) - 1 else zero for r in range(d)])
    return StdModule(p, m, field, ctype, mat, over_p)


def cycle_slope(cycle: Sequence[int], eps: Sequence[int]) -> Fraction:
    w = sum(eps[i - 1] for i in cycle)
    return Fraction(w, len(cycle))


def newton_polygon(mod: StdModule) -> Polygon:
    """One slope per cycle: (sum of eps over the cycle) / (cycle length)."""
    pairs = [(cycle_slope(c, mod.ctype.eps), len(c)) for c in mod.ctype.cycles]
    return _merge_polygon(pairs)


def hodge_polygon(mod: StdModule) -> Polygon:
    ones = mod.hodge_rank
    zeros = mod.d_M - ones
    pairs = []
    if zeros:
        pairs.append((Fraction(0), zeros))
    if ones:
        pairs.append((Fraction(1), ones))
    return Polygon(tuple(pairs))


def slope_decomposition(mod: StdModule) -> List[StdModule]:
    """One summand per cycle, with indices relabeled to 1..q in cycle order."""
    out = []
    for c in mod.ctype.cycles:
        q = len(c)
        sub = CycleType([tuple(range(1, q + 1))], [mod.ctype.eps[i - 1] for i in c])
        out.append(standard_module(mod.p, mod.m, sub, mod.field))
    return out


def has_slopes_0_and_1(mod: StdModule) -> bool:
    """Both slopes 0 and 1 present with positive multiplicity (fixed phi).

    This tests the fixed Frobenius of the standard module only; it does not
    search over twists of phi by group elements.
    """
    slopes = newton_polygon(mod).slopes()
    return Fraction(0) in slopes and Fraction(1) in slopes


def newton_above_hodge(mod: StdModule) -> bool:
    """Newton polygon lies on or above Hodge with equal endpoints.

    Both polygons are piecewise linear with slopes listed in increasing
    order; the comparison is exact in rationals.
    """
    def vertices(poly: Polygon) -> List[Tuple[int, Fraction]]:
        pts = [(0, Fraction(0))]
        x, y = 0, Fraction(0)
        for s, mult in poly.points:
            x += mult
            y += s * mult
            pts.append((x, y))
        return pts

    def height_at(poly_pts, x: int) -> Fraction:
        for (x0, y0), (x1, y1) in zip(poly_pts, poly_pts[1:]):
            if x0 <= x <= x1:
                if x0 == x1:
                    return y0
                return y0 + (y1 - y0) * Fraction(x - x0, x1 - x0)
        return poly_pts[-1][1]

    np_pts = vertices(newton_polygon(mod))
    hp_pts = vertices(hodge_polygon(mod))
    if np_pts[-1] != hp_pts[-1]:
        return False
    return all(height_at(np_pts, x) >= height_at(hp_pts, x)
               for x in range(mod.d_M + 1))
