"""Truncated Witt vectors W_m(F_{p^n}).

The ring structure is *defined* by the universal sum/product/negation
polynomials obtained from the ghost-map recursion over the integers; they are
generated once per (p, m), verified against the ghost identities (for m <= 4),
and reduced mod p for evaluation.

Because W_m(F_{p^n}) is also the length-m truncation of the unramified
extension Z_p[x]/(f~), every vector carries a second representation as a
polynomial with integer coefficients mod p^m ("unramified digits").  Ring
operations run on that representation by default -- it is orders of magnitude
faster -- and the test suite checks the two routes agree on random samples.
Either route is exact; there is no approximation anywhere.

Precision is capped (PRECISION_CAP, default 6): the universal polynomials
grow steeply with m, and the cap keeps construction at desk scale.
"""

from __future__ import annotations

import threading
from typing import List, Sequence, Tuple

from sympy import ZZ
from sympy.polys.rings import ring as _ring

from .errors import MismatchedStructure
from .fields import FFElement, FieldDesc, frobenius

PRECISION_CAP = 6

_structure_cache: dict = {}
_structure_lock = threading.Lock()
_gr_context_cache: dict = {}


def _exquo_ground(poly, c: int):
    """Exact division of an integer polynomial by c; loud failure otherwise."""
    q = poly.quo_ground(c)
    if q * c != poly:
        raise AssertionError("ghost recursion produced a non-integral quotient")
    return q


def _compile_terms(poly, p: int, nvars: int):
    """Reduce an integer polynomial mod p and flatten to (coeff, exponents)."""
    out = []
    for monom, coeff in poly.terms():
        c = int(coeff) % p
        if c:
            out.append((c, tuple(int(e) for e in monom[:nvars]) + tuple(int(e) for e in monom[nvars:])))
    return tuple(out)


class WittStructure:
    """Universal structure polynomials for W_m over characteristic p.

    ``sum_polys``/``prod_polys``/``neg_polys`` are integer polynomials in the
    2m variables x0..x_{m-1}, y0..y_{m-1} (negation uses only the x block).
    The ghost identities hold by construction; for m <= 4 they are re-verified
    by independent expansion when the structure is first built.
    """

    __slots__ = ("p", "m", "sum_polys", "prod_polys", "neg_polys",
                 "_sum_terms", "_prod_terms", "_neg_terms")

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        names = [f"x{i}" for i in range(m)] + [f"y{i}" for i in range(m)]
        _, *gens = _ring(",".join(names), ZZ)
        xs, ys = gens[:m], gens[m:]

        def ghost(vars_, i):
            return sum(p ** j * vars_[j] ** (p ** (i - j)) for j in range(i + 1))

        S: List = []
        P: List = []
        N: List = []
        for n in range(m):
            num_s = ghost(xs, n) + ghost(ys, n) - sum(p ** i * S[i] ** (p ** (n - i)) for i in range(n))
            S.append(_exquo_ground(num_s, p ** n) if n else num_s)
            num_p = ghost(xs, n) * ghost(ys, n) - sum(p ** i * P[i] ** (p ** (n - i)) for i in range(n))
            P.append(_exquo_ground(num_p, p ** n) if n else num_p)
            num_n = -ghost(xs, n) - sum(p ** i * N[i] ** (p ** (n - i)) for i in range(n))
            N.append(_exquo_ground(num_n, p ** n) if n else num_n)
        self.sum_polys = tuple(S)
        self.prod_polys = tuple(P)
        self.neg_polys = tuple(N)

        if m <= 4:
            self._verify_ghost_identities(xs, ys, ghost)

        self._sum_terms = tuple(_compile_terms(s, p, m) for s in S)
        self._prod_terms = tuple(_compile_terms(q, p, m) for q in P)
        self._neg_terms = tuple(_compile_terms(q, p, m) for q in N)

    def _verify_ghost_identities(self, xs, ys, ghost):
        p = self.p
        for i in range(self.m):
            lhs_sum = sum(p ** j * self.sum_polys[j] ** (p ** (i - j)) for j in range(i + 1))
            if lhs_sum != ghost(xs, i) + ghost(ys, i):
                raise AssertionError(f"ghost identity fails for S_{i} (p={p})")
            lhs_prod = sum(p ** j * self.prod_polys[j] ** (p ** (i - j)) for j in range(i + 1))
            if lhs_prod != ghost(xs, i) * ghost(ys, i):
                raise AssertionError(f"ghost identity fails for P_{i} (p={p})")
            lhs_neg = sum(p ** j * self.neg_polys[j] ** (p ** (i - j)) for j in range(i + 1))
            if lhs_neg != -ghost(xs, i):
                raise AssertionError(f"ghost identity fails for N_{i} (p={p})")

    # -- slow-but-defining evaluation route ---------------------------------
    def eval_terms(self, terms, values: Sequence[FFElement]) -> FFElement:
        field = values[0].field
        acc = field.zero.coeffs
        pow_cache = {}
        vals = [v.coeffs for v in values]
        for coeff, exps in terms:
            term = None
            for idx, e in enumerate(exps):
                if e:
                    key = (idx, e)
                    v = pow_cache.get(key)
                    if v is None:
                        v = field._pow_coeffs(vals[idx], e) if any(vals[idx]) else vals[idx]
                        pow_cache[key] = v
                    term = v if term is None else field._mul_coeffs(term, v)
            if term is None:
                term = field.one.coeffs
            if coeff != 1:
                term = tuple((coeff * t) % field.p for t in term)
            acc = tuple((a + t) % field.p for a, t in zip(acc, term))
        return FFElement(field, acc)

    def sum_via_polynomials(self, a: "WittVector", b: "WittVector") -> "WittVector":
        vals = list(a.comps) + list(b.comps)
        return WittVector(self, a.field, tuple(self.eval_terms(t, vals) for t in self._sum_terms))

    def prod_via_polynomials(self, a: "WittVector", b: "WittVector") -> "WittVector":
        vals = list(a.comps) + list(b.comps)
        return WittVector(self, a.field, tuple(self.eval_terms(t, vals) for t in self._prod_terms))

    def neg_via_polynomials(self, a: "WittVector") -> "WittVector":
        vals = list(a.comps) + list(a.comps)  # y block unused by negation
        return WittVector(self, a.field, tuple(self.eval_terms(t, vals) for t in self._neg_terms))

    def __repr__(self) -> str:
        return f"WittStructure(p={self.p}, m={self.m})"


def witt_structure(p: int, m: int) -> WittStructure:
    """The cached structure polynomials for W_m in characteristic p."""
    if m < 1:
        raise ValueError("precision must be >= 1")
    if m > PRECISION_CAP:
        raise ValueError(f"precision {m} exceeds the configured cap {PRECISION_CAP}")
    key = (p, m)
    with _structure_lock:
        st = _structure_cache.get(key)
        if st is None:
            st = WittStructure(p, m)
            _structure_cache[key] = st
    return st


# ---------------------------------------------------------------------------
# unramified-digit (fast) representation
# ---------------------------------------------------------------------------

class _GRContext:
    """Arithmetic in Z[x]/(p^m, f~) for f~ the canonical lift of the modulus."""

    __slots__ = ("field", "m", "pm", "reduction", "_teich")

    def __init__(self, field: FieldDesc, m: int):
        self.field = field
        self.m = m
        self.pm = field.p ** m
        n = field.degree
        red = []
        if n > 1:
            lift = tuple(int(c) for c in field.modulus)
            cur = tuple((-lift[i]) % self.pm for i in range(n))  # x^n
            red.append(cur)
            for _ in range(n - 2):
                shifted = (0,) + cur[:-1]
                top = cur[-1]
                nxt = tuple((shifted[i] + top * ((-lift[i]) % self.pm)) % self.pm for i in range(n))
                red.append(nxt)
                cur = nxt
        self.reduction = tuple(red)
        self._teich = {}

    def mul(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        n = self.field.degree
        pm = self.pm
        if n == 1:
            return ((a[0] * b[0]) % pm,)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = (prod[i + j] + ai * bj) % pm
        out = list(prod[:n])
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                red = self.reduction[k - n]
                for i in range(n):
                    out[i] = (out[i] + c * red[i]) % pm
        return tuple(out)

    def add(self, a, b):
        pm = self.pm
        return tuple((x + y) % pm for x, y in zip(a, b))

    def neg(self, a):
        pm = self.pm
        return tuple((-x) % pm for x in a)

    def pow(self, a, e: int):
        result = (1,) + (0,) * (self.field.degree - 1)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def teichmuller(self, x: FFElement) -> Tuple[int, ...]:
        """Multiplicative lift: the fixed point of z -> z^(p^n) above x."""
        t = self._teich.get(x.coeffs)
        if t is not None:
            return t
        z = tuple(int(c) for c in x.coeffs)
        q = self.field.order
        for _ in range(max(self.m - 1, 1)):
            z = self.pow(z, q)
        self._teich[x.coeffs] = z
        return z

    def from_witt(self, comps: Sequence[FFElement]) -> Tuple[int, ...]:
        p = self.field.p
        acc = (0,) * self.field.degree
        for i, a in enumerate(comps):
            if a:
                t = self.teichmuller(frobenius(a, -i))
                acc = self.add(acc, tuple((p ** i * c) % self.pm for c in t))
        return acc

    def to_witt(self, z: Tuple[int, ...]) -> Tuple[FFElement, ...]:
        p = self.field.p
        comps = []
        cur = z
        for i in range(self.m):
            digit = self.field.element(tuple(c % p for c in cur))
            comps.append(frobenius(digit, i))
            if i == self.m - 1:
                break
            t = self.teichmuller(digit)
            diff = tuple((a - b) % self.pm for a, b in zip(cur, t))
            if any(c % p for c in diff):
                raise AssertionError("digit extraction failed: non-divisible residue")
            cur = tuple(c // p for c in diff)
        return tuple(comps)


def _gr_context(field: FieldDesc, m: int) -> _GRContext:
    key = (id(field), m)
    ctx = _gr_context_cache.get(key)
    if ctx is None:
        ctx = _GRContext(field, m)
        _gr_context_cache[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# vectors and ring operations
# ---------------------------------------------------------------------------

class WittVector:
    """An element of W_m(F_{p^n}): m field components plus cached digits."""

    __slots__ = ("structure", "field", "comps", "_gr")

    def __init__(self, structure: WittStructure, field: FieldDesc,
                 comps: Tuple[FFElement, ...], _gr: Tuple[int, ...] = None):
        if len(comps) != structure.m:
            raise ValueError("component count must equal the precision")
        self.structure = structure
        self.field = field
        self.comps = comps
        self._gr = _gr

    def _digits(self) -> Tuple[int, ...]:
        if self._gr is None:
            self._gr = _gr_context(self.field, self.structure.m).from_witt(self.comps)
        return self._gr

    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if other.structure is not self.structure or other.field is not self.field:
            raise MismatchedStructure("operands have different Witt structures or fields")

    def __add__(self, other):
        if isinstance(other, int):
            other = witt_from_int(self.structure, self.field, other)
        return witt_add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            other = witt_from_int(self.structure, self.field, other)
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        if isinstance(other, int):
            other = witt_from_int(self.structure, self.field, other)
        return witt_add(self, witt_neg(other))

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in W_m")
        result = witt_one(self.structure, self.field)
        base = self
        while e:
            if e & 1:
                result = witt_mul(result, base)
            base = witt_mul(base, base)
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        return (self.structure is other.structure and self.field is other.field
                and self.comps == other.comps)

    def __hash__(self) -> int:
        return hash((id(self.structure), id(self.field), tuple(c.coeffs for c in self.comps)))

    def __bool__(self) -> bool:
        return any(bool(c) for c in self.comps)

    def __repr__(self) -> str:
        return "(" + "; ".join(repr(c) for c in self.comps) + ")"


def witt_zero(structure: WittStructure, field: FieldDesc) -> WittVector:
    return WittVector(structure, field, (field.zero,) * structure.m)


def witt_one(structure: WittStructure, field: FieldDesc) -> WittVector:
    return teichmuller(field.one, structure.m)


def witt_from_int(structure: WittStructure, field: FieldDesc, k: int) -> WittVector:
    """The image of the integer k under Z -> W_m (unit digit expansion)."""
    ctx = _gr_context(field, structure.m)
    z = (k % ctx.pm,) + (0,) * (field.degree - 1)
    return WittVector(structure, field, ctx.to_witt(z), z)


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    ctx = _gr_context(a.field, a.structure.m)
    z = ctx.add(a._digits(), b._digits())
    return WittVector(a.structure, a.field, ctx.to_witt(z), z)


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    ctx = _gr_context(a.field, a.structure.m)
    z = ctx.mul(a._digits(), b._digits())
    return WittVector(a.structure, a.field, ctx.to_witt(z), z)


def witt_neg(a: WittVector) -> WittVector:
    ctx = _gr_context(a.field, a.structure.m)
    z = ctx.neg(a._digits())
    return WittVector(a.structure, a.field, ctx.to_witt(z), z)


def sigma(a: WittVector) -> WittVector:
    """Witt Frobenius: componentwise p-th power (coefficients are perfect)."""
    return WittVector(a.structure, a.field, tuple(frobenius(c, 1) for c in a.comps))


def sigma_inv(a: WittVector) -> WittVector:
    """Inverse of sigma: componentwise p-th roots."""
    return WittVector(a.structure, a.field, tuple(frobenius(c, -1) for c in a.comps))


def verschiebung(a: WittVector) -> WittVector:
    """Shift components right by one, truncating the last."""
    return WittVector(a.structure, a.field, (a.field.zero,) + a.comps[:-1])


def teichmuller(x: FFElement, m: int) -> WittVector:
    """The multiplicative lift (x, 0, ..., 0) in W_m."""
    st = witt_structure(x.field.p, m)
    return WittVector(st, x.field, (x,) + (x.field.zero,) * (m - 1))


def witt_scale_p(a: WittVector) -> WittVector:
    """Multiplication by p, computed exactly as V(sigma(a))."""
    return verschiebung(sigma(a))


def witt_p_power(structure: WittStructure, field: FieldDesc, e: int) -> WittVector:
    """p^e as an element of W_m."""
    return witt_from_int(structure, field, field.p ** e)
