"""Exact arithmetic in finite fields F_{p^n} and their extension towers.

Fields are described by a prime p, an extension degree n, and a monic
irreducible modulus over F_p.  Elements are coefficient vectors over the
prime field.  All choices (default moduli, embeddings) are deterministic so
that downstream reports are reproducible byte for byte.

Conventions:
  * polynomials over F_p are little-endian tuples of ints (index i holds the
    coefficient of x^i);
  * the "smallest" polynomial of a given degree is the one whose coefficient
    vector encodes the smallest integer sum(c_i * p^i);
  * elements of F_{p^n} are enumerated in that same integer order.

Frobenius here always means the p-power map; negative powers are honest
inverse Frobenius (the fields are perfect, so p-th roots are exact).
"""

from __future__ import annotations

import threading
from typing import Iterator, Optional, Sequence, Tuple

from .errors import IncompatibleFields, NotPrime, ReducibleModulus

# Multiplication/log tables are only built for fields up to this size.
_TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (little-endian int tuples)
# ---------------------------------------------------------------------------

def _poly_trim(c: Sequence[int]) -> Tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> Tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int):
    """Quotient and remainder of a by b; b must be nonzero."""
    a = list(a)
    b = _poly_trim(b)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - db, 0)
    while len(_poly_trim(a)) - 1 >= db and any(a):
        a = list(_poly_trim(a))
        da = len(a) - 1
        if da < db:
            break
        coef = (a[-1] * inv_lead) % p
        q[da - db] = coef
        for i, bi in enumerate(b):
            a[da - db + i] = (a[da - db + i] - coef * bi) % p
    return _poly_trim(q), _poly_trim(a)


def _poly_from_int(value: int, p: int) -> Tuple[int, ...]:
    digits = []
    while value:
        digits.append(value % p)
        value //= p
    return tuple(digits)


def _poly_to_int(c: Sequence[int], p: int) -> int:
    out = 0
    for d in reversed(tuple(c)):
        out = out * p + d
    return out


def _poly_mulmod(a, b, mod, p):
    return _poly_divmod(_poly_mul(a, b, p), mod, p)[1]


def _poly_powmod(base, e: int, mod, p):
    result = (1,)
    base = _poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple((c * inv) % p for c in a)
    return a


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exact irreducibility of a monic polynomial over F_p.

    Desk-scale degrees use trial factorization (no monic divisor of degree
    up to deg/2); beyond that the gcd-power criterion takes over: f of degree
    n is irreducible iff x^(p^n) = x mod f and gcd(x^(p^(n/q)) - x, f) = 1
    for every prime q dividing n.  Both tests are deterministic and agree.
    """
    modulus = _poly_trim(modulus)
    deg = len(modulus) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if p ** (deg // 2) <= 4096:
        for d in range(1, deg // 2 + 1):
            for low in range(p ** d):
                body = _poly_from_int(low, p)
                cand = body + (0,) * (d - len(body)) + (1,)
                _, rem = _poly_divmod(modulus, cand, p)
                if not rem:
                    return False
        return True
    def sub(a, b):
        size = max(len(a), len(b))
        return _poly_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                           for i in range(size)])

    x = (0, 1)
    top = _poly_powmod(x, p ** deg, modulus, p)
    if sub(top, x):
        return False
    n = deg
    primes = []
    t = n
    f = 2
    while f * f <= t:
        if t % f == 0:
            primes.append(f)
            while t % f == 0:
                t //= f
        f += 1
    if t > 1:
        primes.append(t)
    for q in primes:
        xp = _poly_powmod(x, p ** (n // q), modulus, p)
        g = _poly_gcd(sub(xp, x), modulus, p)
        if len(g) - 1 != 0:
            return False
    return True


def _default_modulus(p: int, n: int) -> Tuple[int, ...]:
    """Smallest monic irreducible of degree n (integer-encoding order)."""
    if n == 1:
        return (0, 1)
    for low in range(p ** n):
        body = _poly_from_int(low, p)
        cand = body + (0,) * (n - len(body)) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# field descriptors and elements
# ---------------------------------------------------------------------------

class FieldDesc:
    """A finite field F_{p^n} with a fixed monic irreducible modulus.

    Instances are interned: :func:`make_field` returns the same object for
    the same (p, n, modulus), and element arithmetic requires identical
    descriptors (no silent coercion between fields).
    """

    __slots__ = ("p", "degree", "modulus", "order", "_reduction", "_log", "_exp")

    def __init__(self, p: int, degree: int, modulus: Tuple[int, ...]):
        self.p = p
        self.degree = degree
        self.modulus = modulus
        self.order = p ** degree
        # x^k mod modulus for k = n .. 2n-2, used by multiplication
        red = []
        if degree > 1:
            cur = tuple((-modulus[i]) % p for i in range(degree))  # x^n
            red.append(cur)
            for _ in range(degree - 2):
                shifted = (0,) + cur[:-1]
                top = cur[-1]
                nxt = tuple((shifted[i] + top * ((-modulus[i]) % p)) % p for i in range(degree))
                red.append(nxt)
                cur = nxt
        self._reduction = tuple(red)
        self._log = None
        self._exp = None

    # -- basic constructors -------------------------------------------------
    @property
    def zero(self) -> "FFElement":
        return FFElement(self, (0,) * self.degree)

    @property
    def one(self) -> "FFElement":
        return self.element_from_int(1)

    @property
    def gen(self) -> "FFElement":
        """The class of x (equals 1 in the prime field)."""
        if self.degree == 1:
            return self.one
        return self.element_from_int(self.p)

    def element(self, coeffs: Sequence[int]) -> "FFElement":
        c = tuple(int(v) % self.p for v in coeffs)
        if len(c) > self.degree:
            raise ValueError("coefficient vector longer than field degree")
        return FFElement(self, c + (0,) * (self.degree - len(c)))

    def element_from_int(self, value: int) -> "FFElement":
        value %= self.order
        c = _poly_from_int(value, self.p)
        return FFElement(self, c + (0,) * (self.degree - len(c)))

    def elements(self) -> Iterator["FFElement"]:
        """All field elements in canonical (integer-encoding) order."""
        for v in range(self.order):
            yield self.element_from_int(v)

    # -- arithmetic kernels --------------------------------------------------
    def _mul_coeffs(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        p, n = self.p, self.degree
        if n == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = (prod[i + j] + ai * bj) % p
        out = list(prod[:n])
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                red = self._reduction[k - n]
                for i in range(n):
                    out[i] = (out[i] + c * red[i]) % p
        return tuple(out)

    def _ensure_tables(self) -> bool:
        if self._log is not None:
            return True
        if self.order > _TABLE_LIMIT:
            return False
        # find a multiplicative generator, smallest first
        q1 = self.order - 1
        prime_factors = []
        t = q1
        f = 2
        while f * f <= t:
            if t % f == 0:
                prime_factors.append(f)
                while t % f == 0:
                    t //= f
            f += 1
        if t > 1:
            prime_factors.append(t)
        gen_coeffs = None
        for v in range(2, self.order):
            c = self.element_from_int(v).coeffs
            ok = True
            for ell in prime_factors:
                if self._pow_coeffs_raw(c, q1 // ell) == self.one.coeffs:
                    ok = False
                    break
            if ok:
                gen_coeffs = c
                break
        if gen_coeffs is None:  # F_2 has trivial group
            gen_coeffs = self.one.coeffs
        exp = [self.one.coeffs]
        cur = self.one.coeffs
        for _ in range(q1 - 1):
            cur = self._mul_coeffs(cur, gen_coeffs)
            exp.append(cur)
        self._exp = exp
        self._log = {c: i for i, c in enumerate(exp)}
        return True

    def _pow_coeffs_raw(self, a: Tuple[int, ...], e: int) -> Tuple[int, ...]:
        result = self.one.coeffs
        base = a
        while e:
            if e & 1:
                result = self._mul_coeffs(result, base)
            base = self._mul_coeffs(base, base)
            e >>= 1
        return result

    def _pow_coeffs(self, a: Tuple[int, ...], e: int) -> Tuple[int, ...]:
        if all(v == 0 for v in a):
            if e == 0:
                raise ZeroDivisionError("0^0 in finite field")
            return a
        e %= self.order - 1
        if self._log is not None or self._ensure_tables():
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        return self._pow_coeffs_raw(a, e)

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.degree}"


class FFElement:
    """An element of a :class:`FieldDesc`, stored as a coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDesc, coeffs: Tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "FFElement":
        if isinstance(other, FFElement):
            if other.field is not self.field:
                raise IncompatibleFields(
                    f"mixed arithmetic between {self.field!r} and {other.field!r}"
                )
            return other
        if isinstance(other, int):
            return self.field.element_from_int(other % self.field.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FFElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FFElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.field.p
        return FFElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElement(self.field, self.field._mul_coeffs(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.field.one
        return FFElement(self.field, self.field._pow_coeffs(self.coeffs, e))

    def inverse(self) -> "FFElement":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        return FFElement(self.field, self.field._pow_coeffs(self.coeffs, self.field.order - 2))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field.element_from_int(other % self.field.p)
        if not isinstance(other, FFElement):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def to_int(self) -> int:
        return _poly_to_int(self.coeffs, self.field.p)

    def __repr__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

_registry: dict = {}
_registry_lock = threading.Lock()
_embedding_cache: dict = {}


def make_field(p: int, n: int, modulus: Optional[Sequence[int]] = None) -> FieldDesc:
    """Construct (or fetch the interned) F_{p^n}.

    When ``modulus`` is omitted the smallest monic irreducible of degree n is
    chosen, so repeated calls are reproducible.  A supplied modulus must be
    monic of degree n and irreducible; anything else raises
    :class:`ReducibleModulus`.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise ValueError("degree must be >= 1")
    if modulus is None:
        mod = _default_modulus(p, n)
    else:
        mod = tuple(int(c) % p for c in modulus)
        mod = _poly_trim(mod)
        if len(mod) != n + 1 or mod[-1] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {n}")
        if not _is_irreducible(mod, p):
            raise ReducibleModulus(f"{mod} is reducible over F_{p}")
    key = (p, n, mod)
    with _registry_lock:
        field = _registry.get(key)
        if field is None:
            field = FieldDesc(p, n, mod)
            _registry[key] = field
    return field


def frobenius(x: FFElement, t: int) -> FFElement:
    """x^(p^t); t may be negative (inverse Frobenius / p-th roots)."""
    n = x.field.degree
    t %= n
    if t == 0 or not x:
        return x
    return x ** (x.field.p ** t)


# -- polynomial arithmetic with coefficients in an arbitrary field ----------

def _kpoly_trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _kpoly_sub(a: list, b: list, K: FieldDesc) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else K.zero
        y = b[i] if i < len(b) else K.zero
        out.append(x - y)
    return _kpoly_trim(out)


def _kpoly_divmod(a: list, b: list, K: FieldDesc):
    a = list(a)
    b = _kpoly_trim(list(b))
    db = len(b) - 1
    inv = b[-1].inverse()
    q = [K.zero] * max(len(a) - db, 0)
    a = _kpoly_trim(a)
    while a and len(a) - 1 >= db:
        f = a[-1] * inv
        pos = len(a) - 1 - db
        q[pos] = f
        for i in range(db + 1):
            a[pos + i] = a[pos + i] - f * b[i]
        a = _kpoly_trim(a)
    return q, a


def _kpoly_mulmod(a: list, b: list, mod: list, K: FieldDesc) -> list:
    prod = [K.zero] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = prod[i + j] + ai * bj
    return _kpoly_divmod(prod, mod, K)[1]


def _kpoly_powmod(base: list, e: int, mod: list, K: FieldDesc) -> list:
    result = [K.one]
    base = _kpoly_divmod(base, mod, K)[1]
    while e:
        if e & 1:
            result = _kpoly_mulmod(result, base, mod, K)
        base = _kpoly_mulmod(base, base, mod, K)
        e >>= 1
    return result


def _kpoly_gcd(a: list, b: list, K: FieldDesc) -> list:
    a, b = _kpoly_trim(list(a)), _kpoly_trim(list(b))
    while b:
        a, b = b, _kpoly_divmod(a, b, K)[1]
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _roots_in_field(poly_fp: Tuple[int, ...], K: FieldDesc) -> list:
    """All roots in K of a polynomial with prime-field coefficients.

    Deterministic gcd splitting: the candidate shifts are swept in canonical
    element order, so the returned (sorted) roots do not depend on chance.
    """
    f = _kpoly_trim([K.element((c,)) for c in poly_fp])
    x = [K.zero, K.one]
    xq = _kpoly_powmod(x, K.order, f, K)
    g = _kpoly_gcd(_kpoly_sub(xq, x, K), f, K)
    roots = []
    work = [g]
    linear = []
    candidates = K.elements()
    while work:
        poly = work.pop()
        deg = len(poly) - 1
        if deg <= 0:
            continue
        if deg == 1:
            linear.append(poly)
            continue
        split = None
        for c in candidates:
            if K.p == 2:
                # absolute-trace splitter: T(c x) = sum (c x)^(2^i)
                term = _kpoly_divmod([K.zero, c], poly, K)[1]
                total = list(term)
                for _ in range(K.degree - 1):
                    term = _kpoly_mulmod(term, term, poly, K)
                    total = [u + v for u, v in
                             zip(total + [K.zero] * len(term), term + [K.zero] * len(total))]
                total = _kpoly_trim(total[:max(len(total), 1)])
                h = _kpoly_gcd(total, poly, K)
            else:
                pw = _kpoly_powmod([c, K.one], (K.order - 1) // 2, poly, K)
                h = _kpoly_gcd(_kpoly_sub(pw, [K.one], K), poly, K)
            if 0 < len(h) - 1 < deg:
                split = h
                break
        if split is None:
            raise IncompatibleFields("root splitting failed")  # unreachable for split inputs
        other = _kpoly_divmod(poly, split, K)[0]
        work.append(split)
        work.append(_kpoly_trim(other))
    for lin in linear:
        roots.append(-(lin[0] * lin[1].inverse()))
    return sorted(roots, key=lambda z: z.to_int())


def _embedding_root(sub: FieldDesc, sup: FieldDesc) -> FFElement:
    key = (id(sub), id(sup))
    root = _embedding_cache.get(key)
    if root is not None:
        return root
    mod = sub.modulus
    if sup.order <= _TABLE_LIMIT:
        # first root of the subfield modulus in canonical element order
        for z in sup.elements():
            acc = sup.zero
            power = sup.one
            for c in mod:
                if c:
                    acc = acc + power * c
                power = power * z
            if not acc:
                _embedding_cache[key] = z
                return z
        raise IncompatibleFields("no root of subfield modulus in superfield")
    # same root (the minimal one in canonical order), found by gcd splitting
    roots = _roots_in_field(mod, sup)
    if not roots:
        raise IncompatibleFields("no root of subfield modulus in superfield")
    _embedding_cache[key] = roots[0]
    return roots[0]


def embed(x: FFElement, superfield: FieldDesc) -> FFElement:
    """Image of x under the fixed embedding of its field into ``superfield``.

    The embedding sends the subfield generator to the first root of the
    subfield modulus in the superfield's canonical element order; it is a ring
    homomorphism and injective.
    """
    sub = x.field
    if sub is superfield:
        return x
    if sub.p != superfield.p or superfield.degree % sub.degree != 0:
        raise IncompatibleFields(
            f"cannot embed {sub!r} into {superfield!r}"
        )
    root = _embedding_root(sub, superfield)
    acc = superfield.zero
    power = superfield.one
    for c in x.coeffs:
        if c:
            acc = acc + power * c
        power = power * root
    return acc
