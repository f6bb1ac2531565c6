"""Exact arithmetic in finite local rings of odd characteristic.

Three families are supported:

* ``ZMOD``   -- the integers modulo ``p**n``;
* ``GALOIS`` -- the Galois ring ``GR(p**n, r) = Z_{p^n}[x]/(f)`` with ``f``
  monic of degree ``r`` and irreducible modulo ``p``;
* ``TRUNC``  -- the truncated polynomial ring ``F_{p^r}[t]/(t**m)``.

Ring elements are stored as raw *values* whose shape depends on the family
(an ``int``, a tuple of ``r`` ints, or a tuple of ``m`` blocks of ``r`` ints).
Raw values are canonical, hashable and ordered so that Python's own ordering
is the canonical enumeration order (constant term most significant).  The
``RingContext`` methods operate on raw values so that matrix kernels can avoid
per-element object churn; ``RingElement`` is the user-facing wrapper.
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property
from typing import Iterator, Optional, Sequence, Tuple

ZMOD = "ZMOD"
GALOIS = "GALOIS"
TRUNC = "TRUNC"

# GALOIS/TRUNC rings up to this size get precomputed arithmetic tables
TABLE_LIMIT = 256


class RingSpecError(ValueError):
    """Malformed ring spec or invalid ring parameters."""


class RingMismatchError(ValueError):
    """Operands belong to different rings."""


class NotAUnitError(ArithmeticError):
    """An operation that needs a unit received an element of the maximal ideal."""


class NotASquareError(ArithmeticError):
    pass


# --- polynomials over F_p (lists of coefficients, low degree first) ----------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod_p(a, b, p):
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - c * bc) % p
        _trim(a)
    return q, a


def _poly_mulmod_p(a, b, f, p):
    prod = [0] * (len(a) + len(b))
    for i, ac in enumerate(a):
        if ac:
            for j, bc in enumerate(b):
                prod[i + j] += ac * bc
    return _poly_divmod_p(prod, f, p)[1]


def _poly_gcd_p(a, b, p):
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _poly_divmod_p(a, b, p)[1]
    return a


def _x_pow_mod_p(e, f, p):
    result = [1]
    base = _poly_divmod_p([0, 1], f, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod_p(result, base, f, p)
        base = _poly_mulmod_p(base, base, f, p)
        e >>= 1
    return result


def _prime_factors(k):
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def is_prime(k: int) -> bool:
    return k >= 2 and _prime_factors(k) == [k]


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """Rabin's test for the monic polynomial ``x**r + coeffs[r-1] x**(r-1) + ... + coeffs[0]``.

    ``coeffs`` lists the non-leading coefficients, low degree first.
    """
    r = len(coeffs)
    if r == 0:
        return False
    if r == 1:
        return True
    f = [c % p for c in coeffs] + [1]
    x = [0, 1]
    full = _x_pow_mod_p(p**r, f, p)
    if _trim([(a - b) % p for a, b in itertools.zip_longest(full, x, fillvalue=0)]):
        return False
    for q in _prime_factors(r):
        h = _x_pow_mod_p(p ** (r // q), f, p)
        h = [(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)]
        if len(_poly_gcd_p(f, h, p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, r: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``r`` over F_p.

    Coefficients are compared low degree first; the leading 1 is omitted.
    """
    for coeffs in itertools.product(range(p), repeat=r):
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # cannot happen


# --- ring contexts -----------------------------------------------------------


class RingContext:
    """An immutable finite local ring of odd characteristic.

    Subclasses implement the raw-value arithmetic.  Two contexts compare equal
    when they describe the same ring with the same presentation.
    """

    family: str
    p: int
    n_exp: Optional[int] = None
    r: int = 1
    m: Optional[int] = None
    defining_poly: Optional[Tuple[int, ...]] = None
    card_R: int
    card_M: int

    def _key(self):
        return (self.family, self.p, self.n_exp, self.r, self.m, self.defining_poly)

    def __eq__(self, other):
        return isinstance(other, RingContext) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False):
            raise AttributeError(f"{type(self).__name__} is immutable")
        object.__setattr__(self, name, value)

    def __repr__(self):
        return f"RingContext({self.spec!r})"

    # subclass API -- raw values
    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def from_int(self, k: int):
        raise NotImplementedError

    def residue(self, a):
        """Image of ``a`` in the residue field (a raw value of ``residue_field``)."""
        raise NotImplementedError

    def lift(self, b):
        """Naive coefficientwise lift of a residue-field value into the ring."""
        raise NotImplementedError

    def elements(self) -> Iterator:
        """All raw values in canonical order."""
        raise NotImplementedError

    def coerce(self, x):
        """Validate a JSON-style encoding (or a RingElement) and return its raw value."""
        raise NotImplementedError

    def encode(self, a):
        """Raw value -> JSON-friendly encoding (int, list, or list of lists)."""
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    residue_field: "RingContext"

    # derived structure

    @property
    def card_units(self) -> int:
        return self.card_R - self.card_M

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_unit(self, a) -> bool:
        return self.residue(a) != self.residue_field.zero

    def pow(self, a, e: int):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnitError(f"{self.encode(a)} is not a unit of {self.spec}")
        return self.pow(a, self.card_units - 1)

    def is_square_unit(self, a) -> bool:
        if not self.is_unit(a):
            raise NotAUnitError(f"{self.encode(a)} is not a unit of {self.spec}")
        return self.pow(a, self.card_units // 2) == self.one

    def units(self) -> Iterator:
        return (a for a in self.elements() if self.is_unit(a))

    def sqrt(self, a):
        """Canonical square root of a square unit: the smaller of ``{w, -w}``."""
        if not self.is_square_unit(a):
            raise NotASquareError(f"{self.encode(a)} is not a square unit of {self.spec}")
        field = self.residue_field
        w = self.lift(_tonelli_shanks(field, self.residue(a)))
        for _ in range(64):
            err = self.sub(self.mul(w, w), a)
            if err == self.zero:
                break
            w = self.sub(w, self.mul(err, self.inv(self.add(w, w))))
        else:
            raise AssertionError("Hensel lifting did not converge")
        return min(w, self.neg(w))

    @cached_property
    def z(self):
        """Canonical non-square unit (smallest raw value)."""
        for a in self.units():
            if not self.is_square_unit(a):
                return a
        raise AssertionError("unit group has no non-squares")  # index is always 2

    @cached_property
    def minus_one_is_square(self) -> bool:
        return self.is_square_unit(self.neg(self.one))

    def element(self, x) -> "RingElement":
        return RingElement(self, self.coerce(x))

    def _freeze(self):
        if self.family != ZMOD and self.card_R <= TABLE_LIMIT:
            self._build_tables()
        # warm the caches so every context is fully populated at construction
        self.z, self.minus_one_is_square
        self._frozen = True

    def _build_tables(self):
        """Replace add/neg/mul by lookups into precomputed Cayley tables."""
        vals = list(self.elements())
        index = {v: i for i, v in enumerate(vals)}
        add_t = [[index[self.add(a, b)] for b in vals] for a in vals]
        mul_t = [[index[self.mul(a, b)] for b in vals] for a in vals]
        neg_t = {v: self.neg(v) for v in vals}

        def add(a, b):
            return vals[add_t[index[a]][index[b]]]

        def mul(a, b):
            return vals[mul_t[index[a]][index[b]]]

        def sub(a, b):
            return vals[add_t[index[a]][index[neg_t[b]]]]

        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "neg", neg_t.__getitem__)

    def _poly_suffix(self):
        if self.defining_poly == smallest_irreducible(self.p, self.r):
            return ""
        return ":" + ",".join(map(str, self.defining_poly))


def _tonelli_shanks(field: RingContext, a):
    """Square root in a finite field of odd order (any root)."""
    q1 = field.card_units
    s, t = 0, q1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    one = field.one
    if s == 1:
        return field.pow(a, (t + 1) // 2)
    c = field.pow(field.z, t)
    x = field.pow(a, (t + 1) // 2)
    b = field.pow(a, t)
    while b != one:
        # smallest i with b^(2^i) = 1
        i, bb = 0, b
        while bb != one:
            bb = field.mul(bb, bb)
            i += 1
        for _ in range(s - i - 1):
            c = field.mul(c, c)
        x = field.mul(x, c)
        c = field.mul(c, c)
        b = field.mul(b, c)
        s = i
    return x


class ZModRing(RingContext):
    family = ZMOD

    def __init__(self, p: int, n_exp: int = 1):
        _check_prime(p)
        if n_exp < 1:
            raise RingSpecError("exponent must be >= 1")
        self.p = p
        self.n_exp = n_exp
        self.q = p**n_exp
        self.card_R = self.q
        self.card_M = p ** (n_exp - 1)
        self.zero, self.one = 0, 1
        self.residue_field = self if n_exp == 1 else ZModRing(p, 1)
        self._freeze()

    @property
    def spec(self):
        return f"zmod:{self.p}^{self.n_exp}"

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return -a % self.q

    def mul(self, a, b):
        return a * b % self.q

    def pow(self, a, e):
        return pow(a, e, self.q)

    def from_int(self, k):
        return k % self.q

    def is_unit(self, a):
        return a % self.p != 0

    def residue(self, a):
        return a % self.p

    def lift(self, b):
        return b

    def elements(self):
        return iter(range(self.q))

    def coerce(self, x):
        if isinstance(x, RingElement):
            _same(self, x.ring)
            return x.value
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.q:
            raise RingSpecError(f"invalid element encoding {x!r} for {self.spec}")
        return x

    def encode(self, a):
        return a


class GaloisRing(RingContext):
    """``GR(p**n, r)``; values are ``r``-tuples of coefficients of ``x**0 .. x**(r-1)``."""

    family = GALOIS

    def __init__(self, p: int, n_exp: int, r: int, poly: Optional[Sequence[int]] = None):
        _check_prime(p)
        if n_exp < 1 or r < 1:
            raise RingSpecError("exponent and degree must be >= 1")
        q = p**n_exp
        if poly is None:
            poly = smallest_irreducible(p, r)
        else:
            if len(poly) != r:
                raise RingSpecError(f"defining polynomial needs {r} coefficients, got {len(poly)}")
            poly = tuple(c % q for c in poly)
            if not is_irreducible_mod_p(poly, p):
                raise RingSpecError(f"polynomial {list(poly)} is reducible mod {p}")
        self.p, self.n_exp, self.r = p, n_exp, r
        self.q = q
        self.defining_poly = tuple(poly)
        self.card_R = q**r
        self.card_M = p ** ((n_exp - 1) * r)
        self.zero = (0,) * r
        self.one = (1,) + (0,) * (r - 1)
        # x^r = -(f_0 + ... + f_{r-1} x^{r-1})
        self._reducer = tuple(-c % q for c in self.defining_poly)
        self.residue_field = self if n_exp == 1 else GaloisRing(p, 1, r, poly)
        self._freeze()

    @property
    def spec(self):
        return f"gr:{self.p}^{self.n_exp}:{self.r}" + self._poly_suffix()

    def add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        q = self.q
        return tuple(-x % q for x in a)

    def mul(self, a, b):
        r, q = self.r, self.q
        if r == 1:
            return (a[0] * b[0] % q,)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = self._reducer
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k] % q
            if c:
                base = k - r
                for i, g in enumerate(red):
                    prod[base + i] += c * g
        return tuple(c % q for c in prod[:r])

    def from_int(self, k):
        return (k % self.q,) + (0,) * (self.r - 1)

    def residue(self, a):
        p = self.p
        return tuple(x % p for x in a)

    def lift(self, b):
        return tuple(b)

    def elements(self):
        return itertools.product(range(self.q), repeat=self.r)

    def coerce(self, x):
        if isinstance(x, RingElement):
            _same(self, x.ring)
            return x.value
        if (
            not isinstance(x, (list, tuple))
            or len(x) != self.r
            or not all(isinstance(c, int) and not isinstance(c, bool) and 0 <= c < self.q for c in x)
        ):
            raise RingSpecError(f"invalid element encoding {x!r} for {self.spec}")
        return tuple(x)

    def encode(self, a):
        return list(a)


class TruncRing(RingContext):
    """``F_{p^r}[t]/(t**m)``; values are ``m`` blocks, block ``j`` the field coefficient of ``t**j``."""

    family = TRUNC

    def __init__(self, p: int, r: int, m: int, poly: Optional[Sequence[int]] = None):
        _check_prime(p)
        if r < 1 or m < 1:
            raise RingSpecError("degree and truncation order must be >= 1")
        self.field = GaloisRing(p, 1, r, poly)
        self.p, self.r, self.m = p, r, m
        self.defining_poly = self.field.defining_poly
        self.card_R = p ** (r * m)
        self.card_M = p ** (r * (m - 1))
        fz = self.field.zero
        self.zero = (fz,) * m
        self.one = (self.field.one,) + (fz,) * (m - 1)
        self.residue_field = self.field
        self._freeze()

    @property
    def spec(self):
        return f"trunc:{self.p}:{self.r}:{self.m}" + self._poly_suffix()

    def add(self, a, b):
        fadd = self.field.add
        return tuple(fadd(x, y) for x, y in zip(a, b))

    def neg(self, a):
        fneg = self.field.neg
        return tuple(fneg(x) for x in a)

    def mul(self, a, b):
        F = self.field
        m = self.m
        out = [F.zero] * m
        for i, x in enumerate(a):
            if x == F.zero:
                continue
            for j in range(m - i):
                y = b[j]
                if y != F.zero:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return tuple(out)

    def from_int(self, k):
        return (self.field.from_int(k),) + (self.field.zero,) * (self.m - 1)

    def residue(self, a):
        return a[0]

    def lift(self, b):
        return (tuple(b),) + (self.field.zero,) * (self.m - 1)

    def elements(self):
        r, m = self.r, self.m
        for flat in itertools.product(range(self.p), repeat=r * m):
            yield tuple(flat[j * r : (j + 1) * r] for j in range(m))

    def coerce(self, x):
        if isinstance(x, RingElement):
            _same(self, x.ring)
            return x.value
        if not isinstance(x, (list, tuple)) or len(x) != self.m:
            raise RingSpecError(f"invalid element encoding {x!r} for {self.spec}")
        return tuple(self.field.coerce(block) for block in x)

    def encode(self, a):
        return [list(block) for block in a]


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise RingSpecError(f"{p!r} is not a prime")
    if p == 2:
        raise RingSpecError("characteristic must be odd (p = 2 given)")


def _same(r1: RingContext, r2: RingContext):
    if r1 is not r2 and r1 != r2:
        raise RingMismatchError(f"{r1.spec} vs {r2.spec}")


# --- ring specs --------------------------------------------------------------

_INT = r"(\d+)"
_POLY = r"(?::(\d+(?:,\d+)*))?"
_ZMOD_RE = re.compile(rf"zmod:{_INT}(?:\^{_INT})?")
_GR_RE = re.compile(rf"gr:{_INT}\^{_INT}:{_INT}{_POLY}")
_TRUNC_RE = re.compile(rf"trunc:{_INT}:{_INT}:{_INT}{_POLY}")


def make_ring(spec: str) -> RingContext:
    """Parse a ring spec such as ``zmod:3^2``, ``gr:3^2:2`` or ``trunc:3:1:2:1``."""
    s = spec.strip()
    if mo := _ZMOD_RE.fullmatch(s):
        p, n = mo.groups()
        return ZModRing(int(p), int(n) if n else 1)
    if mo := _GR_RE.fullmatch(s):
        p, n, r, poly = mo.groups()
        return GaloisRing(int(p), int(n), int(r), _parse_poly(poly))
    if mo := _TRUNC_RE.fullmatch(s):
        p, r, m, poly = mo.groups()
        return TruncRing(int(p), int(r), int(m), _parse_poly(poly))
    raise RingSpecError(f"malformed ring spec {spec!r}")


def _parse_poly(text):
    if text is None:
        return None
    return tuple(int(c) for c in text.split(","))


# --- elements ----------------------------------------------------------------


class RingElement:
    """An element of a specific ring, wrapping its canonical raw value."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: RingContext, value):
        self.ring = ring
        self.value = value

    @property
    def encoding(self):
        return self.ring.encode(self.value)

    def _other(self, other):
        if isinstance(other, RingElement):
            _same(self.ring, other.ring)
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def _wrap(self, v):
        return RingElement(self.ring, v)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.ring.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.ring.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.ring.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.ring.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.ring.neg(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return self._wrap(self.ring.pow(self.ring.inv(self.value), -e))
        return self._wrap(self.ring.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ring.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __lt__(self, other):
        _same(self.ring, other.ring)
        return self.value < other.value

    def __repr__(self):
        return f"{self.ring.spec}({self.encoding})"


# Functional API. These mirror the RingContext methods and check ring agreement.


def add(a: RingElement, b: RingElement) -> RingElement:
    _same(a.ring, b.ring)
    return RingElement(a.ring, a.ring.add(a.value, b.value))


def sub(a: RingElement, b: RingElement) -> RingElement:
    _same(a.ring, b.ring)
    return RingElement(a.ring, a.ring.sub(a.value, b.value))


def neg(a: RingElement) -> RingElement:
    return RingElement(a.ring, a.ring.neg(a.value))


def mul(a: RingElement, b: RingElement) -> RingElement:
    _same(a.ring, b.ring)
    return RingElement(a.ring, a.ring.mul(a.value, b.value))


def is_unit(a: RingElement) -> bool:
    return a.ring.is_unit(a.value)


def inv(u: RingElement) -> RingElement:
    return RingElement(u.ring, u.ring.inv(u.value))


def is_square_unit(u: RingElement) -> bool:
    return u.ring.is_square_unit(u.value)


def sqrt_unit(u: RingElement) -> RingElement:
    return RingElement(u.ring, u.ring.sqrt(u.value))


def canonical_nonsquare(ring: RingContext) -> RingElement:
    return RingElement(ring, ring.z)


def scale_to(u: RingElement, a: RingElement) -> RingElement:
    """Return a unit ``c`` with ``c**2 * (u + a) == u``, for ``u`` a unit and ``a`` in M.

    With ``t = (u + a)/u`` in the group ``1 + M`` of odd order ``|M|`` we have
    ``t**|M| = 1``, so ``c = t**(-(|M| + 1)/2)`` works.
    """
    R = u.ring
    _same(R, a.ring)
    if not R.is_unit(u.value):
        raise NotAUnitError(f"{u!r} is not a unit")
    if R.is_unit(a.value):
        raise ValueError(f"{a!r} is not in the maximal ideal")
    t = R.mul(R.inv(u.value), R.add(u.value, a.value))
    return RingElement(R, R.pow(R.inv(t), (R.card_M + 1) // 2))


def decompose_nonsquare(z: RingElement) -> Tuple[RingElement, RingElement]:
    """Write a non-square unit as ``(1 + x**2) * y**2`` with ``x, y`` units.

    Only possible (and only needed) when -1 is not a square.  ``x`` is the first
    unit in canonical order for which ``1 + x**2`` is a non-square unit.
    """
    R = z.ring
    if R.minus_one_is_square:
        raise ValueError(f"-1 is a square in {R.spec}")
    if R.is_square_unit(z.value):
        raise NotASquareError(f"{z!r} is a square")
    for x in R.units():
        s = R.add(R.one, R.mul(x, x))
        if R.is_unit(s) and not R.is_square_unit(s):
            y = R.sqrt(R.mul(z.value, R.inv(s)))
            return RingElement(R, x), RingElement(R, y)
    raise AssertionError("no decomposition found")  # excluded by the unit-group structure
