"""Exact arithmetic in F_p, F_{p^d} and the polynomial rings over them.

Elements of a prime field are stored as ints in [0, p); elements of an
extension field as tuples of ints (coefficients of the residue polynomial,
ascending).  Field objects own the arithmetic on these raw values; the
FieldElement wrapper supplies operators on top of that.
"""

from __future__ import annotations

import random
from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin, valid far beyond any input used here
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """F_p for an odd prime p not in {2, 3}."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p in (2, 3):
            raise ValueError("characteristic 2 and 3 are not supported")
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    # raw-value arithmetic -------------------------------------------------
    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field is self or v.field == self:
                return v.raw
            raise ValueError("element of a different field")
        return v % self.p

    zero_raw = 0
    one_raw = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def is_zero(self, a):
        return a == 0

    def legendre_raw(self, a) -> int:
        if a % self.p == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def elements(self):
        for a in range(self.p):
            yield FieldElement(self, a)

    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.coerce(v))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)


# -- raw polynomial helpers over a field (tuples/lists of raw values) -------

def _strip(F, cs):
    cs = list(cs)
    while cs and F.is_zero(cs[-1]):
        cs.pop()
    return cs


def _poly_add(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero_raw
        y = b[i] if i < len(b) else F.zero_raw
        out.append(F.add(x, y))
    return _strip(F, out)


def _poly_sub(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero_raw
        y = b[i] if i < len(b) else F.zero_raw
        out.append(F.sub(x, y))
    return _strip(F, out)


def _poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero_raw] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _strip(F, out)


def _poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [F.zero_raw] * max(0, len(a) - len(b) + 1)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lead)
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = F.sub(a[k + i], F.mul(c, y))
        a = _strip(F, a)
        if not a:
            break
    return _strip(F, q), a


def _poly_mod(F, a, b):
    return _poly_divmod(F, a, b)[1]


def _poly_gcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(F, a, b)
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(c, inv) for c in a]
    return a


def _poly_powmod(F, a, e, m):
    r = [F.one_raw]
    a = _poly_mod(F, a, m)
    while e > 0:
        if e & 1:
            r = _poly_mod(F, _poly_mul(F, r, a), m)
        a = _poly_mod(F, _poly_mul(F, a, a), m)
        e >>= 1
    return r


class ExtField:
    """F_{p^d} = base[z]/(modulus), modulus monic irreducible of degree d."""

    def __init__(self, base: PrimeField, modulus):
        # modulus: ascending raw coefficient list over base, monic
        self.base = base
        self.modulus = tuple(modulus)
        d = len(modulus) - 1
        if d < 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.char = base.p
        self.degree = d
        self.order = base.p ** d

    def __repr__(self):
        return f"GF({self.base.p}^{self.degree})"

    def __eq__(self, other):
        return (isinstance(other, ExtField) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("ExtField", self.base.p, self.modulus))

    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field == self:
                return v.raw
            if v.field == self.base:
                return self._make([v.raw])
            raise ValueError("element of a different field")
        if isinstance(v, int):
            return self._make([v % self.base.p])
        return self._make(list(v))

    def _make(self, cs):
        cs = [c % self.base.p for c in cs]
        cs = _strip(self.base, _poly_mod(self.base, cs, list(self.modulus)))
        return tuple(cs) + (0,) * (self.degree - len(cs))

    @property
    def zero_raw(self):
        return (0,) * self.degree

    @property
    def one_raw(self):
        return (1,) + (0,) * (self.degree - 1)

    @property
    def gen_raw(self):
        return self._make([0, 1])

    def add(self, a, b):
        p = self.base.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.base.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.base.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        F = self.base
        prod = _poly_mod(F, _poly_mul(F, list(a), list(b)), list(self.modulus))
        return tuple(prod) + (0,) * (self.degree - len(prod))

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in base[z]
        F = self.base
        r0, r1 = list(self.modulus), _strip(F, list(a))
        s0, s1 = [], [F.one_raw]
        while r1:
            q, r = _poly_divmod(F, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(F, s0, _poly_mul(F, q, s1))
        inv_lead = F.inv(r0[-1])
        s0 = [F.mul(c, inv_lead) for c in s0]
        return self._make(s0)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one_raw
        while e > 0:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def legendre_raw(self, a) -> int:
        if self.is_zero(a):
            return 0
        v = self.pow(a, (self.order - 1) // 2)
        return 1 if v == self.one_raw else -1

    def encode(self, a) -> int:
        """Index of an element in [0, order), base-p digits."""
        p = self.base.p
        n = 0
        for c in reversed(a):
            n = n * p + c
        return n

    def decode(self, n: int):
        p = self.base.p
        cs = []
        for _ in range(self.degree):
            cs.append(n % p)
            n //= p
        return tuple(cs)

    def elements(self):
        for n in range(self.order):
            yield FieldElement(self, self.decode(n))

    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.coerce(v))

    @property
    def zero(self):
        return FieldElement(self, self.zero_raw)

    @property
    def one(self):
        return FieldElement(self, self.one_raw)

    @property
    def gen(self):
        return FieldElement(self, self.gen_raw)


class FieldElement:
    """An element of a PrimeField or ExtField."""

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other.raw
            if (isinstance(self.field, ExtField)
                    and other.field == self.field.base):
                return self.field.coerce(other)
            raise ValueError("elements of different fields")
        if isinstance(other, int):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.raw, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.raw, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(r, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.raw, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.raw, self.field.inv(r)))

    def __rtruediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(r, self.field.inv(self.raw)))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.raw, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other.raw == self.raw
        if isinstance(other, int):
            return self.raw == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def __repr__(self):
        return f"{self.raw}"

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.raw))


def legendre(a) -> int:
    """Quadratic character: +1 for nonzero squares, -1 for nonsquares, 0 at 0."""
    return a.field.legendre_raw(a.raw)


class Poly:
    """Polynomial over a PrimeField or ExtField, dense ascending coefficients.

    deg(0) is -infinity (float('-inf')).
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        cs = []
        for c in coeffs:
            cs.append(field.coerce(c))
        self.coeffs = tuple(_strip(field, cs))

    @classmethod
    def _raw(cls, field, raw_coeffs):
        p = object.__new__(cls)
        p.field = field
        p.coeffs = tuple(_strip(field, list(raw_coeffs)))
        return p

    @classmethod
    def t(cls, field):
        return cls._raw(field, [field.zero_raw, field.one_raw])

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElement)):
            return self == Poly(self.field, [other])
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field == self.field:
                return other
            raise ValueError("polynomials over different fields")
        if isinstance(other, (int, FieldElement)):
            return Poly(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return Poly._raw(self.field, _poly_add(self.field, self.coeffs, o.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Poly._raw(self.field, _poly_sub(self.field, self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        return Poly._raw(self.field, _poly_sub(self.field, o.coeffs, self.coeffs))

    def __neg__(self):
        return Poly._raw(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        return Poly._raw(self.field, _poly_mul(self.field, self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e):
        r = Poly(self.field, [1])
        b = self
        while e > 0:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        o = self._coerce(other)
        q, r = _poly_divmod(self.field, self.coeffs, o.coeffs)
        return Poly._raw(self.field, q), Poly._raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def lead(self) -> FieldElement:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return FieldElement(self.field, self.coeffs[-1])

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        inv = self.field.inv(self.coeffs[-1])
        return Poly._raw(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def derivative(self) -> "Poly":
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            m = i % F.char
            out.append(F.mul(F.coerce(m), self.coeffs[i]))
        return Poly._raw(F, out)

    def __call__(self, x):
        """Evaluate; x may live in the base field or any ExtField over it."""
        if isinstance(x, FieldElement):
            G = x.field
        else:
            G = self.field
            x = FieldElement(G, G.coerce(x))
        acc = G.zero
        for c in reversed(self.coeffs):
            ce = FieldElement(self.field, c)
            if G != self.field:
                ce = FieldElement(G, G.coerce(ce))
            acc = acc * x + ce
        return acc

    def gcd(self, other) -> "Poly":
        o = self._coerce(other)
        return Poly._raw(self.field, _poly_gcd(self.field, self.coeffs, o.coeffs))

    def valuation(self, pi: "Poly") -> int:
        """Multiplicity of the irreducible pi in self (self nonzero)."""
        if not self.coeffs:
            raise ValueError("valuation of the zero polynomial")
        v = 0
        f = self
        while True:
            q, r = divmod(f, pi)
            if r:
                return v
            f = q
            v += 1

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*t^{i}" for i, c in enumerate(self.coeffs)
                          if not self.field.is_zero(c))


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: f irreducible over its field of definition."""
    F = f.field
    d = f.degree
    if d == float("-inf") or d == 0:
        return False
    if d == 1:
        return True
    q = F.order
    m = list(f.monic().coeffs)
    t = [F.zero_raw, F.one_raw]
    # x^(q^d) == x mod f
    h = t
    for _ in range(d):
        h = _poly_powmod(F, h, q, m)
    if _strip(F, _poly_sub(F, h, t)) != []:
        return False
    for r in {r for r in _prime_factors(d)}:
        e = d // r
        h = t
        for _ in range(e):
            h = _poly_powmod(F, h, q, m)
        if _poly_gcd(F, _poly_sub(F, h, t), m) != [F.one_raw]:
            return False
    return True


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _frobenius_root(f: Poly) -> Poly:
    """For f of the form h(t^p), return the p-th root (coefficientwise c^(1/p))."""
    F = f.field
    p = F.char
    e = F.order // p
    cs = []
    for i in range(0, len(f.coeffs), p):
        cs.append(F.pow(f.coeffs[i], e))
    return Poly._raw(F, cs)


def _squarefree_decomposition(f: Poly):
    """Yield (g, m) with f (monic) = prod g^m over the yielded pairs,
    each g squarefree; standard char-p algorithm."""
    F = f.field
    p = F.char

    def rec(g: Poly, outer: int):
        if g.degree == 0:
            return
        dg = g.derivative()
        if not dg:
            rec(_frobenius_root(g), outer * p)
            return
        c = g.gcd(dg)
        w = g // c  # product of factors with multiplicity prime to p
        i = 1
        while w.degree > 0:
            y = w.gcd(c)
            fac = w // y  # factors of multiplicity exactly i
            if fac.degree > 0:
                yield_list.append((fac.monic(), outer * i))
            c = c // y
            w = y
            i += 1
        if c.degree > 0:  # multiplicities divisible by p; c is a p-th power
            rec(_frobenius_root(c), outer * p)

    yield_list: list = []
    rec(f.monic(), 1)
    yield from yield_list


def _distinct_degree(f: Poly):
    """f monic squarefree -> yield (product of its irreducibles of degree d, d)."""
    F = f.field
    q = F.order
    t = [F.zero_raw, F.one_raw]
    h = t
    d = 0
    rest = f
    while rest.degree >= 1:
        d += 1
        if 2 * d > rest.degree:
            yield rest, rest.degree
            return
        h = _poly_powmod(F, h, q, list(rest.coeffs))  # h = t^(q^d) mod rest
        g = Poly._raw(F, _poly_gcd(F, _poly_sub(F, h, t), list(rest.coeffs)))
        if g.degree >= 1:
            yield g.monic(), d
            rest = rest // g
            h = _poly_mod(F, h, list(rest.coeffs))


def _equal_degree_split(f: Poly, d: int, rng: random.Random):
    """Cantor-Zassenhaus: f monic squarefree, all factors of degree d."""
    F = f.field
    n = f.degree
    if n == d:
        return [f]
    q = F.order
    while True:
        cs = [rng.randrange(F.order) for _ in range(n)]
        if isinstance(F, ExtField):
            a = Poly._raw(F, [F.decode(c) for c in cs])
        else:
            a = Poly._raw(F, cs)
        if a.degree < 1:
            continue
        g = f.gcd(a)
        if 0 < g.degree < n:
            pieces = [g, f // g]
            break
        b = Poly._raw(F, _poly_powmod(F, list(a.coeffs), (q ** d - 1) // 2,
                                      list(f.coeffs)))
        g = f.gcd(b - 1)
        if 0 < g.degree < n:
            pieces = [g, f // g]
            break
    out = []
    for piece in pieces:
        out.extend(_equal_degree_split(piece.monic(), d, rng))
    return out


def factor(f: Poly, seed: int = 0):
    """Factor a nonzero polynomial.

    Returns (leading coefficient, list of (monic irreducible, multiplicity))
    sorted for determinism.  Randomness in the equal-degree step is seeded.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    F = f.field
    lead = f.lead()
    out = []
    rng = random.Random(hash((seed, F.order, f.coeffs)))
    for g, mult in _squarefree_decomposition(f):
        for h, d in _distinct_degree(g.monic()):
            for irr in _equal_degree_split(h.monic(), d, rng):
                out.append((irr, mult))
    out.sort(key=lambda fm: (fm[0].degree, [_key(F, c) for c in fm[0].coeffs]))
    return lead, out


def _key(F, raw):
    return F.encode(raw) if isinstance(F, ExtField) else raw


def roots(f: Poly):
    """Roots of f in its field of definition (without multiplicity)."""
    F = f.field
    if not f:
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return []
    # gcd with x^q - x isolates the split part
    q = F.order
    xq = Poly._raw(F, _poly_powmod(F, [F.zero_raw, F.one_raw], q, list(f.monic().coeffs)))
    g = f.monic().gcd(xq - Poly.t(F))
    out = []
    _, facs = factor(g)
    for irr, _ in facs:
        if irr.degree == 1:
            out.append(-FieldElement(F, irr.coeffs[0]))
    return out


def build_extension(p: int, d: int) -> PrimeField | ExtField:
    """Deterministic field with p^d elements (first irreducible in lex order)."""
    F = PrimeField(p)
    if d == 1:
        return F
    for n in range(p ** d):
        cs = []
        m = n
        for _ in range(d):
            cs.append(m % p)
            m //= p
        cand = Poly._raw(F, cs + [1])
        if is_irreducible(cand):
            return ExtField(F, list(cand.coeffs))
    raise RuntimeError("unreachable: irreducible polynomial exists for every degree")


class SquareClass:
    """An element of F^x / (F^x)^2 for a field of odd order: two classes."""

    __slots__ = ("nontrivial",)

    def __init__(self, nontrivial: bool):
        self.nontrivial = bool(nontrivial)

    def __mul__(self, other):
        return SquareClass(self.nontrivial ^ other.nontrivial)

    def __eq__(self, other):
        return isinstance(other, SquareClass) and other.nontrivial == self.nontrivial

    def __hash__(self):
        return hash(("SquareClass", self.nontrivial))

    def __repr__(self):
        return "nontrivial" if self.nontrivial else "trivial"

    @property
    def trivial(self):
        return not self.nontrivial


def square_class(a: FieldElement) -> SquareClass:
    s = legendre(a)
    if s == 0:
        raise ValueError("square class of zero is undefined")
    return SquareClass(s == -1)


def square_class_of_rational(r, ell: int) -> SquareClass:
    """Square class of a nonzero rational reduced mod the odd prime ell."""
    r = Fraction(r)
    if r == 0:
        raise ValueError("square class of zero is undefined")
    num, den = r.numerator, r.denominator
    if num % ell == 0 or den % ell == 0:
        raise ValueError(f"{r} is not an ell-adic unit for ell={ell}")
    F = PrimeField(ell)
    return square_class(F(num) / F(den))
