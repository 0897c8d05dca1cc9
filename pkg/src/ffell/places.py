"""Closed points of P^1 over F_q and valuations of rational functions.

A finite place is a monic irreducible polynomial pi over F_q; the place at
infinity has uniformizer 1/t and residue field F_q.  Residue fields are
realized as F_q[t]/(pi), i.e. an ExtField with modulus pi (or F_q itself in
degree 1).
"""

from __future__ import annotations

from .algebra import (ExtField, FieldElement, Poly, PrimeField,
                      is_irreducible, _poly_divmod)

INF = float("inf")


class Place:
    """A closed point of P^1 over F_q: a monic irreducible, or infinity."""

    __slots__ = ("field", "pi", "degree")

    def __init__(self, field: PrimeField, pi: Poly | None):
        self.field = field
        if pi is None:
            self.pi = None
            self.degree = 1
        else:
            if pi.lead() != field.one:
                raise ValueError("finite place polynomial must be monic")
            if not is_irreducible(pi):
                raise ValueError("finite place polynomial must be irreducible")
            self.pi = pi
            self.degree = int(pi.degree)

    @classmethod
    def infinity(cls, field) -> "Place":
        return cls(field, None)

    @classmethod
    def finite(cls, field, pi: Poly) -> "Place":
        return cls(field, pi)

    @classmethod
    def rational(cls, field, a) -> "Place":
        """The degree-1 place t = a."""
        return cls(field, Poly(field, [-field(a), 1]))

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    def __eq__(self, other):
        return (isinstance(other, Place) and other.field == self.field
                and other.pi == self.pi)

    def __hash__(self):
        return hash((self.field, self.pi))

    def __repr__(self):
        if self.is_infinite:
            return "Place(oo)"
        return f"Place({self.pi})"


class RationalFunction:
    """Element of F_q(t), stored as coprime num/den with monic den."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        field = num.field
        if den is None:
            den = Poly(field, [1])
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.degree >= 1:
            num, den = num // g, den // g
        lead_inv = den.lead().inverse()
        self.num = num * lead_inv
        self.den = den * lead_inv

    @property
    def field(self):
        return self.num.field

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction(Poly(self.field, [other]))
        raise TypeError(f"cannot coerce {other!r}")

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den,
                                self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return RationalFunction(self.den, self.num) ** (-e)
        return RationalFunction(self.num ** e, self.den ** e)

    def __repr__(self):
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num})/({self.den})"


def valuation(f, x: Place):
    """v_x(f) for f a RationalFunction or Poly; v(0) = +infinity."""
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if not f:
        return INF
    if x.is_infinite:
        return int(f.den.degree) - int(f.num.degree)
    return f.num.valuation(x.pi) - f.den.valuation(x.pi)


def residue_field(x: Place):
    """F_x = F_q[t]/(pi), of order q^(deg x)."""
    if x.is_infinite or x.degree == 1:
        return x.field
    return ExtField(x.field, list(x.pi.coeffs))


def residue_of_t(x: Place) -> FieldElement:
    """Image of t in the residue field of a finite place."""
    if x.is_infinite:
        raise ValueError("t has a pole at infinity")
    if x.degree == 1:
        return -FieldElement(x.field, x.pi.coeffs[0])
    K = residue_field(x)
    return K.gen


def reduce_at(f, x: Place) -> FieldElement:
    """Image of f in the residue field at x; requires v_x(f) >= 0."""
    if isinstance(f, Poly):
        f = RationalFunction(f)
    v = valuation(f, x)
    if v == INF:
        return residue_field(x).zero
    if v < 0:
        raise ValueError(f"{f!r} has a pole at {x!r}")
    if x.is_infinite:
        if v > 0:
            return x.field.zero
        return f.num.lead() / f.den.lead()
    num, den = f.num, f.den
    k = den.valuation(x.pi)
    if k:
        pik = x.pi ** k
        num, den = num // pik, den // pik
    a = residue_of_t(x)
    return num(a) / den(a)


def count_places(q: int, d: int) -> int:
    """Number of finite places of degree d (necklace formula)."""
    total = 0
    for e in _divisors(d):
        total += _mobius(e) * q ** (d // e)
    return total // d


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _mobius(n):
    if n == 1:
        return 1
    m, cnt, d = n, 0, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            cnt += 1
        d += 1
    if m > 1:
        cnt += 1
    return -1 if cnt % 2 else 1


def enumerate_places(field: PrimeField, d_max: int):
    """Yield infinity, then every finite place of degree <= d_max.

    Deterministic order: infinity first, then degree ascending, and within a
    degree the lexicographic order of ascending coefficient vectors.
    """
    yield Place.infinity(field)
    q = field.p
    F = field
    for d in range(1, d_max + 1):
        if d == 1:
            for a in range(q):
                yield Place(F, Poly(F, [a, 1]))
            continue
        for n in range(q ** d):
            cs = []
            m = n
            for _ in range(d):
                cs.append(m % q)
                m //= q
            f = Poly._raw(F, cs + [1])
            if is_irreducible(f):
                yield Place(F, f)
