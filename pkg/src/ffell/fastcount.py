"""Batch trace-of-Frobenius computation over all places of a fixed degree.

For a curve y^2 = x^3 + a2(t) x^2 + a4(t) x + a6(t) over F_p(t), the places of
degree d away from the discriminant are the Frobenius orbits of the elements
beta in F_{p^d} of exact degree d with Delta(beta) != 0, and the fiber trace is
the character sum a_x = -sum_u chi(u^3 + a2(beta) u^2 + a4(beta) u + a6(beta)).

This module vectorises that sum with discrete log/exp tables over integer
element codes (base-p digit packing), so a whole degree is processed with
numpy array operations.  Output order is deterministic: representatives are
the minimal codes of their orbits, listed in increasing order.
"""

from __future__ import annotations

import numpy as np

from .algebra import ExtField, PrimeField, build_extension, _prime_factors


class FieldTables:
    """Discrete log/exp, digit and character tables for F_{p^d}.

    Elements are integer codes 0..q-1: the base-p packing of the coefficient
    vector (for a prime field, the code is the residue itself).
    """

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        field = build_extension(p, d)
        self.field = field
        q = field.order
        self.q = q

        if isinstance(field, PrimeField):
            code_of = lambda raw: raw
            raw_of = lambda code: code
        else:
            code_of = field.encode
            raw_of = field.decode
        self._code_of = code_of
        self._raw_of = raw_of

        g = self._find_generator()
        self.generator_code = code_of(g)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        e = field.one_raw
        for i in range(q - 1):
            c = code_of(e)
            exp[i] = c
            log[c] = i
            e = field.mul(e, g)
        assert code_of(e) == code_of(field.one_raw), "generator order mismatch"
        self.exp = exp
        self.log = log  # log[0] is unused (stays 0); guard with code != 0

        # digit decomposition for vectorised addition
        codes = np.arange(q, dtype=np.int64)
        digs = []
        c = codes.copy()
        for _ in range(d):
            digs.append(c % p)
            c //= p
        self.digits = np.stack(digs, axis=1)
        self.powers = p ** np.arange(d, dtype=np.int64)

        # quadratic character by log parity (q is odd)
        chi = np.zeros(q, dtype=np.int64)
        chi[exp] = 1 - 2 * (np.arange(q - 1, dtype=np.int64) & 1)
        self.chi = chi

        # Frobenius x -> x^p on codes
        frob = np.zeros(q, dtype=np.int64)
        frob[exp] = exp[(np.arange(q - 1, dtype=np.int64) * p) % (q - 1)]
        self.frobenius = frob

    def _find_generator(self):
        F = self.field
        n = self.q - 1
        primes = sorted(_prime_factors(n))
        for code in range(2, self.q):
            g = self._raw_of(code)
            if all(F.pow(g, n // r) != F.one_raw for r in primes):
                return g
        raise AssertionError("no multiplicative generator found")

    def add_codes(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Field addition on code arrays (digit-wise mod p)."""
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.powers

    def scale_codes(self, a: np.ndarray, c: int) -> np.ndarray:
        """Multiply every code in a by the constant code c."""
        if c == 0:
            return np.zeros_like(a)
        lc = int(self.log[c])
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] + lc) % (self.q - 1)]
        return out

    def power_codes(self, k: int) -> np.ndarray:
        """Array x -> x^k over all codes."""
        out = np.zeros(self.q, dtype=np.int64)
        nz = np.arange(self.q) != 0
        codes = np.arange(self.q, dtype=np.int64)
        out[nz] = self.exp[(self.log[codes[nz]] * k) % (self.q - 1)]
        if k == 0:
            out[0] = 1
        return out

    def eval_poly(self, poly, code: int) -> int:
        """Evaluate a Poly over F_p at the element with the given code."""
        F = self.field
        x = self._raw_of(code)
        acc = F.zero_raw
        for cf in reversed(poly.coeffs):
            acc = F.add(F.mul(acc, x), F.coerce(cf))
        return self._code_of(acc)

    def degree_d_representatives(self) -> np.ndarray:
        """Minimal codes of the Frobenius orbits of exact size d, ascending."""
        frob = self.frobenius
        seen = np.zeros(self.q, dtype=bool)
        reps = []
        for c in range(self.q):
            if seen[c]:
                continue
            orbit = [c]
            x = int(frob[c])
            while x != c:
                orbit.append(x)
                x = int(frob[x])
            for y in orbit:
                seen[y] = True
            if len(orbit) == self.d:
                reps.append(c)
        return np.array(reps, dtype=np.int64)


_TABLE_CACHE: dict[tuple[int, int], FieldTables] = {}


def field_tables(p: int, d: int) -> FieldTables:
    key = (p, d)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = FieldTables(p, d)
    return _TABLE_CACHE[key]


def batch_traces(curve, d: int):
    """Traces a_x over all good finite places of degree d of the model.

    Returns (reps, traces): representative codes (ascending) of the places of
    degree d with Delta(beta) != 0, and the matching int64 trace array.
    Places dividing the model discriminant are skipped; handle them (and the
    place at infinity) through local reduction.
    """
    p = curve.field.p
    T = field_tables(p, d)
    reps = T.degree_d_representatives()
    good = np.array([bool(T.eval_poly(curve.delta, int(c))) for c in reps])
    reps = reps[good]

    u = np.arange(T.q, dtype=np.int64)
    u2 = T.power_codes(2)
    u3 = T.power_codes(3)

    traces = np.zeros(len(reps), dtype=np.int64)
    for i, c in enumerate(reps):
        c = int(c)
        A2 = T.eval_poly(curve.a2, c)
        A4 = T.eval_poly(curve.a4, c)
        A6 = T.eval_poly(curve.a6, c)
        vals = T.add_codes(
            T.add_codes(u3, T.scale_codes(u2, A2)),
            T.add_codes(T.scale_codes(u, A4),
                        np.full(T.q, A6, dtype=np.int64)))
        traces[i] = -int(T.chi[vals].sum())
    return reps, traces
