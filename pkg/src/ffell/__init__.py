"""Exact arithmetic for elliptic curves over F_q(t): local reduction data,
L-functions, orthogonal-group arithmetic mod ell, and quadratic-twist family
verification."""

__version__ = "0.1.0"
