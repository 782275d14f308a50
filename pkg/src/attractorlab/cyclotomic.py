"""Exact arithmetic in cyclotomic fields Q(zeta_N) over Fraction coefficients.

Elements are polynomials in zeta_N reduced mod the N-th cyclotomic
polynomial Phi_N, so representations are canonical and equality is exact.
Used for the finite Fourier transforms of Dirichlet-series data, where
floating point would blur exact rational tables.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath as mp


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _poly_trim(out)


def _poly_divmod(num, den):
    """Exact division of Fraction polynomials, ascending coefficients."""
    num = list(num)
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    inv_lead = 1 / Fraction(den[-1])
    for i in range(len(num) - len(den), -1, -1):
        coef = num[i + len(den) - 1] * inv_lead
        if coef:
            q[i] = coef
            for j, d in enumerate(den):
                num[i + j] -= coef * d
    return _poly_trim(q), _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple:
    """Coefficients of Phi_n, ascending, as Fractions (integers in fact)."""
    if n == 1:
        return (Fraction(-1), Fraction(1))
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    num = [Fraction(0)] * (n + 1)
    num[0], num[n] = Fraction(-1), Fraction(1)
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(num, list(cyclotomic_coeffs(d)))
            if r:
                raise ArithmeticError("cyclotomic division left a remainder")
            num = q
    return tuple(num)


class Cyclotomic:
    """An element of Q(zeta_order), canonically reduced mod Phi_order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        self.order = order
        c = [Fraction(x) for x in coeffs]
        phi = list(cyclotomic_coeffs(order))
        if len(c) >= len(phi):
            _, c = _poly_divmod(c, phi)
        self.coeffs = tuple(_poly_trim(c))

    # --- constructors -------------------------------------------------

    @staticmethod
    def rational(q) -> "Cyclotomic":
        return Cyclotomic(1, [Fraction(q)])

    @staticmethod
    def zero() -> "Cyclotomic":
        return Cyclotomic(1, [])

    # --- ring structure -----------------------------------------------

    def _lift(self, order: int) -> "Cyclotomic":
        """Rewrite in Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        step = order // self.order
        out = [Fraction(0)] * (len(self.coeffs) * step + 1)
        for e, q in enumerate(self.coeffs):
            out[e * step] += q
        return Cyclotomic(order, out)

    def _pair(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        n = self.order * other.order // gcd(self.order, other.order)
        return self._lift(n), other._lift(n), n

    def __add__(self, other):
        a, b, n = self._pair(other)
        out = list(a.coeffs) + [Fraction(0)] * max(0, len(b.coeffs) - len(a.coeffs))
        for i, q in enumerate(b.coeffs):
            out[i] += q
        return Cyclotomic(n, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-q for q in self.coeffs])

    def __sub__(self, other):
        a, b, n = self._pair(other)
        return Cyclotomic(n, _poly_sub(list(a.coeffs), list(b.coeffs)))

    def __rsub__(self, other):
        return Cyclotomic.rational(other) - self

    def __mul__(self, other):
        a, b, n = self._pair(other)
        return Cyclotomic(n, _poly_mul(list(a.coeffs), list(b.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Field inverse via the extended Euclidean algorithm against Phi.

        Invariant kept: s_i * self == r_i (mod Phi_order), so when the
        remainder chain bottoms out at a constant gcd, s0/gcd inverts self.
        """
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        r0, r1 = list(cyclotomic_coeffs(self.order)), list(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if len(r0) != 1:
            raise ArithmeticError("element not invertible mod Phi")
        inv_const = 1 / r0[0]
        return Cyclotomic(self.order, [q * inv_const for q in s0])

    def __truediv__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        return self * other.inverse()

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta^{-1}."""
        n = self.order
        out = [Fraction(0)] * n
        for e, q in enumerate(self.coeffs):
            out[(n - e) % n] += q
        return Cyclotomic(n, out)

    # --- predicates and conversions ------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b, _ = self._pair(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # mutable-free but mixed-order hashing would be misleading

    def __repr__(self):
        return f"Cyclotomic(order={self.order}, coeffs={self.coeffs})"

    def to_mpc(self, prec: int = 113) -> mp.mpc:
        """Floating image sum_e c_e exp(2 pi i e / order) at prec bits."""
        with mp.workprec(prec + 16):
            total = mp.mpc(0)
            for e, q in enumerate(self.coeffs):
                if q:
                    x = mp.mpf(2 * e) / self.order
                    total += mp.mpf(q.numerator) / q.denominator * mp.mpc(mp.cospi(x), mp.sinpi(x))
            return total


def root_of_unity(order: int, j: int) -> Cyclotomic:
    """zeta_order^j as an exact cyclotomic element."""
    j %= order
    return Cyclotomic(order, [Fraction(0)] * j + [Fraction(1)])
