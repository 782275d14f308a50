"""Dilogarithm, Clausen, Catalan, and root-dilogarithm kernels on the closed disk.

Li2(z) = sum_{n>=1} z^n / n^2 is evaluated by region:

  |z| <= 1/2            power series, geometric tail bound;
  |1 - z| < 10^-2       reflection Li2(z) = pi^2/6 - log(z)log(1-z) - Li2(1-z);
  |z| = 1               closed form Li2(e^it) = pi^2/6 - t(2pi-t)/4 - i Cl2(t);
  otherwise             Bernoulli series Li2(z) = sum_k B_k u^{k+1}/(k+1)!
                        in u = -log(1-z), convergent for |u| < 2 pi (guaranteed
                        once |1-z| >= 10^-2 on the closed disk).

Logs are principal (imaginary part in (-pi, pi]). The root dilogarithm is
f_k(z) = (1/k) Re sqrt(Li2(z^k)) with the nonnegative real part of the
principal square root, computable as re_sqrt(w) = sqrt((Re w + |w|)/2).
"""

from __future__ import annotations

import mpmath as mp

from .errors import DomainError, PrecisionError
from .precision import DEFAULT_POLICY, GUARD_BITS, PrecisionPolicy, ensure_finite, working

# Reflection takes over inside this disk around z = 1 so that the Bernoulli
# variable u = -log(1-z) stays well inside its |u| < 2 pi disk elsewhere.
REFLECTION_RADIUS = 0.01


def _series_dilog(z):
    """Power series at the current precision; requires |z| <= 1/2."""
    target = mp.mpf(2) ** (-(mp.mp.prec - 2))
    total = mp.mpc(0)
    zp = z
    n = 1
    while True:
        total += zp / (n * n)
        n += 1
        zp *= z
        # tail <= |z|^n / n^2 * 1/(1-|z|) <= 2 |z|^n / n^2
        if 2 * abs(zp) / (n * n) < target:
            return total
        if n > 8 * mp.mp.prec + 64:
            raise PrecisionError("power series for Li2 failed to converge")


def _bernoulli_dilog(z):
    """Bernoulli series in u = -log(1-z) at the current precision.

    Valid while |u| < 2 pi; on the closed unit disk that is guaranteed for
    |1 - z| >= REFLECTION_RADIUS.
    """
    u = -mp.log(1 - z)
    q = abs(u) / (2 * mp.pi)
    if q >= 1:
        raise PrecisionError("u = -log(1-z) outside the Bernoulli disk")
    target = mp.mpf(2) ** (-(mp.mp.prec - 2))
    # contribution of the geometric-like tail: term ratio approaches q^2
    cutoff = target * (1 - q * q)
    total = u - u * u / 4  # k = 0 and k = 1 terms; odd B_k vanish beyond
    u2 = u * u
    upow = u * u2  # u^{k+1} at k = 2
    k = 2
    while True:
        term = mp.bernoulli(k) * upow / mp.factorial(k + 1)
        total += term
        if abs(term) < cutoff:
            return total
        upow *= u2
        k += 2
        if k > 64 * mp.mp.prec:
            raise PrecisionError("Bernoulli series for Li2 failed to converge")


def _reflect_dilog(z):
    """Reflection through 1 - z; requires |1 - z| < 1/2 and z != 0."""
    w = 1 - z
    if w == 0:
        return mp.mpc(mp.pi ** 2 / 6)
    return mp.pi ** 2 / 6 - mp.log(z) * mp.log(w) - _series_dilog(w)


def dilog(z, policy: PrecisionPolicy | None = None) -> mp.mpc:
    """Li2(z) on the closed unit disk |z| <= 1 (+ policy tolerance slack)."""
    with working(policy) as pol:
        z = mp.mpc(z)
        ensure_finite(z)
        r = abs(z)
        if r > 1 + pol.tolerance():
            raise DomainError(f"dilog: |z| = {mp.nstr(r, 10)} exceeds 1")
        if r == 0:
            return mp.mpc(0)
        # exactly-on-circle inputs (up to rounding slack) take the closed form
        if abs(r - 1) <= mp.mpf(2) ** (-(mp.mp.prec - 8)):
            t = mp.arg(z)
            if t < 0:
                t += 2 * mp.pi
            return _circle_dilog(t)
        if r <= 0.5:
            return ensure_finite(_series_dilog(z))
        if abs(1 - z) < REFLECTION_RADIUS:
            return ensure_finite(_reflect_dilog(z))
        return ensure_finite(_bernoulli_dilog(z))


def _clausen_small(a):
    """Cl2 on 0 <= a <= pi/2 by the log-sine series at current precision.

    Cl2 here is the integral of log(2 sin(s/2)), i.e. -Im Li2 on the circle,
    so Cl2(a) = a log a - a - sum_m |B_2m| a^{2m+1} / (2m (2m+1) (2m)!).
    """
    if a == 0:
        return mp.mpf(0)
    target = mp.mpf(2) ** (-(mp.mp.prec - 2))
    total = a * mp.log(a) - a
    a2 = a * a
    apow = a * a2
    m = 1
    while True:
        term = abs(mp.bernoulli(2 * m)) * apow / (2 * m * (2 * m + 1) * mp.factorial(2 * m))
        total -= term
        # term ratio is below (a/2pi)^2 <= 1/16, so the tail is < term/15
        if term < target:
            return total
        apow *= a2
        m += 1
        if m > 32 * mp.mp.prec:
            raise PrecisionError("Clausen series failed to converge")


def clausen2(t, policy: PrecisionPolicy | None = None) -> mp.mpf:
    """Clausen function Cl2(t) = -Im Li2(e^{it}); odd, 2 pi periodic."""
    with working(policy):
        t = mp.mpf(t)
        ensure_finite(t)
        # reduce to (-pi, pi]
        s = t - 2 * mp.pi * mp.floor(t / (2 * mp.pi))
        if s > mp.pi:
            s -= 2 * mp.pi
        sign = 1
        if s < 0:
            sign, s = -1, -s
        if s <= mp.pi / 2:
            val = _clausen_small(s)
        else:
            # |1 - e^{is}| = 2 sin(s/2) >= sqrt(2) here, far from the
            # Bernoulli disk edge
            val = -(_bernoulli_dilog(mp.mpc(mp.cos(s), mp.sin(s)))).imag
        return ensure_finite(sign * val)


def _circle_dilog(t):
    """Li2(e^{it}) for t in [0, 2 pi] at the current precision."""
    real = mp.pi ** 2 / 6 - t * (2 * mp.pi - t) / 4
    if t == 0 or t == 2 * mp.pi:
        return mp.mpc(real)
    # inline Clausen on the reduced angle to avoid re-entering dilog
    s = t if t <= mp.pi else t - 2 * mp.pi
    sign = 1
    if s < 0:
        sign, s = -1, -s
    if s <= mp.pi / 2:
        cl = _clausen_small(s)
    else:
        cl = -(_bernoulli_dilog(mp.mpc(mp.cos(s), mp.sin(s)))).imag
    return mp.mpc(real, -sign * cl)


def dilog_on_circle(t, policy: PrecisionPolicy | None = None) -> mp.mpc:
    """Li2(e^{it}) = pi^2/6 - t(2pi - t)/4 - i Cl2(t) for 0 <= t <= 2 pi."""
    with working(policy):
        t = mp.mpf(t)
        ensure_finite(t)
        if t < 0 or t > 2 * mp.pi:
            raise DomainError("dilog_on_circle: need 0 <= t <= 2 pi")
        return _circle_dilog(t)


def re_sqrt(z) -> mp.mpf:
    """Nonnegative real part of the principal square root: sqrt((Re z + |z|)/2)."""
    z = mp.mpc(z)
    s = z.real + abs(z)
    if s <= 0:
        return mp.mpf(0)
    return mp.sqrt(s / 2)


def root_dilog(k: int, z, policy: PrecisionPolicy | None = None) -> mp.mpf:
    """f_k(z) = (1/k) Re sqrt(Li2(z^k)), the k-th root dilogarithm."""
    if k < 1:
        raise DomainError("root_dilog: k must be a positive integer")
    with working(policy) as pol:
        z = mp.mpc(z)
        ensure_finite(z)
        r = abs(z)
        if r > 1 + pol.tolerance():
            raise DomainError(f"root_dilog: |z| = {mp.nstr(r, 10)} exceeds 1")
        w = z ** k
        aw = abs(w)
        if aw > 1:
            # |z| <= 1 up to tolerance, so any excess is rounding noise
            w /= aw
        return ensure_finite(re_sqrt(dilog(w, pol)) / k)


def catalan(policy: PrecisionPolicy | None = None) -> mp.mpf:
    """Catalan's constant via accelerated alternating summation.

    G = sum (-1)^n / (2n+1)^2, accelerated with Chebyshev-polynomial
    weights; n terms give roughly n * log10(3 + sqrt 8) correct digits.
    """
    with working(policy):
        prec = mp.mp.prec
        n = int(0.3933 * (prec + 12)) + 8
        d = (3 + 2 * mp.sqrt(2)) ** n
        d = (d + 1 / d) / 2
        b = mp.mpf(-1)
        c = -d
        s = mp.mpf(0)
        for j in range(n):
            c = b - c
            s += c / ((2 * j + 1) * (2 * j + 1))
            b = (j + n) * (j - n) * b / ((j + mp.mpf(1) / 2) * (j + 1))
        return ensure_finite(s / d)
