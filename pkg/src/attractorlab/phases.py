"""Phase functions, exact Fourier data, prefactors, and leading asymptotics.

For a binary exponent sequence the Euler product is analyzed along each
root-of-unity direction e_k(h) = exp(2 pi i h/k).  The Dirichlet series
D_{t,k}(s) = sum_m a_m e_k(mt) m^{-s} enters twice: its value at s = 0
feeds, through the finite Fourier transform b_k, the algebraic prefactor
omega_{h,k,n}; its residue at s = 1 feeds, through c_k, the phase function
L_{h,k}(z)^2 = sum_j c_k(j) Li_2(e_k(hj) z), which collapses by the Kubert
identity to a rational multiple of one dilogarithm (or two for the
quadratic-unit family).  The polynomial F_n grows like exp(2 sqrt(n) L)
wherever Re L beats every competing candidate, and the classification of
that maximum partitions the open unit disk into phases.

Everything feeding a closed form is computed in exact rational/cyclotomic
arithmetic; floating point enters only when a dilogarithm is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath as mp

from .cyclotomic import Cyclotomic, root_of_unity
from .dilog import dilog, re_sqrt
from .errors import DomainError, GcdError, SingularError, UnsupportedFamily
from .exports import DEFAULT_DIGITS, fmt_real, metadata, write_csv, write_json
from .partitions import ALL, EXPLICIT, QUADRATIC, RESIDUE, ExponentSequence
from .precision import DEFAULT_POLICY, PrecisionPolicy, working

# Verdicts closer than this are boundary points, not interior calls.
DEFAULT_BOUNDARY_TOL = mp.mpf("1e-9")


def _unit(num: int, den: int) -> mp.mpc:
    """exp(2 pi i num/den) at the current precision (exact at quarter turns)."""
    x = mp.mpf(2 * (num % den)) / den
    return mp.mpc(mp.cospi(x), mp.sinpi(x))


def _frac(q: Fraction) -> mp.mpf:
    return mp.mpf(q.numerator) / q.denominator


# --- exact Dirichlet-series data ----------------------------------------

def dirichlet_at_zero(seq: ExponentSequence, t: int, k: int) -> Cyclotomic:
    """D_{t,k}(0) as an exact cyclotomic number.

    All parts: -(1/k) sum_r r e_k(tr) for t < k, and -1/2 at t = k.
    Residue class a mod p: e_k(ta) (1/2 - a/p) when k | pt, else
    e_k(ta)/(1 - e_k(pt)) by Abel summation of the rotated series.
    """
    if k < 1 or not 1 <= t <= k:
        raise DomainError("need 1 <= t <= k")
    if seq.kind == ALL:
        if t == k:
            return Cyclotomic.rational(Fraction(-1, 2))
        acc = Cyclotomic.zero()
        for r in range(1, k + 1):
            acc = acc + root_of_unity(k, t * r) * r
        return acc * Fraction(-1, k)
    if seq.kind == RESIDUE:
        if (seq.p * t) % k == 0:
            return root_of_unity(k, t * seq.a) * (Fraction(1, 2) - Fraction(seq.a, seq.p))
        return root_of_unity(k, t * seq.a) / (1 - root_of_unity(k, seq.p * t))
    raise UnsupportedFamily(
        f"no s=0 closed form wired for family {seq.label()!r}")


def residue_at_one(seq: ExponentSequence, t: int, k: int) -> Cyclotomic:
    """Residue of D_{t,k} at s = 1, exactly (zero unless k | pt)."""
    if k < 1 or not 1 <= t <= k:
        raise DomainError("need 1 <= t <= k")
    if seq.kind == ALL:
        return Cyclotomic.rational(1) if t == k else Cyclotomic.zero()
    if seq.kind == RESIDUE:
        if (seq.p * t) % k == 0:
            return root_of_unity(k, t * seq.a) * Fraction(1, seq.p)
        return Cyclotomic.zero()
    if seq.kind == QUADRATIC:
        if (seq.p * t) % k == 0:
            return (root_of_unity(k, t) + root_of_unity(k, -t)) * Fraction(1, seq.p)
        return Cyclotomic.zero()
    # finite part lists give entire Dirichlet sums
    return Cyclotomic.zero()


@dataclass(frozen=True)
class FourierData:
    """Exact b_k (s=0 data) and c_k (residue data), indexed j = 1..k."""

    k: int
    b: tuple  # Cyclotomic values
    c: tuple  # Fraction values, real and nonnegative in all wired families

    def b_value(self, j: int) -> Cyclotomic:
        if not 1 <= j <= self.k:
            raise DomainError("index j out of range")
        return self.b[j - 1]

    def c_value(self, j: int) -> Fraction:
        if not 1 <= j <= self.k:
            raise DomainError("index j out of range")
        return self.c[j - 1]


@lru_cache(maxsize=None)
def fourier_data(seq: ExponentSequence, k: int) -> FourierData:
    """Finite Fourier transforms over Z_k of the series data above.

    b_k(j) = (1/k) sum_t e_k(-tj) D_{t,k}(0),
    c_k(j) = (1/k) sum_t e_k(-tj) Res(D_{t,k}, s=1).
    """
    if seq.kind in (QUADRATIC, EXPLICIT):
        raise UnsupportedFamily(
            f"Fourier data is wired only for all-parts and residue families, "
            f"not {seq.label()!r}")
    d0 = [dirichlet_at_zero(seq, t, k) for t in range(1, k + 1)]
    res = [residue_at_one(seq, t, k) for t in range(1, k + 1)]
    b, c = [], []
    for j in range(1, k + 1):
        bj = Cyclotomic.zero()
        cj = Cyclotomic.zero()
        for t in range(1, k + 1):
            w = root_of_unity(k, -t * j)
            bj = bj + w * d0[t - 1]
            cj = cj + w * res[t - 1]
        b.append(bj * Fraction(1, k))
        cj = cj * Fraction(1, k)
        if not cj.is_rational():
            raise ArithmeticError(f"c_{k}({j}) did not collapse to a rational")
        cq = cj.rational_value()
        if cq < 0:
            raise ArithmeticError(f"c_{k}({j}) = {cq} negative")
        c.append(cq)
    return FourierData(k, tuple(b), tuple(c))


# --- phase functions ------------------------------------------------------

@dataclass(frozen=True)
class PhaseFunction:
    """L_{h,k} stored through its closed form

        L(z)^2 = scale * sum over terms of Li_2(e(num/den) * z^power),

    with one term for the all-parts and residue families and two for the
    quadratic-unit family.  Re L uses the square root with nonnegative
    real part, so Re L >= 0 everywhere on the closed disk.
    """

    h: int
    k: int
    scale: Fraction
    terms: tuple  # ((num, den, power), ...)

    def label(self) -> str:
        return f"L({self.h},{self.k})"

    def _arguments(self, z):
        out = []
        for num, den, power in self.terms:
            w = _unit(num, den) * z ** power
            aw = abs(w)
            if aw > 1:
                w /= aw  # circle points drift out by rounding; project back
            out.append((w, power))
        return out

    def L_squared(self, z, policy: PrecisionPolicy | None = None) -> mp.mpc:
        pol = policy if policy is not None else DEFAULT_POLICY
        with working(pol):
            z = mp.mpc(z)
            if abs(z) > 1 + pol.tolerance():
                raise DomainError("phase functions live on the closed unit disk")
            acc = mp.mpc(0)
            for w, _ in self._arguments(z):
                acc += dilog(w, pol)
            return acc * _frac(self.scale)

    def L(self, z, policy: PrecisionPolicy | None = None) -> mp.mpc:
        """Principal square root; Re L >= 0 by construction."""
        pol = policy if policy is not None else DEFAULT_POLICY
        with working(pol):
            return mp.sqrt(self.L_squared(z, pol))

    def re_L(self, z, policy: PrecisionPolicy | None = None) -> mp.mpf:
        pol = policy if policy is not None else DEFAULT_POLICY
        with working(pol):
            return re_sqrt(self.L_squared(z, pol))

    def dL_squared(self, z, policy: PrecisionPolicy | None = None) -> mp.mpc:
        """d/dz of L^2, via (d/dw) Li_2(w) = -log(1-w)/w and w = e z^power."""
        pol = policy if policy is not None else DEFAULT_POLICY
        with working(pol):
            z = mp.mpc(z)
            if z == 0:
                raise DomainError("derivative pole at the origin")
            if abs(z) > 1 + pol.tolerance():
                raise DomainError("phase functions live on the closed unit disk")
            acc = mp.mpc(0)
            for w, power in self._arguments(z):
                acc += -mp.log(1 - w) * power / z
            return acc * _frac(self.scale)

    def dL(self, z, policy: PrecisionPolicy | None = None) -> mp.mpc:
        pol = policy if policy is not None else DEFAULT_POLICY
        with working(pol):
            L = self.L(z, pol)
            if abs(L) < mp.ldexp(1, -(pol.bits - 8)):
                raise SingularError(f"{self.label()} vanishes; dL undefined")
            return self.dL_squared(z, pol) / (2 * L)


def phase_function(seq: ExponentSequence, h: int, k: int) -> PhaseFunction:
    """The closed-form phase function for direction e_k(h).

    All parts: L^2 = Li_2(z^k)/k^2.  Residue a mod p, g = gcd(k,p):
    L^2 = (g^2/(k^2 p)) Li_2(e_g(ha) z^{k/g}).  Quadratic units mod p:
    L^2 = (g^2/(k^2 p)) [Li_2(e_g(h) z^{k/g}) + Li_2(e_g(-h) z^{k/g})].
    """
    if k < 1:
        raise DomainError("k must be a positive integer")
    if not 1 <= h <= k:
        raise DomainError("need 1 <= h <= k")
    if gcd(h, k) != 1:
        raise GcdError(f"h={h}, k={k} are not coprime")
    if seq.kind == ALL:
        return PhaseFunction(h, k, Fraction(1, k * k), ((0, 1, k),))
    if seq.kind == RESIDUE:
        g = gcd(k, seq.p)
        return PhaseFunction(h, k, Fraction(g * g, k * k * seq.p),
                             (((h * seq.a) % g, g, k // g),))
    if seq.kind == QUADRATIC:
        g = gcd(k, seq.p)
        return PhaseFunction(h, k, Fraction(g * g, k * k * seq.p),
                             ((h % g, g, k // g), ((-h) % g, g, k // g)))
    raise UnsupportedFamily(
        f"no phase functions for explicit part lists ({seq.label()!r})")


def _divisors(p: int) -> list:
    return [d for d in range(1, p + 1) if p % d == 0]


@lru_cache(maxsize=None)
def candidates(seq: ExponentSequence) -> tuple:
    """The finite (h,k) list whose Re L maxima decide every phase.

    All parts: only k = 1, 2, 3 can win.  Odd parts: k = 1, 2, 4.  General
    residue class mod p >= 3: the p directions k | p, gcd(h,k) = 1, whose
    phase functions are the p rotations (1/p) Li_2(e_p(j) z).  Quadratic
    units: a deduplicated, coarsely pruned heuristic list (the family is
    exploratory and carries no completeness claim).
    """
    if seq.kind == ALL:
        return ((1, 1), (1, 2), (1, 3))
    if seq.kind == RESIDUE:
        if seq.p == 2:
            return ((1, 1), (1, 2), (1, 4))
        return tuple((h, k) for k in _divisors(seq.p)
                     for h in range(1, k + 1) if gcd(h, k) == 1)
    if seq.kind == QUADRATIC:
        return _quadratic_candidates(seq)
    raise UnsupportedFamily(
        f"no candidate list for explicit part lists ({seq.label()!r})")


@lru_cache(maxsize=None)
def _quadratic_candidates(seq: ExponentSequence) -> tuple:
    # dedupe k <= 3p by the exact closed form (same scale, same rotations)
    chosen = {}
    for k in range(1, 3 * seq.p + 1):
        for h in range(1, k + 1):
            if gcd(h, k) != 1:
                continue
            pf = phase_function(seq, h, k)
            sig = (pf.scale, frozenset(pf.terms))
            chosen.setdefault(sig, (h, k))
    cands = sorted(chosen.values(), key=lambda hk: (hk[1], hk[0]))
    # keep candidates that come within 1e-6 of the pointwise max somewhere
    # on a coarse polar grid; deterministic, and documented as heuristic
    pol = PrecisionPolicy(bits=64, tol=mp.mpf("1e-12"))
    pfs = [(hk, phase_function(seq, *hk)) for hk in cands]
    slack = mp.mpf("1e-6")
    keep = set()
    with mp.workprec(80):
        points = [mp.mpf(r) / 100 * _unit(s, 72)
                  for r in (35, 55, 75, 90, 98) for s in range(72)]
    for z in points:
        vals = [(pf.re_L(z, pol), hk) for hk, pf in pfs]
        top = max(v for v, _ in vals)
        for v, hk in vals:
            if v >= top - slack:
                keep.add(hk)
    return tuple(hk for hk in cands if hk in keep)


# --- classification -------------------------------------------------------

@dataclass(frozen=True)
class PhaseVerdict:
    """Winner of the Re L contest at one point, with its margin."""

    winner: tuple  # (h, k)
    margin: object  # mpf >= 0; gap to the runner-up
    tie: bool

    @property
    def k(self) -> int:
        return self.winner[1]

    @property
    def h(self) -> int:
        return self.winner[0]


def classify(seq: ExponentSequence, z, boundary_tol=None,
             policy: PrecisionPolicy | None = None) -> PhaseVerdict:
    """argmax of Re L over candidates(seq) at a point of the punctured disk.

    Deterministic tie-break: smallest k, then smallest h.  margin below
    boundary_tol raises the tie flag; callers treat such points as boundary.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    tol = mp.mpf(boundary_tol) if boundary_tol is not None else DEFAULT_BOUNDARY_TOL
    with working(pol):
        z = mp.mpc(z)
        if z == 0 or abs(z) >= 1:
            raise DomainError("classification needs 0 < |z| < 1")
        scored = [(phase_function(seq, h, k).re_L(z, pol), h, k)
                  for h, k in candidates(seq)]
        scored.sort(key=lambda s: (-s[0], s[2], s[1]))
        margin = scored[0][0] - scored[1][0] if len(scored) > 1 else mp.inf
        return PhaseVerdict((scored[0][1], scored[0][2]), margin, margin < tol)


# --- prefactors and the asymptotic estimate -------------------------------

def omega(seq: ExponentSequence, h: int, k: int, n: int, z,
          policy: PrecisionPolicy | None = None) -> mp.mpc:
    """omega_{h,k,n}(z) = e_k(-hn) prod_j (1 - e_k(hj) z)^{-b_k(j)}.

    Principal-branch powers; every base 1 - e_k(hj) z has positive real
    part on the open disk, so the product is analytic there.
    """
    if gcd(h, k) != 1:
        raise GcdError(f"h={h}, k={k} are not coprime")
    if n < 0:
        raise DomainError("weight n must be nonnegative")
    pol = policy if policy is not None else DEFAULT_POLICY
    fd = fourier_data(seq, k)
    with working(pol):
        z = mp.mpc(z)
        if abs(z) >= 1:
            raise DomainError("prefactors live on the open unit disk")
        acc = _unit(-h * n, k)
        for j in range(1, k + 1):
            b = fd.b_value(j)
            if b.is_zero():
                continue
            base = 1 - _unit(h * j, k) * z
            acc *= mp.exp(-b.to_mpc(mp.mp.prec) * mp.log(base))
        return acc


def Omega(seq: ExponentSequence, k: int, n: int, z,
          policy: PrecisionPolicy | None = None) -> mp.mpc:
    """Sum of omega_{h,k,n}(z) over 1 <= h <= k with gcd(h,k) = 1."""
    pol = policy if policy is not None else DEFAULT_POLICY
    with working(pol):
        acc = mp.mpc(0)
        for h in range(1, k + 1):
            if gcd(h, k) == 1:
                acc += omega(seq, h, k, n, z, pol)
        return acc


def asymptotic_estimate(seq: ExponentSequence, winner: tuple, n: int, z,
                        policy: PrecisionPolicy | None = None) -> mp.mpc:
    """Leading-order estimate of F_n(z) from the winning direction class.

        (1/(2 sqrt(pi) n^{3/4})) * sum over gcd(h,k)=1 of
            omega_{h,k,n}(z) sqrt(L_{h,k}) exp(2 sqrt(n) L_{h,k}),

    with a term replaced by twice its real part when its L^2 is real and
    nonpositive (the two sides of the square-root cut then contribute a
    conjugate pair).
    """
    if n < 1:
        raise DomainError("weight n must be positive")
    _, k = winner
    pol = policy if policy is not None else DEFAULT_POLICY
    verdict = classify(seq, z, policy=pol)
    if verdict.tie:
        raise DomainError("point sits on a phase boundary within tolerance")
    with working(pol):
        z = mp.mpc(z)
        cut_tol = mp.ldexp(1, -(pol.bits // 2))
        total = mp.mpc(0)
        for h in range(1, k + 1):
            if gcd(h, k) != 1:
                continue
            pf = phase_function(seq, h, k)
            L2 = pf.L_squared(z, pol)
            L = mp.sqrt(L2)
            term = (omega(seq, h, k, n, z, pol) * mp.sqrt(L)
                    * mp.exp(2 * mp.sqrt(n) * L))
            if abs(L2.imag) <= cut_tol * (1 + abs(L2)) and L2.real <= cut_tol:
                term = 2 * term.real
            total += term
        return total / (2 * mp.sqrt(mp.pi) * mp.mpf(n) ** mp.mpf("0.75"))


# --- phase-map serialization ----------------------------------------------

def write_phase_map_csv(path, points, verdicts, digits: int = DEFAULT_DIGITS) -> None:
    """CSV rows (re, im, winner_k, winner_h, margin) in point order."""
    rows = []
    for z, v in zip(points, verdicts):
        z = mp.mpc(z)
        rows.append((fmt_real(z.real, digits), fmt_real(z.imag, digits),
                     v.k, v.h, fmt_real(v.margin, digits)))
    write_csv(path, ("re", "im", "winner_k", "winner_h", "margin"), rows)


def write_phase_map_json(path, points, verdicts, policy, family_label: str,
                         resolution, boundary_tol,
                         digits: int = DEFAULT_DIGITS) -> None:
    entries = []
    for z, v in zip(points, verdicts):
        z = mp.mpc(z)
        entries.append({
            "re": fmt_real(z.real, digits),
            "im": fmt_real(z.imag, digits),
            "winner_k": v.k,
            "winner_h": v.h,
            "margin": fmt_real(v.margin, digits),
            "tie": bool(v.tie),
        })
    payload = {
        "metadata": metadata(policy, digits, family=family_label,
                             resolution=(list(resolution)
                                         if isinstance(resolution, (tuple, list))
                                         else int(resolution)),
                             boundary_tol=fmt_real(boundary_tol, digits)),
        "points": entries,
    }
    write_json(path, payload)
