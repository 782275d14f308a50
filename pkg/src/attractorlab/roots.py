"""Simultaneous zero finding for exact-coefficient partition polynomials.

All zeros are found at once by Ehrlich-Aberth iteration.  A float64 numpy
stage does the bulk of the convergence from Newton-polygon initial guesses;
a certified big-float stage then polishes every root until the Newton
correction passes a precision-dependent gate.  The origin factor z^m is
removed exactly beforehand, so only nontrivial roots are iterated.

Degrees into the thousands are routine; the per-sweep cost is O(d^2) with
O(d) memory in the certified stage (the pairwise repulsion sums are chunked).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath as mp
import numpy as np

from .errors import ConvergenceError, DomainError, ResourceError
from .exports import fmt_real, metadata, write_csv, write_json
from .partitions import PartitionPolynomial
from .precision import DEFAULT_POLICY, GUARD_BITS, PrecisionPolicy

__all__ = [
    "RootSet",
    "initial_guesses",
    "find_roots",
    "residuals",
    "write_roots_csv",
    "write_roots_json",
]

# offline ceiling; CI stays at degree <= 4000
MAX_DEGREE = 25000
_CHUNK = 512


@dataclass(frozen=True)
class RootSet:
    """All zeros of one partition polynomial.

    The origin root is carried as an exact multiplicity, never iterated.
    roots are the nontrivial zeros sorted by (argument, modulus);
    residual_bound is the maximum relative Newton step |F/F'|/max(1,|r|)
    over the roots, a first-order forward error bound for simple roots,
    padded by the one-time coefficient rounding; precision_bits is the
    working precision of the final certified sweep.
    """

    n: int
    degree: int
    zero_multiplicity_at_origin: int
    roots: tuple
    residual_bound: mp.mpf
    precision_bits: int
    iterations: int = 0

    def __len__(self) -> int:
        return len(self.roots)


def _nontrivial(coeffs: Sequence[int]) -> tuple:
    m = 0
    while m < len(coeffs) and coeffs[m] == 0:
        m += 1
    if m == len(coeffs):
        raise DomainError("zero polynomial has no well-defined root set")
    top = len(coeffs) - 1
    while coeffs[top] == 0:
        top -= 1
    return m, tuple(coeffs[m : top + 1])


def _log2_abs(c: int) -> float:
    # exact enough for polygon geometry; |c| can exceed float range
    a = abs(c)
    nb = a.bit_length()
    if nb <= 900:
        return float(np.log2(float(a)))
    shift = nb - 64
    return float(np.log2(float(a >> shift))) + shift


def initial_guesses(F: PartitionPolynomial) -> list:
    """Starting points from the coefficient Newton polygon.

    The upper convex hull of (k, log2|c_k|) splits the degree into edges;
    each edge of horizontal span m contributes m guesses on the circle of
    radius (|c_lo|/|c_hi|)^(1/m), at equispaced angles with a deterministic
    per-edge golden-ratio offset so no guess lands on a symmetry axis.
    """
    _, coeffs = _nontrivial(F.coeffs)
    d = len(coeffs) - 1
    if d < 1:
        return []
    pts = [(k, _log2_abs(c)) for k, c in enumerate(coeffs) if c != 0]
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep the chain concave from above
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    guesses = []
    golden = 0.6180339887498949
    for e in range(len(hull) - 1):
        (k1, y1), (k2, y2) = hull[e], hull[e + 1]
        m = k2 - k1
        radius = 2.0 ** ((y1 - y2) / m)
        offset = 2 * np.pi * ((e + 1) * golden % 1.0)
        for j in range(m):
            theta = offset + 2 * np.pi * j / m
            guesses.append(complex(radius * np.cos(theta), radius * np.sin(theta)))
    return guesses


def _coeffs_to_float(coeffs: Sequence[int]) -> np.ndarray:
    nb = max(abs(c).bit_length() for c in coeffs)
    shift = max(0, nb - 960)
    return np.array([float(c >> shift) if shift else float(c) for c in coeffs])


def _pairwise_sums(z: np.ndarray) -> np.ndarray:
    """S_i = sum_{j != i} 1/(z_i - z_j), chunked to bound memory."""
    d = len(z)
    out = np.zeros(d, dtype=complex)
    for lo in range(0, d, _CHUNK):
        hi = min(lo + _CHUNK, d)
        diff = z[lo:hi, None] - z[None, :]
        idx = np.arange(lo, hi)
        diff[idx - lo, idx] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / diff
        inv[~np.isfinite(inv)] = 0.0
        out[lo:hi] = inv.sum(axis=1)
    return out


def _float_stage(coeffs: Sequence[int], guesses: list, max_sweeps: int = 250):
    """Cheap bulk convergence; accuracy saturates at the float64 noise floor.

    Coefficient magnitudes force cancellation near |z| = 1, so movement
    plateaus well above machine epsilon at large degree; the stage exits
    when the plateau is reached and leaves the rest to the certified stage.
    """
    c = _coeffs_to_float(coeffs)
    d = len(c) - 1
    z = np.array(guesses, dtype=complex)
    sweeps = 0
    best = np.inf
    since_best = 0
    for _ in range(max_sweeps):
        sweeps += 1
        with np.errstate(all="ignore"):
            p = np.full_like(z, c[-1])
            dp = np.zeros_like(z)
            for k in range(d - 1, -1, -1):
                dp = dp * z + p
                p = p * z + c[k]
            newton = p / dp
            S = _pairwise_sums(z)
            w = newton / (1 - newton * S)
            w[~np.isfinite(w)] = 0.0
            z = z - w
            # rein in runaways whose evaluation overflowed and froze
            far = np.abs(z) > 2.0
            if far.any():
                z[far] = 1.3 * z[far] / np.abs(z[far])
        move = float(np.max(np.abs(w)))
        scale = max(1.0, float(np.max(np.abs(z))))
        if move < 1e-12 * scale:
            break
        if move < 0.7 * best:
            best, since_best = move, 0
        else:
            since_best += 1
            if since_best >= 25:
                break
    return z, sweeps


def _horner_pair(cmpf: list, z: mp.mpc):
    p = cmpf[-1]
    dp = mp.mpc(0)
    for k in range(len(cmpf) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + cmpf[k]
    return p, dp


def _scaled_backward_error(cabs: list, z: mp.mpc, pval: mp.mpc) -> mp.mpf:
    az = abs(z)
    scale = cabs[-1]
    for k in range(len(cabs) - 2, -1, -1):
        scale = scale * az + cabs[k]
    if scale == 0:
        return abs(pval)
    return abs(pval) / scale


def find_roots(F: PartitionPolynomial, policy: PrecisionPolicy = None) -> RootSet:
    """All zeros of F by Ehrlich-Aberth iteration with adaptive precision.

    The working precision starts at bit-length(max coefficient) + 64 (never
    below the policy's bits) and doubles whenever the iteration stagnates,
    up to three escalations.  Convergence requires the maximum relative
    Newton correction |F/F'| / max(1,|r|) to drop below 2^(-working/2); the
    reported residual_bound then covers both the final backward errors and
    the one-time rounding of the exact coefficients.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    if F.degree < 1:
        raise DomainError("root finding needs degree >= 1")
    if F.degree > MAX_DEGREE:
        raise ResourceError("degree exceeds the offline ceiling of 25000")
    m, coeffs = _nontrivial(F.coeffs)
    d = len(coeffs) - 1
    if d == 0:
        return RootSet(
            n=F.n,
            degree=F.degree,
            zero_multiplicity_at_origin=m,
            roots=(),
            residual_bound=mp.mpf(0),
            precision_bits=pol.bits,
            iterations=0,
        )

    z_float, sweeps = _float_stage(coeffs, initial_guesses(F))

    maxc = max(abs(c) for c in coeffs)
    working = max(pol.bits, maxc.bit_length() + 64)
    roots = [mp.mpc(w) for w in z_float]

    for escalation in range(4):
        converged = False
        with mp.workprec(working + GUARD_BITS):
            cmpf = [mp.mpf(c) for c in coeffs]
            gate = mp.ldexp(1, -(working // 2))
            stall = mp.ldexp(1, -(working // 4))
            stalled = 0
            for _ in range(60):
                sweeps += 1
                snapshot = np.array([complex(r) for r in roots])
                S = _pairwise_sums(snapshot)
                worst_newton = mp.mpf(0)
                worst_move = mp.mpf(0)
                new_roots = []
                for i, r in enumerate(roots):
                    p, dp = _horner_pair(cmpf, r)
                    if dp == 0:
                        new_roots.append(r + mp.ldexp(1, -(working // 3)))
                        worst_move = mp.mpf(1)
                        continue
                    newton = p / dp
                    denom = 1 - newton * mp.mpc(S[i])
                    w = newton / denom if denom != 0 else newton
                    new_roots.append(r - w)
                    rel = abs(newton) / max(1, abs(r))
                    if rel > worst_newton:
                        worst_newton = rel
                    move = abs(w) / max(1, abs(r))
                    if move > worst_move:
                        worst_move = move
                roots = new_roots
                if worst_newton < gate:
                    converged = True
                    break
                stalled = stalled + 1 if worst_move < stall else 0
                if stalled >= 3:
                    break
        if converged:
            break
        if escalation == 3:
            raise ConvergenceError(
                "root iteration failed to converge after three precision escalations"
            )
        working *= 2

    with mp.workprec(working + GUARD_BITS):
        cmpf = [mp.mpf(c) for c in coeffs]
        worst = mp.mpf(0)
        for r in roots:
            p, dp = _horner_pair(cmpf, r)
            # relative Newton step: first-order forward error for simple roots
            err = abs(p / dp) / max(1, abs(r)) if dp != 0 else abs(p)
            if err > worst:
                worst = err
        # cover the one-time rounding of the exact integer coefficients
        bound = worst + mp.ldexp(1, -(working + GUARD_BITS) + 2)
        ordered = tuple(sorted(roots, key=lambda r: (mp.arg(r), abs(r))))

    return RootSet(
        n=F.n,
        degree=F.degree,
        zero_multiplicity_at_origin=m,
        roots=ordered,
        residual_bound=bound,
        precision_bits=working,
        iterations=sweeps,
    )


def residuals(F: PartitionPolynomial, roots: Sequence, policy: PrecisionPolicy = None) -> list:
    """Scaled backward error |F(r)| / sum_k |c_k| |r|^k for each root."""
    pol = policy if policy is not None else DEFAULT_POLICY
    _, coeffs = _nontrivial(F.coeffs)
    maxc = max(abs(c) for c in coeffs)
    working = max(pol.bits, maxc.bit_length() + 64)
    out = []
    with mp.workprec(working + GUARD_BITS):
        cmpf = [mp.mpf(c) for c in coeffs]
        cabs = [abs(c) for c in cmpf]
        for r in roots:
            z = mp.mpc(r)
            p, _ = _horner_pair(cmpf, z)
            out.append(_scaled_backward_error(cabs, z, p))
    return out


def write_roots_csv(path, rootset: RootSet, F: PartitionPolynomial = None, digits: int = 17) -> None:
    """CSV export (n, re, im, residual); residuals need the polynomial."""
    if F is not None:
        res = residuals(F, rootset.roots)
    else:
        res = [rootset.residual_bound] * len(rootset.roots)
    rows = [
        (rootset.n, fmt_real(r.real, digits), fmt_real(r.imag, digits), fmt_real(e, digits))
        for r, e in zip(rootset.roots, res)
    ]
    write_csv(path, ("n", "re", "im", "residual"), rows)


def write_roots_json(path, rootset: RootSet, policy: PrecisionPolicy = None, digits: int = 17) -> None:
    pol = policy if policy is not None else DEFAULT_POLICY
    payload = {
        "metadata": metadata(
            pol,
            digits,
            degree=rootset.degree,
            precision_bits=rootset.precision_bits,
            iterations=rootset.iterations,
        ),
        "n": rootset.n,
        "zero_multiplicity_at_origin": rootset.zero_multiplicity_at_origin,
        "residual_bound": fmt_real(rootset.residual_bound, digits),
        "roots": [
            [fmt_real(r.real, digits), fmt_real(r.imag, digits)] for r in rootset.roots
        ],
    }
    write_json(path, payload)
