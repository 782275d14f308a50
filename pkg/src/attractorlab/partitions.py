"""Partition polynomials with restricted part sizes, in exact integers.

For an allowed-part indicator a_m in {0,1} the polynomials F_n satisfy

    1 + sum_{n>=1} F_n(z) q^n  =  prod_{m>=1} (1 - z q^m)^{-a_m},

so [z^k] F_n counts partitions of n into exactly k parts drawn from the
allowed set. The high-order coefficients stabilize: [z^{n-k}] F_n equals,
for 0 <= k < floor(n/2), the k-th coefficient of the weight-shifted product
H(z) = prod_{m>=1} (1 - z^m)^{-a_{m+1}}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import mpmath as mp

from .errors import DomainError, ResourceError, UnsupportedFamily
from .precision import DEFAULT_POLICY, PrecisionPolicy, ensure_finite

# Families
ALL = "all-parts"
RESIDUE = "residue"
QUADRATIC = "quadratic-units"
EXPLICIT = "explicit"

# Largest weight the in-process generator will attempt; bigger sweeps belong
# in an offline run with a raised budget.
DEFAULT_WEIGHT_BUDGET = 8000


@dataclass(frozen=True)
class ExponentSequence:
    """Indicator sequence a_m of allowed part sizes (a_1 = 1 for the
    infinite families; explicit finite lists are a testing convenience)."""

    kind: str
    a: int = 0
    p: int = 0
    parts: tuple = ()

    def __post_init__(self):
        if self.kind == ALL:
            pass
        elif self.kind == RESIDUE:
            if self.p < 2:
                raise DomainError("residue family needs modulus p >= 2")
            if not (1 <= self.a <= self.p) or gcd(self.a, self.p) != 1:
                raise DomainError("residue family needs 1 <= a <= p with gcd(a,p)=1")
        elif self.kind == QUADRATIC:
            if self.p < 3:
                raise DomainError("quadratic-units family needs p >= 3")
        elif self.kind == EXPLICIT:
            if not all(isinstance(m, int) and m >= 1 for m in self.parts):
                raise DomainError("explicit parts must be positive integers")
            object.__setattr__(self, "parts", tuple(sorted(set(self.parts))))
        else:
            raise DomainError(f"unknown family kind {self.kind!r}")

    # constructors ------------------------------------------------------

    @staticmethod
    def all_parts() -> "ExponentSequence":
        return ExponentSequence(ALL)

    @staticmethod
    def residue(a: int, p: int) -> "ExponentSequence":
        return ExponentSequence(RESIDUE, a=a, p=p)

    @staticmethod
    def odd_parts() -> "ExponentSequence":
        return ExponentSequence(RESIDUE, a=1, p=2)

    @staticmethod
    def quadratic_units(p: int) -> "ExponentSequence":
        return ExponentSequence(QUADRATIC, p=p)

    @staticmethod
    def explicit(parts) -> "ExponentSequence":
        return ExponentSequence(EXPLICIT, parts=tuple(parts))

    # membership ----------------------------------------------------------

    def exponent(self, m: int) -> int:
        """a_m: 1 when part size m is allowed, else 0."""
        if m < 1:
            raise DomainError("part sizes start at 1")
        if self.kind == ALL:
            return 1
        if self.kind == RESIDUE:
            return 1 if m % self.p == self.a % self.p else 0
        if self.kind == QUADRATIC:
            r = m % self.p
            return 1 if r in (1 % self.p, (self.p - 1) % self.p) else 0
        return 1 if m in self.parts else 0

    def label(self) -> str:
        if self.kind == ALL:
            return "all-parts"
        if self.kind == RESIDUE:
            return f"residue-{self.a}-mod-{self.p}"
        if self.kind == QUADRATIC:
            return f"quadratic-units-{self.p}"
        return "explicit-" + "-".join(str(m) for m in self.parts)


def exponent(seq: ExponentSequence, m: int) -> int:
    """Module-level alias for seq.exponent(m)."""
    return seq.exponent(m)


@dataclass(frozen=True)
class PartitionPolynomial:
    """F_n with integer coefficients indexed by the number of parts k."""

    n: int
    coeffs: tuple  # length n + 1; coeffs[k] = #partitions of n into k parts

    @property
    def degree(self) -> int:
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k]:
                return k
        return 0

    @property
    def support(self) -> tuple:
        return tuple(k for k, c in enumerate(self.coeffs) if c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _slot_bits(n: int) -> int:
    """Field width per coefficient: p(n) < exp(pi sqrt(2n/3)) fits with room."""
    from math import log, pi, sqrt
    bits = int(pi * sqrt(2 * max(n, 1) / 3) / log(2)) + 8
    return max(16, (bits + 7) // 8 * 8)


def _unpack(row: int, n: int, width: int) -> tuple:
    nbytes = width // 8
    raw = row.to_bytes((n + 1) * nbytes, "little")
    return tuple(int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little")
                 for i in range(n + 1))


def generate(seq: ExponentSequence, max_n: int, *,
             weight_budget: int = DEFAULT_WEIGHT_BUDGET) -> list:
    """All F_n for 0 <= n <= max_n (F_0 = 1) by the bounded-knapsack sweep.

    Each row of the DP table is one big integer holding the coefficients in
    fixed-width bit fields; the shifted add rows[n] += rows[n-m] << width
    realizes c[n][k] += c[n-m][k-1] for every k at once.  Fields never carry
    into each other: partial sums grow monotonically to the final count,
    which stays below p(n) and hence below 2^width.
    """
    if max_n < 0:
        raise DomainError("max_n must be nonnegative")
    if max_n > weight_budget:
        raise ResourceError(
            f"max_n={max_n} exceeds the weight budget {weight_budget}; "
            "raise weight_budget explicitly for offline sweeps")
    width = _slot_bits(max_n)
    rows = [0] * (max_n + 1)
    rows[0] = 1
    for m in range(1, max_n + 1):
        if not seq.exponent(m):
            continue
        for n in range(m, max_n + 1):
            rows[n] += rows[n - m] << width
    return [PartitionPolynomial(n, _unpack(rows[n], n, width))
            for n in range(max_n + 1)]


def generate_single(seq: ExponentSequence, n: int, *,
                    weight_budget: int = DEFAULT_WEIGHT_BUDGET) -> PartitionPolynomial:
    """F_n alone (same sweep, no list of intermediate polynomials kept)."""
    return generate(seq, n, weight_budget=weight_budget)[n]


def tail_series(seq: ExponentSequence, order: int) -> tuple:
    """Coefficients h_0..h_order of H(z) = prod (1 - z^m)^{-a_{m+1}}.

    h_k equals the stabilized coefficient [z^{n-k}] F_n for n > 2k.
    """
    if order < 0:
        raise DomainError("order must be nonnegative")
    if order > DEFAULT_WEIGHT_BUDGET:
        raise ResourceError(f"order={order} exceeds the weight budget")
    h = [0] * (order + 1)
    h[0] = 1
    for m in range(1, order + 1):
        if not seq.exponent(m + 1):
            continue
        for n in range(m, order + 1):
            h[n] += h[n - m]
    return tuple(h)


def evaluate(poly: PartitionPolynomial, z, policy: PrecisionPolicy | None = None) -> mp.mpc:
    """Horner evaluation at working precision wide enough for the coefficients."""
    return evaluate_with_scale(poly, z, policy)[0]


def evaluate_with_scale(poly: PartitionPolynomial, z,
                        policy: PrecisionPolicy | None = None):
    """(F_n(z), sum_k |c_k| |z|^k) with both computed at coefficient-exact width."""
    pol = policy if policy is not None else DEFAULT_POLICY
    maxc = max((abs(c) for c in poly.coeffs), default=0)
    bits = max(pol.bits, maxc.bit_length() + 64)
    with mp.workprec(bits):
        z = mp.mpc(z)
        az = abs(z)
        acc = mp.mpc(0)
        scale = mp.mpf(0)
        for c in reversed(poly.coeffs):
            acc = acc * z + c
            scale = scale * az + abs(c)
        return ensure_finite(acc), scale


def rotation_check(seq: ExponentSequence, poly: PartitionPolynomial) -> bool:
    """True iff every k in the support satisfies a*k == n (mod p).

    When all parts are congruent to a mod p, a partition of n into k parts
    forces n == a*k (mod p), so the support of F_n sits in one residue class
    and F_n(e^{2 pi i/p} z) is a root of unity times F_n(z).
    """
    if seq.kind != RESIDUE:
        raise UnsupportedFamily("rotation_check applies to residue families")
    return all((seq.a * k - poly.n) % seq.p == 0 for k in poly.support)


def write_coefficients_csv(path, polys) -> None:
    """Exact coefficient export, one (n, k, coefficient) row per term."""
    from .exports import write_csv

    if isinstance(polys, PartitionPolynomial):
        polys = [polys]
    rows = []
    for poly in polys:
        for k, c in enumerate(poly.coeffs):
            if c:
                rows.append((poly.n, k, c))
    write_csv(path, ("n", "k", "coefficient"), rows)


def write_coefficients_json(path, polys, family_label: str = "") -> None:
    """Exact coefficient export; integers serialize losslessly."""
    from .exports import write_json

    if isinstance(polys, PartitionPolynomial):
        polys = [polys]
    payload = {
        "family": family_label,
        "polynomials": [
            {"n": poly.n, "coefficients": list(poly.coeffs)} for poly in polys
        ],
    }
    write_json(path, payload)
