"""Working-precision policy threaded through every numeric routine.

All big-float arithmetic runs on mpmath; complex values are mpmath.mpc.
A PrecisionPolicy fixes the mantissa width in bits and the target
tolerance for series truncation and domain snapping. Routines compute
with a small guard above policy.bits and never return non-finite values.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass

import mpmath as mp

from .errors import PrecisionError

# Guard bits added on top of policy.bits while summing series etc.
GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionPolicy:
    """Mantissa width and truncation tolerance for one computation."""

    bits: int = 128
    tol: float = 1e-25

    def __post_init__(self):
        if self.bits < 53:
            raise PrecisionError("precision below 53 bits is not supported")
        if not self.tol > 0:
            raise PrecisionError("tolerance must be positive")
        # tol must be attainable with an 8-bit headroom at this width
        if self.tol < 2.0 ** (-(self.bits - 8)):
            raise PrecisionError(
                f"tol={self.tol!r} unattainable at {self.bits} bits"
            )

    def tolerance(self) -> mp.mpf:
        with mp.workprec(self.bits + GUARD_BITS):
            return mp.mpf(self.tol)


DEFAULT_POLICY = PrecisionPolicy()


@contextlib.contextmanager
def working(policy: PrecisionPolicy | None, extra: int = GUARD_BITS):
    """Context manager: mpmath workprec at policy.bits + extra."""
    pol = policy if policy is not None else DEFAULT_POLICY
    with mp.workprec(pol.bits + extra):
        yield pol


def ensure_finite(value):
    """Return value unchanged unless it contains nan/inf."""
    if isinstance(value, mp.mpc):
        ok = mp.isfinite(value.real) and mp.isfinite(value.imag)
    else:
        ok = mp.isfinite(value)
    if not ok:
        raise PrecisionError(f"non-finite intermediate value {value!r}")
    return value
