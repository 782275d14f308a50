"""Deterministic CSV/JSON serialization for all emitted artifacts.

Every numeric field goes through explicit decimal formatting at a stated
significant-digit count, and every payload carries its precision metadata,
so a fixed configuration produces byte-identical files: no timestamps, no
locale-dependent formatting, no binary float repr drift.
"""

from __future__ import annotations

import csv
import json

import mpmath as mp

DEFAULT_DIGITS = 24


def fmt_real(x, digits: int = DEFAULT_DIGITS) -> str:
    """Fixed-significant-digit decimal string for a real quantity."""
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def fmt_complex(z, digits: int = DEFAULT_DIGITS) -> tuple:
    """(re, im) decimal strings."""
    z = mp.mpc(z)
    return fmt_real(z.real, digits), fmt_real(z.imag, digits)


def metadata(policy, digits: int = DEFAULT_DIGITS, **extra) -> dict:
    """Common payload header: tool version, precision, digit count."""
    from . import __version__
    meta = {
        "generator": f"attractorlab {__version__}",
        "precision_bits": policy.bits,
        "digits": digits,
    }
    meta.update(extra)
    return meta


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow(list(row))


def write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
