"""Agreement metrics: zeros vs attractors, exact values vs estimates.

The headline check is one-sided: how far do computed zeros sit from the
predicted attractor?  The limit statement is Hausdorff convergence, but a
finite zero set cannot cover the circle densely, so the reverse direction
is only ever reported as a trend.  The second check compares exact
polynomial values against saddle-point estimates on a per-point basis via
the normalized log error |ln|F_n(z)| - ln|estimate|| / sqrt(n).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath as mp
import numpy as np

from .curves import AttractorSet
from .errors import DomainError, EmptySelection, ResourceError
from .exports import fmt_real, metadata, write_csv, write_json
from .partitions import ExponentSequence, evaluate, generate
from .phases import PhaseVerdict, asymptotic_estimate, classify
from .precision import DEFAULT_POLICY, PrecisionPolicy
from .roots import RootSet

__all__ = [
    "DistanceProfile",
    "PhaseGrid",
    "ConvergenceReport",
    "point_to_set_distance",
    "directed_distance_profile",
    "asymptotic_report",
    "phase_grid",
    "uniform_disk_points",
    "default_thread_count",
    "write_report_json",
    "write_cloud_csv",
]

MAX_GRID_RESOLUTION = 1200


def default_thread_count() -> int:
    """Thread count from ATTRACTOR_THREADS, falling back to one."""
    raw = os.environ.get("ATTRACTOR_THREADS", "")
    try:
        count = int(raw)
    except ValueError:
        return 1
    return max(1, count)


@dataclass(frozen=True)
class DistanceProfile:
    """Summary of zero-to-attractor distances below the radius cut."""

    count_inside: int
    median_distance: float
    max_distance: float
    mean_distance: float


@dataclass(frozen=True)
class PhaseGrid:
    """Winner/tie classification over a polar grid of disk points."""

    family: ExponentSequence
    resolution: int
    boundary_tol: float
    points: tuple
    verdicts: tuple

    def ties(self) -> list:
        return [p for p, v in zip(self.points, self.verdicts) if v.tie]

    @property
    def spacing(self) -> float:
        return 1.0 / self.resolution


@dataclass(frozen=True)
class ConvergenceReport:
    """Distance statistics per weight plus pointwise asymptotic checks."""

    family: str
    weights: tuple
    per_n: tuple  # of (n, DistanceProfile)
    asymptotic_checks: tuple = ()  # of dicts {z, n, log_error}

    def __post_init__(self):
        if list(self.weights) != sorted(set(self.weights)):
            raise DomainError("report weights must be strictly increasing")
        ws = [n for n, _ in self.per_n]
        if ws != sorted(set(ws)) or not set(ws) <= set(self.weights):
            raise DomainError("per-weight entries must follow the weight list")


def _polyline_segments(points) -> Optional[tuple]:
    pts = np.array([complex(p) for p in points])
    if len(pts) == 0:
        return None
    if len(pts) == 1:
        return pts, pts
    return pts[:-1], pts[1:]


def _prepared_sets(attractor: AttractorSet) -> list:
    prepared = []
    for poly in attractor.polylines():
        seg = _polyline_segments(poly)
        if seg is not None:
            prepared.append(seg)
    return prepared


def _segment_distance(z: complex, a: np.ndarray, b: np.ndarray) -> float:
    """Min distance from z to the union of segments [a_i, b_i]."""
    if a is b:
        return float(np.min(np.abs(a - z)))
    d = b - a
    L2 = np.abs(d) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        t = ((z - a) * np.conj(d)).real / L2
    t[~np.isfinite(t)] = 0.0
    t = np.clip(t, 0.0, 1.0)
    proj = a + t * d
    return float(np.min(np.abs(proj - z)))


def point_to_set_distance(z, attractor: AttractorSet, _prepared=None) -> float:
    """Euclidean distance from z to the attractor.

    The circle contributes ||z| - 1| exactly; every polyline (traced curve,
    spoke, segment) contributes its segment-wise point-to-segment minimum.
    """
    w = complex(z)
    best = abs(abs(w) - 1.0) if attractor.has_circle else np.inf
    prepared = _prepared if _prepared is not None else _prepared_sets(attractor)
    if best == np.inf and not prepared:
        raise DomainError("attractor has no components")
    for a, b in prepared:
        dist = _segment_distance(w, a, b)
        if dist < best:
            best = dist
    return best


def directed_distance_profile(
    roots: RootSet,
    attractor: AttractorSet,
    inner_radius_cut: float = 0.95,
) -> DistanceProfile:
    """Distance statistics for the zeros with |z| <= inner_radius_cut.

    The cut removes the circle-hugging bulk of the zero set, so the
    statistics measure how well the interior zeros find the traced curves,
    spokes, and segments rather than the unit circle.
    """
    if len(roots.roots) == 0:
        raise EmptySelection("root set has no nontrivial roots")
    selected = [complex(r) for r in roots.roots if abs(complex(r)) <= inner_radius_cut]
    if not selected:
        raise EmptySelection("no roots inside the radius cut")
    prepared = _prepared_sets(attractor)
    dists = np.array([point_to_set_distance(z, attractor, prepared) for z in selected])
    return DistanceProfile(
        count_inside=len(selected),
        median_distance=float(np.median(dists)),
        max_distance=float(np.max(dists)),
        mean_distance=float(np.mean(dists)),
    )


def asymptotic_report(
    seq: ExponentSequence,
    points: Sequence,
    weights: Sequence[int],
    policy: PrecisionPolicy = None,
) -> list:
    """Normalized log errors of the saddle-point estimate at interior points.

    Each point must classify to a strict winner (ties raise DomainError from
    the classifier).  log_error(z, n) = |ln|F_n(z)| - ln|estimate(z, n)|| /
    sqrt(n); entries are returned as dicts ordered by (point, weight).
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    weights = list(weights)
    if weights != sorted(set(weights)) or (weights and weights[0] < 1):
        raise DomainError("weights must be strictly increasing positive integers")
    polys = generate(seq, max(weights)) if weights else []
    checks = []
    for z in points:
        zc = mp.mpc(z)
        verdict = classify(seq, zc, policy=pol)
        for n in weights:
            exact = evaluate(polys[n], zc, pol)
            if exact == 0:
                raise DomainError("exact polynomial value vanished at a sample point")
            est = asymptotic_estimate(seq, verdict.winner, n, zc, pol)
            log_err = abs(mp.log(abs(exact)) - mp.log(abs(est))) / mp.sqrt(n)
            checks.append(
                {
                    "z": zc,
                    "n": n,
                    "winner": verdict.winner,
                    "log_error": log_err,
                }
            )
    return checks


def _classify_range(seq, pts, boundary_tol, pol, lo, hi):
    return [classify(seq, pts[i], boundary_tol=boundary_tol, policy=pol) for i in range(lo, hi)]


def phase_grid(
    seq: ExponentSequence,
    resolution: int,
    boundary_tol=None,
    policy: PrecisionPolicy = None,
    threads: int = None,
) -> PhaseGrid:
    """Winner/tie classification on a polar grid.

    resolution counts both radial and angular steps; radii span
    [0.02, 0.995] so every point is strictly inside the punctured disk.
    Points are classified in parallel over a thread pool (default size from
    ATTRACTOR_THREADS) and reassembled in index order, so the artifact is
    deterministic for fixed inputs.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    if resolution < 2:
        raise DomainError("grid resolution must be at least 2")
    if resolution > MAX_GRID_RESOLUTION:
        raise ResourceError("grid resolution exceeds the configured maximum")
    nthreads = threads if threads is not None else default_thread_count()

    r_lo, r_hi = mp.mpf("0.02"), mp.mpf("0.995")
    pts = []
    for i in range(resolution):
        r = r_lo + (r_hi - r_lo) * i / (resolution - 1)
        for j in range(resolution):
            t = 2 * mp.pi * j / resolution
            pts.append(mp.mpc(r * mp.cos(t), r * mp.sin(t)))

    if nthreads <= 1:
        verdicts = _classify_range(seq, pts, boundary_tol, pol, 0, len(pts))
    else:
        chunk = (len(pts) + nthreads - 1) // nthreads
        ranges = [
            (lo, min(lo + chunk, len(pts))) for lo in range(0, len(pts), chunk)
        ]
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            futures = [
                pool.submit(_classify_range, seq, pts, boundary_tol, pol, lo, hi)
                for lo, hi in ranges
            ]
            verdicts = [v for f in futures for v in f.result()]

    tol = float(boundary_tol) if boundary_tol is not None else 1e-9
    return PhaseGrid(
        family=seq,
        resolution=resolution,
        boundary_tol=tol,
        points=tuple(pts),
        verdicts=tuple(verdicts),
    )


def uniform_disk_points(count: int, seed: int, radius: float = 1.0) -> list:
    """Deterministic uniform sample of the disk |z| <= radius (for controls)."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    t = 2 * np.pi * rng.random(count)
    return [complex(rr * np.cos(tt), rr * np.sin(tt)) for rr, tt in zip(r, t)]


def write_report_json(path, report: ConvergenceReport, policy: PrecisionPolicy = None, digits: int = 17) -> None:
    pol = policy if policy is not None else DEFAULT_POLICY
    payload = {
        "metadata": metadata(pol, digits, family=report.family),
        "weights": list(report.weights),
        "per_n": [
            {
                "n": n,
                "count_inside": prof.count_inside,
                "median_distance": fmt_real(prof.median_distance, digits),
                "max_distance": fmt_real(prof.max_distance, digits),
                "mean_distance": fmt_real(prof.mean_distance, digits),
            }
            for n, prof in report.per_n
        ],
        "asymptotic_checks": [
            {
                "re": fmt_real(chk["z"].real, digits),
                "im": fmt_real(chk["z"].imag, digits),
                "n": chk["n"],
                "winner": list(chk["winner"]),
                "log_error": fmt_real(chk["log_error"], digits),
            }
            for chk in report.asymptotic_checks
        ],
    }
    write_json(path, payload)


def write_cloud_csv(path, labeled_points: Sequence, digits: int = 17) -> None:
    """Point-cloud export (re, im, label) for external plotting."""
    rows = [
        (fmt_real(mp.mpc(z).real, digits), fmt_real(mp.mpc(z).imag, digits), str(label))
        for z, label in labeled_points
    ]
    write_csv(path, ("re", "im", "label"), rows)
