"""Tracing of phase-boundary curves and assembly of limit attractors.

A boundary between two dominance regions is a level set Re L_a(z) = Re L_b(z)
of two candidate phase functions.  Away from branch rays these sets are smooth
curves; this module integrates them by arclength with a fourth-order
predictor and a Newton corrector that projects back onto the level set after
every step.  It also locates the special constants of the all-parts and
odd-parts geometries (the interior triple point, the axis crossing i*beta)
and assembles complete attractor sets for the families whose boundary systems
are understood.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath as mp

from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    NoSignChange,
    SingularError,
    StepFailure,
    UnsupportedFamily,
)
from .exports import fmt_real, metadata, write_csv, write_json
from .partitions import ALL, RESIDUE, ExponentSequence
from .phases import PhaseFunction, candidates, phase_function
from .precision import DEFAULT_POLICY, PrecisionPolicy, working

__all__ = [
    "TraceControls",
    "CurvePolyline",
    "AttractorSet",
    "ode_rhs",
    "seed_on_circle",
    "trace",
    "find_beta",
    "triple_point",
    "attractor_set",
    "write_curve_json",
    "write_curves_csv",
    "write_attractor_json",
]


@dataclass(frozen=True)
class TraceControls:
    """Step-size and guard-band parameters for the tracer.

    Distances are Euclidean in the z plane; angles are radians.  The guard
    bands keep every emitted point strictly inside the punctured open disk
    and strictly away from the branch rays of the candidates being traced,
    where the level set loses smoothness.
    """

    max_step: float = 1e-3
    min_step: float = 1e-9
    corrector_tol: float = 1e-10
    eps_circle: float = 1e-4
    eps_origin: float = 1e-3
    branch_band: float = 1e-4
    junction_tol: float = 1e-8
    singular_tol: float = 1e-9
    max_points: int = 20000


@dataclass(frozen=True)
class CurvePolyline:
    """A traced level-set arc.

    pair is the normalized ((h,k),(h',k')) the arc ties, points the ordered
    samples, residuals the per-point values |Re L_a - Re L_b| after
    correction.  stop_reason is one of "circle", "origin", "branch",
    "junction", "max_points"; junction holds the localized triple tie when
    stop_reason == "junction" and None otherwise.
    """

    pair: tuple
    points: tuple
    residuals: tuple
    stop_reason: str
    junction: Optional[mp.mpc] = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def residual_max(self) -> mp.mpf:
        return max(self.residuals) if self.residuals else mp.mpf(0)


@dataclass(frozen=True)
class AttractorSet:
    """The limiting zero attractor of a family, as drawable geometry.

    The unit circle always belongs to the attractor and is kept implicit.
    curves are traced polylines, segments are straight chords given by their
    endpoints, spokes are radial polylines (used by the residue families,
    where the interior boundaries are exact rays).
    """

    family: ExponentSequence
    curves: tuple = ()
    segments: tuple = ()
    spokes: tuple = ()
    has_circle: bool = True

    def polylines(self):
        """All point sequences except the circle, for distance queries."""
        for curve in self.curves:
            yield curve.points
        for spoke in self.spokes:
            yield spoke
        for a, b in self.segments:
            yield (a, b)


def _normalize_pair(pair) -> tuple:
    if len(pair) == 2 and all(isinstance(q, int) for q in pair):
        pair = ((1, int(pair[0])), (1, int(pair[1])))
    (h1, k1), (h2, k2) = ((int(h), int(k)) for h, k in pair)
    a, b = sorted(((h1, k1), (h2, k2)), key=lambda hk: (hk[1], hk[0]))
    if a == b:
        raise DomainError("level set needs two distinct candidates")
    return (a, b)


def _branch_rays(pf: PhaseFunction) -> list:
    """Angles where re_sqrt(L^2) loses smoothness.

    L^2 is a combination of Li2(rot * z^power); each term is real negative
    exactly on the rays arg(rot * z^power) = pi with |rot z^power| < 1, so
    the square root kinks on arg z = (pi - arg rot + 2 pi j) / power.
    """
    rays = []
    two_pi = 2 * mp.pi
    for num, den, power in pf.terms:
        rot_angle = two_pi * (num % den) / den
        for j in range(power):
            rays.append(mp.fmod((mp.pi - rot_angle + two_pi * j) / power, two_pi))
    return rays


def _ray_distance(z, rays) -> mp.mpf:
    t = mp.fmod(mp.arg(z), 2 * mp.pi)
    if t < 0:
        t += 2 * mp.pi
    best = mp.inf
    for a in rays:
        d = abs(t - a)
        d = min(d, 2 * mp.pi - d)
        if d < best:
            best = d
    return best


def _pf_pair(seq: ExponentSequence, pair):
    return tuple(phase_function(seq, h, k) for h, k in pair)


def _delta(pfa: PhaseFunction, pfb: PhaseFunction, z):
    """(Re L_a - Re L_b, L_a' - L_b') at z, sharing the L evaluations."""
    la, lb = pfa.L(z), pfb.L(z)
    g = la.real - lb.real
    da = pfa.dL_squared(z) / (2 * la)
    db = pfb.dL_squared(z) / (2 * lb)
    return g, da - db


def ode_rhs(seq: ExponentSequence, pair, x, y, policy: PrecisionPolicy = None):
    """Slope dy/dx of the level set Re L_a = Re L_b at z = x + iy.

    The gradient of Re(L_a - L_b) is (Re D', -Im D') with D' = L_a' - L_b',
    so the tangent slope is Re D' / Im D'.  Raises SingularError where the
    tangent is vertical (|Im D'| below singular_tol) and BranchError inside
    the branch-ray guard bands of either candidate.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    pair = _normalize_pair(pair)
    pfa, pfb = _pf_pair(seq, pair)
    ctl = TraceControls()
    with working(pol):
        z = mp.mpc(x, y)
        if abs(z) == 0 or abs(z) >= 1:
            raise DomainError("slope is defined on the punctured open disk")
        rays = _branch_rays(pfa) + _branch_rays(pfb)
        if _ray_distance(z, rays) < ctl.branch_band:
            raise BranchError("level set is not smooth inside a branch-ray band")
        _, dprime = _delta(pfa, pfb, z)
        if abs(mp.im(dprime)) < ctl.singular_tol:
            raise SingularError("vertical tangent: |Im(L_a' - L_b')| below tolerance")
        return mp.re(dprime) / mp.im(dprime)


def seed_on_circle(seq: ExponentSequence, pair, bracket, policy: PrecisionPolicy = None):
    """Point e^{it} on the unit circle with Re L_a = Re L_b, by bisection.

    bracket = (t_lo, t_hi) must straddle a sign change of the margin on the
    circle, where both phase functions evaluate through the closed circle
    form of the dilogarithm; otherwise NoSignChange is raised.  The angle is
    resolved to 1e-12.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    pair = _normalize_pair(pair)
    pfa, pfb = _pf_pair(seq, pair)
    with working(pol):
        lo, hi = mp.mpf(bracket[0]), mp.mpf(bracket[1])
        if not lo < hi:
            raise DomainError("bracket endpoints must be increasing")

        def margin(t):
            z = mp.mpc(mp.cos(t), mp.sin(t))
            return pfa.re_L(z) - pfb.re_L(z)

        glo, ghi = margin(lo), margin(hi)
        if glo == 0:
            return mp.mpc(mp.cos(lo), mp.sin(lo))
        if ghi == 0:
            return mp.mpc(mp.cos(hi), mp.sin(hi))
        if mp.sign(glo) == mp.sign(ghi):
            raise NoSignChange("margin has equal signs at the bracket endpoints")
        while hi - lo > mp.mpf("1e-12"):
            mid = (lo + hi) / 2
            gm = margin(mid)
            if gm == 0:
                lo = hi = mid
                break
            if mp.sign(gm) == mp.sign(glo):
                lo, glo = mid, gm
            else:
                hi = mid
        t = (lo + hi) / 2
        return mp.mpc(mp.cos(t), mp.sin(t))


def _correct(pfa, pfb, z, ctl: TraceControls):
    """Newton projection onto the level set; returns (z, residual) or None.

    The constraint g = Re(L_a - L_b) is scalar, so the Newton step moves
    along the gradient: z <- z - g conj(D') / |D'|^2.
    """
    for _ in range(12):
        g, dprime = _delta(pfa, pfb, z)
        resid = abs(g)
        if resid < ctl.corrector_tol:
            return z, resid
        denom = abs(dprime) ** 2
        if denom < mp.mpf("1e-60"):
            return None
        z = z - g * mp.conj(dprime) / denom
    return None


def _tangent(pfa, pfb, z, ref, ctl: TraceControls):
    """Unit tangent i conj(D')/|D'|, sign-aligned with ref when given."""
    _, dprime = _delta(pfa, pfb, z)
    mag = abs(dprime)
    if mag < mp.mpf("1e-30"):
        raise SingularError("level-set tangent undefined: L_a' = L_b'")
    tau = mp.mpc(0, 1) * mp.conj(dprime) / mag
    if ref is not None and mp.re(tau * mp.conj(ref)) < 0:
        tau = -tau
    return tau


def trace(
    seq: ExponentSequence,
    seed,
    pair,
    controls: TraceControls = None,
    policy: PrecisionPolicy = None,
    direction: str = "inward",
):
    """Trace the level set Re L_a = Re L_b from seed until a stop fires.

    The predictor is a fourth-order Runge-Kutta arclength step along the
    unit tangent; the corrector is the Newton projection of _correct.  The
    trace stops on the circle band (|z| > 1 - eps_circle), the origin band
    (|z| < eps_origin), a branch-ray band of either candidate, a junction
    (a third candidate's margin changes sign; the crossing is localized by
    corrected bisection and reported), or the point budget.  Seeds landing
    in the circle band (circle seeds in particular) are pulled inward by
    2 eps_circle before correction.  direction selects the initial tangent
    sign: "inward" decreases |z|, "outward" increases it.
    """
    ctl = controls if controls is not None else TraceControls()
    pol = policy if policy is not None else DEFAULT_POLICY
    pair = _normalize_pair(pair)
    pfa, pfb = _pf_pair(seq, pair)
    thirds = [
        phase_function(seq, h, k) for h, k in candidates(seq) if (h, k) not in pair
    ]
    rays = _branch_rays(pfa) + _branch_rays(pfb)
    if direction not in ("inward", "outward"):
        raise DomainError("direction must be 'inward' or 'outward'")

    with working(pol):
        z = mp.mpc(seed)
        if abs(z) > 1 - ctl.eps_circle:
            z = z * (1 - 2 * ctl.eps_circle) / abs(z)
        got = _correct(pfa, pfb, z, ctl)
        if got is None:
            raise StepFailure("seed does not converge onto the level set")
        z, resid = got

        def gap(w):
            if not thirds:
                return None
            common = (pfa.re_L(w) + pfb.re_L(w)) / 2
            return min(common - pf.re_L(w) for pf in thirds)

        def corrected(w):
            got = _correct(pfa, pfb, w, ctl)
            return got[0] if got is not None else None

        points = [z]
        residuals = [resid]
        tau = _tangent(pfa, pfb, z, None, ctl)
        if direction == "inward" and mp.re(tau * mp.conj(z)) > 0:
            tau = -tau
        if direction == "outward" and mp.re(tau * mp.conj(z)) < 0:
            tau = -tau

        armed_sign = 0
        g3 = gap(z)
        if g3 is not None and abs(g3) > 100 * ctl.junction_tol:
            armed_sign = 1 if g3 > 0 else -1

        stop = "max_points"
        junction = None
        step = mp.mpf(ctl.max_step)
        min_step = mp.mpf(ctl.min_step)

        while len(points) < ctl.max_points:
            try:
                k1 = _tangent(pfa, pfb, z, tau, ctl)
                k2 = _tangent(pfa, pfb, z + step / 2 * k1, k1, ctl)
                k3 = _tangent(pfa, pfb, z + step / 2 * k2, k2, ctl)
                k4 = _tangent(pfa, pfb, z + step * k3, k3, ctl)
            except SingularError:
                stop = "branch"
                break
            z_pred = z + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            got = _correct(pfa, pfb, z_pred, ctl)
            if got is None or abs(got[0] - z) > 2 * step:
                step = step / 2
                if step < min_step:
                    raise StepFailure("corrector failed above the minimum step")
                continue
            z_new, resid = got

            if _ray_distance(z_new, rays) < ctl.branch_band:
                stop = "branch"
                break
            if abs(z_new) > 1 - ctl.eps_circle:
                stop = "circle"
                break
            if abs(z_new) < ctl.eps_origin:
                stop = "origin"
                break

            g3 = gap(z_new)
            if g3 is not None:
                if armed_sign == 0 and abs(g3) > 100 * ctl.junction_tol:
                    armed_sign = 1 if g3 > 0 else -1
                elif armed_sign != 0 and g3 * armed_sign <= 0:
                    za, zb = z, z_new
                    zj = z_new
                    for _ in range(64):
                        zm = corrected((za + zb) / 2)
                        if zm is None:
                            break
                        gm = gap(zm)
                        if gm * armed_sign > 0:
                            za = zm
                        else:
                            zb = zm
                        zj = zm
                        if abs(za - zb) < mp.mpf("1e-14"):
                            break
                    junction = zj
                    if abs(zj - points[-1]) >= min_step:
                        g, _ = _delta(pfa, pfb, zj)
                        points.append(zj)
                        residuals.append(abs(g))
                    stop = "junction"
                    break

            points.append(z_new)
            residuals.append(resid)
            tau = k4 if mp.re(k4 * mp.conj(k1)) > 0 else k1
            z = z_new
            step = min(step * 2, mp.mpf(ctl.max_step))

        return CurvePolyline(
            pair=pair,
            points=tuple(points),
            residuals=tuple(residuals),
            stop_reason=stop,
            junction=junction,
        )


def find_beta(policy: PrecisionPolicy = None):
    """Axis constant beta in (3/4, 1): the root of f_1(i r) = f_2(r).

    f_k(z) = (1/k) re_sqrt(Li2(z^k)); on the positive imaginary axis the
    odd-parts candidates (1,1) and (1,4) tie exactly where these two root
    dilogarithms cross.  Bisection; the bracket signs are asserted.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    from .dilog import root_dilog

    with working(pol):
        def margin(r):
            return root_dilog(1, mp.mpc(0, r)) - root_dilog(2, mp.mpf(r))

        lo, hi = mp.mpf(3) / 4, mp.mpf(1) - mp.mpf("1e-12")
        glo, ghi = margin(lo), margin(hi)
        if not (glo > 0 and ghi < 0):
            raise NoSignChange("margin does not change sign on (3/4, 1)")
        for _ in range(60):
            mid = (lo + hi) / 2
            if margin(mid) > 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def triple_point(policy: PrecisionPolicy = None):
    """All-parts interior triple point: Re L_1 = Re L_2 = Re L_3.

    A coarse polar scan over the second-quadrant search window minimizes
    |f_1 - f_2| + |f_2 - f_3| at low precision, then a damped two-variable
    Newton iteration on (Re(L_1 - L_2), Re(L_2 - L_3)) polishes the point at
    the requested precision.  Both residuals are verified below 1e-10.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    seq = ExponentSequence.all_parts()
    pf1 = phase_function(seq, 1, 1)
    pf2 = phase_function(seq, 1, 2)
    pf3 = phase_function(seq, 1, 3)

    coarse = PrecisionPolicy(bits=64, tol=1e-10)
    with working(coarse):
        best, best_z = mp.inf, None
        t_lo, t_hi = mp.pi / 2 + mp.mpf("0.05"), mp.pi - mp.mpf("0.05")
        for i in range(36):
            r = mp.mpf("0.50") + (mp.mpf("0.99") - mp.mpf("0.50")) * i / 35
            for j in range(48):
                t = t_lo + (t_hi - t_lo) * j / 47
                z = mp.mpc(r * mp.cos(t), r * mp.sin(t))
                f1, f2, f3 = pf1.re_L(z), pf2.re_L(z), pf3.re_L(z)
                score = abs(f1 - f2) + abs(f2 - f3)
                if score < best:
                    best, best_z = score, z

    with working(pol):
        z = mp.mpc(best_z)

        def system(w):
            l1, l2, l3 = pf1.L(w), pf2.L(w), pf3.L(w)
            d1 = pf1.dL_squared(w) / (2 * l1)
            d2 = pf2.dL_squared(w) / (2 * l2)
            d3 = pf3.dL_squared(w) / (2 * l3)
            g = (l1.real - l2.real, l2.real - l3.real)
            rows = (d1 - d2, d2 - d3)
            return g, rows

        g, rows = system(z)
        norm = abs(g[0]) + abs(g[1])
        for _ in range(80):
            if norm < mp.mpf("1e-30"):
                break
            # gradient of Re(D) as a row (Re D', -Im D') acting on (dx, dy)
            a11, a12 = mp.re(rows[0]), -mp.im(rows[0])
            a21, a22 = mp.re(rows[1]), -mp.im(rows[1])
            det = a11 * a22 - a12 * a21
            if abs(det) < mp.mpf("1e-40"):
                raise ConvergenceError("singular Jacobian near the triple point")
            dx = (-g[0] * a22 + g[1] * a12) / det
            dy = (-a11 * g[1] + a21 * g[0]) / det
            eta = mp.mpf(1)
            for _ in range(30):
                z_try = z + mp.mpc(eta * dx, eta * dy)
                g_try, rows_try = system(z_try)
                norm_try = abs(g_try[0]) + abs(g_try[1])
                if norm_try < norm:
                    z, g, rows, norm = z_try, g_try, rows_try, norm_try
                    break
                eta = eta / 2
            else:
                raise ConvergenceError("damped Newton stalled near the triple point")
        if not (abs(g[0]) < mp.mpf("1e-10") and abs(g[1]) < mp.mpf("1e-10")):
            raise ConvergenceError("triple-point residuals did not reach 1e-10")
        return z


def _map_polyline(curve: CurvePolyline, func, pair) -> CurvePolyline:
    return CurvePolyline(
        pair=_normalize_pair(pair),
        points=tuple(func(p) for p in curve.points),
        residuals=curve.residuals,
        stop_reason=curve.stop_reason,
        junction=func(curve.junction) if curve.junction is not None else None,
    )


def attractor_set(
    seq: ExponentSequence,
    policy: PrecisionPolicy = None,
    controls: TraceControls = None,
) -> AttractorSet:
    """Assemble the limiting zero attractor of a supported family.

    All parts: the circle plus the three boundary arcs through the interior
    triple point z* and its conjugate; the (1,3) and (2,3) arcs run from
    their circle seeds to z*, and the (1,2) arc continues from z* to the
    origin band.  Odd parts: the circle, the four symmetric copies of the
    traced arc gamma, and the axis segment i[-beta, beta].  Residue classes
    a = 1 mod p with p >= 3: the circle plus the p spokes {z : z^p = -1},
    emitted as sampled radial polylines.  Other families raise
    UnsupportedFamily.  The output is closed under conjugation.
    """
    pol = policy if policy is not None else DEFAULT_POLICY
    ctl = controls if controls is not None else TraceControls()

    if seq.kind == ALL:
        zstar = triple_point(pol)
        with working(pol):
            s13 = seed_on_circle(seq, ((1, 1), (1, 3)), (mp.pi / 2, 2 * mp.pi / 3), pol)
            s23 = seed_on_circle(seq, ((1, 2), (1, 3)), (2 * mp.pi / 3, 5 * mp.pi / 6), pol)
        c13 = trace(seq, s13, ((1, 1), (1, 3)), ctl, pol)
        c23 = trace(seq, s23, ((1, 2), (1, 3)), ctl, pol)
        c12 = trace(seq, zstar, ((1, 1), (1, 2)), ctl, pol, direction="inward")
        # mirror inside the working context: conjugation at ambient
        # precision would round the traced points
        with working(pol):
            curves = (
                c13,
                c23,
                c12,
                _map_polyline(c13, mp.conj, c13.pair),
                _map_polyline(c23, mp.conj, c23.pair),
                _map_polyline(c12, mp.conj, c12.pair),
            )
        return AttractorSet(family=seq, curves=curves)

    if seq.kind == RESIDUE and seq.a == 1 and seq.p == 2:
        beta = find_beta(pol)
        with working(pol):
            s14 = seed_on_circle(
                seq, ((1, 1), (1, 4)), (mp.mpf("0.05"), mp.pi / 2), pol
            )
        gamma = trace(seq, s14, ((1, 1), (1, 4)), ctl, pol)
        with working(pol):
            curves = (
                gamma,
                _map_polyline(gamma, mp.conj, gamma.pair),
                _map_polyline(gamma, lambda w: -w, ((1, 2), (1, 4))),
                _map_polyline(gamma, lambda w: -mp.conj(w), ((1, 2), (1, 4))),
            )
            segment = (mp.mpc(0, -beta), mp.mpc(0, beta))
        return AttractorSet(family=seq, curves=curves, segments=(segment,))

    if seq.kind == RESIDUE and seq.a == 1 and seq.p >= 3:
        with working(pol):
            spokes = []
            samples = 512
            r_lo = mp.mpf(ctl.eps_origin)
            r_hi = 1 - mp.mpf(ctl.eps_circle)
            for j in range(seq.p):
                angle = (2 * j + 1) * mp.pi / seq.p
                unit = mp.mpc(mp.cos(angle), mp.sin(angle))
                spokes.append(
                    tuple(
                        (r_lo + (r_hi - r_lo) * i / (samples - 1)) * unit
                        for i in range(samples)
                    )
                )
        return AttractorSet(family=seq, spokes=tuple(spokes))

    raise UnsupportedFamily(
        "attractor assembly covers all parts, odd parts, and residue 1 mod p"
    )


def write_curve_json(
    path,
    curve: CurvePolyline,
    policy: PrecisionPolicy = None,
    family_label: str = "",
    digits: int = 17,
) -> None:
    pol = policy if policy is not None else DEFAULT_POLICY
    payload = {
        "metadata": metadata(pol, digits, family=family_label),
        "pair": [list(hk) for hk in curve.pair],
        "stop_reason": curve.stop_reason,
        "residual_max": fmt_real(curve.residual_max, digits),
        "junction": (
            [fmt_real(curve.junction.real, digits), fmt_real(curve.junction.imag, digits)]
            if curve.junction is not None
            else None
        ),
        "points": [
            [fmt_real(p.real, digits), fmt_real(p.imag, digits)] for p in curve.points
        ],
    }
    write_json(path, payload)


def write_curves_csv(path, curves: Sequence[CurvePolyline], digits: int = 17) -> None:
    rows = []
    for ci, curve in enumerate(curves):
        (h1, k1), (h2, k2) = curve.pair
        for pi, (p, r) in enumerate(zip(curve.points, curve.residuals)):
            rows.append(
                (
                    ci,
                    h1,
                    k1,
                    h2,
                    k2,
                    pi,
                    fmt_real(p.real, digits),
                    fmt_real(p.imag, digits),
                    fmt_real(r, digits),
                )
            )
    write_csv(
        path,
        ("curve", "h1", "k1", "h2", "k2", "index", "re", "im", "residual"),
        rows,
    )


def write_attractor_json(
    path,
    aset: AttractorSet,
    policy: PrecisionPolicy = None,
    digits: int = 17,
) -> None:
    pol = policy if policy is not None else DEFAULT_POLICY
    payload = {
        "metadata": metadata(pol, digits, family=aset.family.label()),
        "circle": aset.has_circle,
        "curves": [
            {
                "pair": [list(hk) for hk in c.pair],
                "stop_reason": c.stop_reason,
                "residual_max": fmt_real(c.residual_max, digits),
                "points": [
                    [fmt_real(p.real, digits), fmt_real(p.imag, digits)]
                    for p in c.points
                ],
            }
            for c in aset.curves
        ],
        "segments": [
            [
                [fmt_real(a.real, digits), fmt_real(a.imag, digits)],
                [fmt_real(b.real, digits), fmt_real(b.imag, digits)],
            ]
            for a, b in aset.segments
        ],
        "spokes": [
            [[fmt_real(p.real, digits), fmt_real(p.imag, digits)] for p in spoke]
            for spoke in aset.spokes
        ],
    }
    write_json(path, payload)
