"""Special-function kernel: dilogarithm, Clausen integral, root dilogarithm."""

import mpmath as mp
import pytest

from attractorlab import (
    DomainError,
    PrecisionError,
    PrecisionPolicy,
    catalan,
    clausen2,
    dilog,
    re_sqrt,
    root_dilog,
)
from attractorlab.dilog import dilog_on_circle
from attractorlab.harness import uniform_disk_points

# frozen anchors stay strings: parsing at import time would round to the
# ambient 53-bit precision
CATALAN_20 = "0.91596559417721901505"


def test_dilog_closed_values():
    with mp.workprec(160):
        assert dilog(0) == 0
        assert abs(dilog(1) - mp.pi**2 / 6) < mp.mpf("1e-30")
        assert abs(dilog(-1) + mp.pi**2 / 12) < mp.mpf("1e-30")
        want = mp.mpc(-mp.pi**2 / 48, catalan())
        assert abs(dilog(mp.mpc(0, 1)) - want) < mp.mpf("1e-30")


def test_dilog_region_dispatch_consistency():
    # the series, Bernoulli, reflection, and circle paths must agree where
    # their regions meet
    with mp.workprec(160):
        for z in (mp.mpc("0.49", "0.1"), mp.mpc("0.51", "0.1"),
                  mp.mpc("0.995", "0.002"), mp.mpc("0.3", "0.95")):
            direct = dilog(z)
            k2 = dilog(z * z)
            kub = dilog(z) + dilog(-z)
            assert abs(kub - k2 / 2) < mp.mpf("1e-30"), z
        t = mp.mpf("0.7")
        assert abs(dilog(mp.exp(mp.mpc(0, t))) - dilog_on_circle(t)) < mp.mpf("1e-30")


def test_dilog_domain_and_conjugation():
    with pytest.raises(DomainError):
        dilog(mp.mpc(1.5, 0))
    with mp.workprec(160):
        for z in uniform_disk_points(200, seed=11, radius=0.999):
            zc = mp.mpc(z)
            assert abs(dilog(mp.conj(zc)) - mp.conj(dilog(zc))) < mp.mpf("1e-30")


def test_clausen_values_and_symmetry():
    with mp.workprec(160):
        assert clausen2(0) == 0
        assert abs(clausen2(mp.pi)) < mp.mpf("1e-30")
        assert abs(clausen2(mp.pi / 2) + catalan()) < mp.mpf("1e-30")
        t = mp.mpf("1.1")
        assert abs(clausen2(-t) + clausen2(t)) < mp.mpf("1e-30")
        assert abs(clausen2(t + 2 * mp.pi) - clausen2(t)) < mp.mpf("1e-30")
        # Clausen is -Im Li2 on the circle
        assert abs(clausen2(t) + dilog(mp.exp(mp.mpc(0, t))).imag) < mp.mpf("1e-30")


def test_dilog_on_circle_quadratic_real_part():
    with mp.workprec(160):
        for t in (mp.mpf("0.3"), mp.mpf("1.9"), mp.mpf("4.4")):
            got = dilog_on_circle(t)
            r = mp.pi**2 / 6 - t * (2 * mp.pi - t) / 4
            assert abs(got.real - r) < mp.mpf("1e-30")
        assert abs(dilog_on_circle(0) - mp.pi**2 / 6) < mp.mpf("1e-30")
        assert abs(dilog_on_circle(mp.pi) + mp.pi**2 / 12) < mp.mpf("1e-30")


def test_re_sqrt():
    with mp.workprec(160):
        assert re_sqrt(0) == 0
        assert abs(re_sqrt(1) - 1) < mp.mpf("1e-40")
        assert re_sqrt(-1) == 0
        assert abs(re_sqrt(mp.mpc(0, 1)) - 1 / mp.sqrt(2)) < mp.mpf("1e-40")
        # always the real part of the principal square root
        for w in (mp.mpc("2.3", "-1.1"), mp.mpc("-0.4", "0.9")):
            assert abs(re_sqrt(w) - mp.sqrt(w).real) < mp.mpf("1e-40")


def test_root_dilog_values():
    with mp.workprec(160):
        for r in ("0", "-0.25", "-0.7", "-1"):
            assert root_dilog(1, mp.mpf(r)) == 0
        assert abs(root_dilog(1, 1) - mp.pi / mp.sqrt(6)) < mp.mpf("1e-30")
        assert abs(root_dilog(2, 1) - mp.pi / (2 * mp.sqrt(6))) < mp.mpf("1e-30")
        G = catalan()
        f1i = mp.sqrt(-mp.pi**2 + mp.sqrt(mp.pi**4 + 2304 * G**2)) / (4 * mp.sqrt(6))
        assert abs(root_dilog(1, mp.mpc(0, 1)) - f1i) < mp.mpf("1e-30")
    with pytest.raises(DomainError):
        root_dilog(1, mp.mpc(1.2, 0.4))


def test_catalan_digits_and_consistency():
    with mp.workprec(160):
        assert abs(catalan() - mp.mpf(CATALAN_20)) < mp.mpf("1e-20")
        assert abs(dilog(mp.mpc(0, 1)).imag - catalan()) < mp.mpf("1e-30")


def test_precision_policy_validation():
    with pytest.raises(PrecisionError):
        PrecisionPolicy(bits=32)
    with pytest.raises(PrecisionError):
        PrecisionPolicy(bits=128, tol=-1.0)
    with pytest.raises(PrecisionError):
        PrecisionPolicy(bits=64, tol=1e-30)
    pol = PrecisionPolicy(bits=256, tol=1e-40)
    assert abs(dilog(mp.mpf("0.77"), pol) - dilog(mp.mpf("0.77"))) < mp.mpf("1e-35")
