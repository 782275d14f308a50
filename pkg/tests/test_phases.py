"""Fourier data, phase functions, classification, and the growth estimate."""

from fractions import Fraction

import mpmath as mp
import pytest

from attractorlab import (
    DomainError,
    ExponentSequence,
    GcdError,
    UnsupportedFamily,
    evaluate,
    generate,
)
from attractorlab.dilog import dilog, root_dilog
from attractorlab.phases import (
    Omega,
    asymptotic_estimate,
    candidates,
    classify,
    dirichlet_at_zero,
    fourier_data,
    omega,
    phase_function,
    write_phase_map_csv,
    write_phase_map_json,
    residue_at_one,
)
from attractorlab.harness import uniform_disk_points

ALLP = ExponentSequence.all_parts()
ODD = ExponentSequence.odd_parts()
R13 = ExponentSequence.residue(1, 3)

# reference tables for the finite Fourier transforms, by family and k
B_TABLES = {
    ("all-parts", 1): {1: Fraction(-1, 2)},
    ("all-parts", 2): {1: Fraction(0), 2: Fraction(-1, 2)},
    ("all-parts", 3): {1: Fraction(1, 6), 2: Fraction(-1, 6), 3: Fraction(-1, 2)},
    ("odd", 3): {1: Fraction(1, 3), 2: Fraction(-1, 3), 3: Fraction(0)},
    ("odd", 4): {1: Fraction(1, 4), 2: Fraction(0), 3: Fraction(-1, 4), 4: Fraction(0)},
    ("odd", 6): {1: Fraction(1, 3), 2: Fraction(0), 3: Fraction(0),
                 4: Fraction(0), 5: Fraction(-1, 3), 6: Fraction(0)},
    ("r13", 1): {1: Fraction(1, 6)},
    ("r13", 2): {1: Fraction(1, 3), 2: Fraction(-1, 6)},
    ("r13", 6): {1: Fraction(1, 3), 2: Fraction(0), 3: Fraction(0),
                 4: Fraction(-1, 6), 5: Fraction(0), 6: Fraction(0)},
}
SEQS = {"all-parts": ALLP, "odd": ODD, "r13": R13}


def test_dirichlet_at_zero():
    d = dirichlet_at_zero(ALLP, 1, 1)
    assert d.is_rational() and d.rational_value() == Fraction(-1, 2)
    d = dirichlet_at_zero(ODD, 1, 4)
    with mp.workprec(120):
        assert abs(d.to_mpc(120) - mp.mpc(0, "0.5")) < mp.mpf("1e-30")
    assert dirichlet_at_zero(ODD, 4, 4).is_zero()
    # all-parts general column: -(1/k) sum_r r e_k(tr)
    d = dirichlet_at_zero(ALLP, 1, 3)
    with mp.workprec(120):
        want = -(mp.exp(2j * mp.pi / 3) + 2 * mp.exp(4j * mp.pi / 3) + 3) / 3
        assert abs(d.to_mpc(120) - want) < mp.mpf("1e-30")
    with pytest.raises(UnsupportedFamily):
        dirichlet_at_zero(ExponentSequence.quadratic_units(5), 1, 1)


def test_residue_at_one():
    assert residue_at_one(ALLP, 1, 3).is_zero()
    r = residue_at_one(ALLP, 3, 3)
    assert r.is_rational() and r.rational_value() == 1
    # k | p t criterion: for p=3, k=6, t=2 the residue is e_6(2)/3
    r = residue_at_one(R13, 2, 6)
    with mp.workprec(120):
        assert abs(r.to_mpc(120) - mp.exp(2j * mp.pi / 6 * 2) / 3) < mp.mpf("1e-30")
    assert residue_at_one(ODD, 1, 3).is_zero()


def test_fourier_tables_exact():
    for (name, k), table in B_TABLES.items():
        fd = fourier_data(SEQS[name], k)
        for j, want in table.items():
            b = fd.b_value(j)
            if want == 0:
                assert b.is_zero(), (name, k, j)
            else:
                assert b.is_rational() and b.rational_value() == want, (name, k, j)


def test_fourier_c_values():
    for k in (1, 2, 3, 5):
        fd = fourier_data(ALLP, k)
        for j in range(1, k + 1):
            assert fd.c_value(j) == Fraction(1, k)
    # residue families: c_k(j) = (k,p)/(kp) on j = 1 mod (k,p), else 0
    for seq, p in ((ODD, 2), (R13, 3)):
        for k in (1, 2, 3, 4, 6):
            fd = fourier_data(seq, k)
            from math import gcd

            g = gcd(k, p)
            for j in range(1, k + 1):
                want = Fraction(g, k * p) if j % g == 1 % g else Fraction(0)
                assert fd.c_value(j) == want, (p, k, j)


def test_phase_function_closed_forms():
    pts = uniform_disk_points(40, seed=3, radius=0.97)
    with mp.workprec(160):
        for z in pts:
            zc = mp.mpc(z)
            for k in (1, 2, 3):
                got = phase_function(ALLP, 1, k).re_L(zc)
                assert abs(got - root_dilog(k, zc)) < mp.mpf("1e-30")
            # odd parts, (1,4): L^2 = Li2(-z^2)/8
            got = phase_function(ODD, 1, 4).L_squared(zc)
            assert abs(got - dilog(-zc * zc) / 8) < mp.mpf("1e-30")
            # residue 1 mod 3, (1,2): gcd(2,3)=1 so L^2 = Li2(z^2)/12
            got = phase_function(R13, 1, 2).L_squared(zc)
            assert abs(got - dilog(zc * zc) / 12) < mp.mpf("1e-30")
            # quadratic units p=5, (2,5): two-term combination
            q5 = ExponentSequence.quadratic_units(5)
            got = phase_function(q5, 2, 5).L_squared(zc)
            e5 = lambda j: mp.exp(2j * mp.pi * mp.mpf(j) / 5)
            want = (dilog(e5(2) * zc) + dilog(e5(-2) * zc)) / 5
            assert abs(got - want) < mp.mpf("1e-30")


def test_re_L_examples():
    with mp.workprec(160):
        pf11 = phase_function(ALLP, 1, 1)
        for r in ("0", "-0.3", "-0.99"):
            assert pf11.re_L(mp.mpf(r)) == 0
        assert abs(phase_function(ALLP, 1, 3).re_L(mp.mpf(1) - mp.mpf("1e-30"))
                   - mp.pi / (3 * mp.sqrt(6))) < mp.mpf("1e-14")
        # odd-parts reflection: Re L_{1,2}(z) = Re L_{1,1}(-z)
        pf1 = phase_function(ODD, 1, 1)
        pf2 = phase_function(ODD, 1, 2)
        for z in uniform_disk_points(25, seed=5, radius=0.95):
            zc = mp.mpc(z)
            assert abs(pf2.re_L(zc) - pf1.re_L(-zc)) < mp.mpf("1e-30")
    with pytest.raises(GcdError):
        phase_function(ALLP, 2, 4)


def test_candidates():
    assert candidates(ALLP) == ((1, 1), (1, 2), (1, 3))
    assert candidates(ODD) == ((1, 1), (1, 2), (1, 4))
    assert candidates(R13) == ((1, 1), (1, 3), (2, 3))
    assert candidates(ExponentSequence.residue(1, 5)) == (
        (1, 1), (1, 5), (2, 5), (3, 5), (4, 5))
    assert candidates(ExponentSequence.quadratic_units(5)) == ((1, 1), (2, 5))
    with pytest.raises(UnsupportedFamily):
        candidates(ExponentSequence.explicit([1, 2]))


def test_classify():
    assert classify(ALLP, mp.mpf("0.5")).winner == (1, 1)
    assert classify(ALLP, mp.mpf("-0.9")).winner == (1, 2)
    assert classify(ODD, mp.mpc(0, "0.99")).winner == (1, 4)
    z = mp.mpf("0.5") * mp.exp(mp.mpc(0, mp.pi / 6))
    assert classify(R13, z).winner == (1, 1)
    v = classify(ALLP, mp.mpf("0.5"))
    assert v.margin > 0 and not v.tie
    with pytest.raises(DomainError):
        classify(ALLP, 0)
    with pytest.raises(DomainError):
        classify(ALLP, mp.mpc(0, 1))


def test_classify_symmetries():
    pts = uniform_disk_points(30, seed=9, radius=0.93)
    for z in pts:
        zc = mp.mpc(z)
        if abs(zc) < 0.05:
            continue
        for seq in (ALLP, ODD):
            assert classify(seq, zc).winner == classify(seq, mp.conj(zc)).winner
    # rotation by e_3(1) cycles the three wedges of the residue family
    cycle = {(1, 1): (2, 3), (2, 3): (1, 3), (1, 3): (1, 1)}
    w = mp.exp(2j * mp.pi / 3)
    for z in pts[:12]:
        zc = mp.mpc(z)
        if abs(zc) < 0.05:
            continue
        v0 = classify(R13, zc)
        v1 = classify(R13, w * zc)
        if v0.tie or v1.tie:
            continue
        assert v1.winner == cycle[v0.winner], zc


def test_omega_closed_forms():
    pts = uniform_disk_points(40, seed=7, radius=0.99)
    with mp.workprec(160):
        for n in (4, 9):
            for z in pts:
                zc = mp.mpc(z)
                assert abs(omega(ALLP, 1, 1, n, zc) - mp.sqrt(1 - zc)) < mp.mpf("1e-30")
                assert abs(omega(ALLP, 1, 2, n, zc)
                           - (-1) ** n * mp.sqrt(1 - zc)) < mp.mpf("1e-30")
                want = mp.mpc(1j) ** (-n) * ((1 + 1j * zc) / (1 - 1j * zc)) ** mp.mpf("0.25")
                assert abs(omega(ODD, 1, 4, n, zc) - want) < mp.mpf("1e-30")
        # the two coprime prefactors at k=3 never cancel
        for z in pts:
            zc = mp.mpc(z)
            s = abs(omega(ALLP, 1, 3, 7, zc) + omega(ALLP, 2, 3, 7, zc))
            assert s > mp.mpf("0.1")
        zc = mp.mpc("0.3", "0.4")
        total = omega(ALLP, 1, 3, 7, zc) + omega(ALLP, 2, 3, 7, zc)
        assert abs(Omega(ALLP, 3, 7, zc) - total) < mp.mpf("1e-30")
    with pytest.raises(GcdError):
        omega(ALLP, 2, 4, 5, mp.mpc("0.1"))
    with pytest.raises(DomainError):
        omega(ALLP, 1, 2, 5, mp.mpc(1.1, 0))


def test_asymptotic_estimate_accuracy():
    polys = generate(ALLP, 100)
    z = mp.mpf("0.5")
    v = classify(ALLP, z)
    errs = {}
    for n in (50, 100):
        exact = evaluate(polys[n], z)
        est = asymptotic_estimate(ALLP, v.winner, n, z)
        errs[n] = abs(mp.log(abs(exact)) - mp.log(abs(est))) / mp.sqrt(n)
    assert mp.mpf("0.003") < errs[50] < mp.mpf("0.005")
    assert mp.mpf("0.0015") < errs[100] < mp.mpf("0.0025")
    assert errs[100] < errs[50]


def test_asymptotic_estimate_rejects_ties():
    # the positive imaginary axis is the exact (1,1)/(1,4) boundary for
    # odd parts at radii below beta
    with pytest.raises(DomainError):
        asymptotic_estimate(ODD, (1, 1), 40, mp.mpc(0, "0.5"),
                            policy=None)


def test_phase_map_writers(tmp_path):
    pts = [mp.mpc("0.4", "0.1"), mp.mpc("-0.5", "0.2")]
    verdicts = [classify(ALLP, z) for z in pts]
    cpath = tmp_path / "m.csv"
    jpath = tmp_path / "m.json"
    write_phase_map_csv(cpath, pts, verdicts)
    from attractorlab.precision import DEFAULT_POLICY

    write_phase_map_json(jpath, pts, verdicts, DEFAULT_POLICY, "all-parts",
                         resolution=2, boundary_tol=1e-9)
    head = cpath.read_text().splitlines()[0]
    assert head == "re,im,winner_k,winner_h,margin"
    import json

    payload = json.loads(jpath.read_text())
    assert payload["metadata"]["family"] == "all-parts"
    assert len(payload["points"]) == 2
