"""Exact partition polynomials: generation, stabilization, evaluation."""

from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import pytest

from attractorlab import (
    DomainError,
    ExponentSequence,
    ResourceError,
    UnsupportedFamily,
    evaluate,
    generate,
    generate_single,
    tail_series,
)
from attractorlab.partitions import (
    evaluate_with_scale,
    rotation_check,
    write_coefficients_csv,
    write_coefficients_json,
)

P_100 = 190569292
P_1000 = 24061467864032622473692149727991


def brute_counts(parts_of, n):
    """Partitions of n into exactly k parts, by nonincreasing-part recursion."""

    @lru_cache(maxsize=None)
    def count(rem, k, mmax):
        if k == 0:
            return 1 if rem == 0 else 0
        total = 0
        for m in range(1, min(mmax, rem - k + 1) + 1):
            if parts_of(m):
                total += count(rem - m, k - 1, m)
        return total

    return [count(n, k, n) for k in range(n + 1)]


def test_exponent_sequences():
    allp = ExponentSequence.all_parts()
    odd = ExponentSequence.odd_parts()
    r13 = ExponentSequence.residue(1, 3)
    q5 = ExponentSequence.quadratic_units(5)
    ex = ExponentSequence.explicit([2, 3, 2])
    assert [allp.exponent(m) for m in range(1, 7)] == [1] * 6
    assert [odd.exponent(m) for m in range(1, 7)] == [1, 0, 1, 0, 1, 0]
    assert [r13.exponent(m) for m in range(1, 8)] == [1, 0, 0, 1, 0, 0, 1]
    assert [q5.exponent(m) for m in range(1, 12)] == [1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1]
    assert ex.parts == (2, 3)
    with pytest.raises(DomainError):
        ExponentSequence.residue(2, 4)
    with pytest.raises(DomainError):
        ExponentSequence.residue(1, 1)
    with pytest.raises(DomainError):
        ExponentSequence.explicit([0, 3])
    with pytest.raises(DomainError):
        allp.exponent(0)


def test_generate_small_exact():
    allp = ExponentSequence.all_parts()
    polys = generate(allp, 6)
    assert polys[0].coeffs == (1,)
    assert polys[1].coeffs == (0, 1)
    assert polys[4].coeffs == (0, 1, 2, 1, 1)
    assert polys[6].coeffs == (0, 1, 3, 3, 2, 1, 1)
    assert generate_single(allp, 6).coeffs == polys[6].coeffs
    assert polys[6].degree == 6
    assert polys[6].support == (1, 2, 3, 4, 5, 6)


def test_generate_matches_brute_force():
    for seq in (
        ExponentSequence.all_parts(),
        ExponentSequence.odd_parts(),
        ExponentSequence.residue(1, 3),
        ExponentSequence.explicit([2, 3, 7]),
    ):
        polys = generate(seq, 18)
        for n in range(19):
            want = brute_counts(lambda m, s=seq: s.exponent(m), n)
            got = list(polys[n].coeffs) + [0] * (n + 1 - len(polys[n].coeffs))
            assert got == want, (seq.label(), n)


def test_partition_numbers():
    allp = ExponentSequence.all_parts()
    assert sum(generate_single(allp, 100).coeffs) == P_100
    assert sum(generate_single(allp, 1000).coeffs) == P_1000


def test_tail_stabilization():
    # [z^(n-k)] F_n equals h_k once 2k < n
    for seq in (ExponentSequence.all_parts(), ExponentSequence.odd_parts()):
        polys = generate(seq, 120)
        h = tail_series(seq, 59)
        for n in range(1, 121):
            coeffs = polys[n].coeffs
            for k in range((n - 1) // 2 + 1):
                assert coeffs[n - k] == h[k], (seq.label(), n, k)


def test_generate_errors():
    allp = ExponentSequence.all_parts()
    with pytest.raises(DomainError):
        generate(allp, -1)
    with pytest.raises(ResourceError):
        generate(allp, 9000)
    with pytest.raises(DomainError):
        tail_series(allp, -2)


def test_evaluate_exactness():
    allp = ExponentSequence.all_parts()
    F = generate_single(allp, 30)
    z = Fraction(3, 7)
    exact = sum(c * z**k for k, c in enumerate(F.coeffs))
    from attractorlab import PrecisionPolicy

    pol = PrecisionPolicy(bits=200, tol=1e-40)
    with mp.workprec(200):
        got = evaluate(F, mp.mpf(3) / 7, pol)
        assert abs(got - mp.mpf(exact.numerator) / exact.denominator) < mp.mpf("1e-45")
        val, scale = evaluate_with_scale(F, mp.mpc("-0.3", "0.55"))
        assert scale >= abs(val)


def test_rotation_check():
    r13 = ExponentSequence.residue(1, 3)
    for n in (5, 9, 14):
        assert rotation_check(r13, generate_single(r13, n))
    with pytest.raises(UnsupportedFamily):
        rotation_check(ExponentSequence.all_parts(), generate_single(r13, 5))


def test_coefficient_writers(tmp_path):
    allp = ExponentSequence.all_parts()
    polys = generate(allp, 5)
    csv_path = tmp_path / "c.csv"
    json_path = tmp_path / "c.json"
    write_coefficients_csv(csv_path, polys)
    write_coefficients_json(json_path, polys, family_label=allp.label())
    text = csv_path.read_text()
    assert text.splitlines()[0] == "n,k,coefficient"
    assert "5,2,2" in text
    import json

    payload = json.loads(json_path.read_text())
    assert payload["family"] == "all-parts"
    assert payload["polynomials"][4]["coefficients"] == [0, 1, 2, 1, 1]
