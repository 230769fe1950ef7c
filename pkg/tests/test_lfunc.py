import json
import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bslab.lfunc import (
    QQ,
    Field,
    F_and_Z,
    L1_exact,
    L_truncated,
    TruncatedL,
    artin_product_coefficients,
    chebyshev_G,
    chebyshev_trace_csv,
    dedekind_coefficients,
    dirichlet_convolution,
    log_coefficients_from_dirichlet,
    max_character_partial_sum,
    mellin_residual,
    polya_vinogradov,
    prime_ideal_counts,
    splitting_type,
    von_mangoldt_jumps,
)
from bslab.quad_arith import field_invariants, fundamental_discriminants, is_fundamental, kronecker


def brute_ideal_counts(D, X):
    # a_n = sum_{d | n} chi_D(d), scalar symbols only
    return [0] + [sum(kronecker(D, d) for d in range(1, n + 1) if n % d == 0) for n in range(1, X + 1)]


def gaussian_ideal_counts(X):
    # ideals of Z[i] = nonzero Gaussian integers up to the four units
    counts = [0] * (X + 1)
    r = math.isqrt(X) + 1
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            n = x * x + y * y
            if 0 < n <= X:
                counts[n] += 1
    return [c // 4 for c in counts]


def test_field_descriptor():
    assert Field.parse("Q") == QQ and QQ.kind == "rational" and QQ.degree == 1
    f = Field.parse("-4,8")
    assert f.kind == "biquadratic" and f.characters() == (-4, 8, -8) and str(f) == "-4,8"
    with pytest.raises(ValueError):
        Field((-12,))
    with pytest.raises(ValueError):
        Field((5, 5))


def test_dedekind_examples():
    assert list(dedekind_coefficients(Field((-4,)), 10).coefficients[1:]) == [1, 1, 0, 1, 2, 0, 0, 1, 1, 2]
    assert (dedekind_coefficients(QQ, 50).coefficients[1:] == 1).all()
    assert dedekind_coefficients(Field((-4, 8)), 16)[2] == 1
    with pytest.raises(ValueError):
        dedekind_coefficients(QQ, 10**6 + 1)


def test_quadratic_coefficients_match_gaussian_integers():
    assert list(dedekind_coefficients(Field((-4,)), 400).coefficients) == gaussian_ideal_counts(400)


@pytest.mark.parametrize("D", [-3, -23, 5, 12, -20])
def test_quadratic_coefficients_match_divisor_sums(D):
    assert list(dedekind_coefficients(Field((D,)), 300).coefficients) == brute_ideal_counts(D, 300)


@pytest.mark.parametrize("pair", [(-4, 8), (5, 8), (-3, 5), (-3, -4), (-7, 13), (12, 13), (-11, 17), (-20, 5)])
def test_biquadratic_coefficients_equal_artin_product(pair):
    fld = Field(pair)
    assert np.array_equal(dedekind_coefficients(fld, 10**4).coefficients, artin_product_coefficients(fld, 10**4))


def test_splitting_types_sum_to_degree():
    for fld in (Field((-4,)), Field((5, 8)), Field((-3, -4)), Field((-4, 8))):
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]:
            e, f, g = splitting_type(fld, p)
            assert e * f * g == fld.degree


def test_dirichlet_convolution_small():
    one = np.array([0, 1, 1, 1, 1, 1, 1])
    assert list(dirichlet_convolution(one, one)) == [0, 1, 2, 2, 3, 2, 4]


def test_prime_ideal_counts_quadratic():
    n = prime_ideal_counts(Field((-4,)), 30)
    assert n[2] == 1 and n[4] == 0 and n[5] == 2 and n[3] == 0 and n[9] == 1
    for q, c in prime_ideal_counts(Field((-23,)), 200).items():
        assert c in (0, 1, 2)


def test_chebyshev_examples():
    assert chebyshev_G(QQ, 1.5).value == 0
    with mpmath.workdps(30):
        psi10 = 3 * mpmath.log(2) + 2 * mpmath.log(3) + mpmath.log(5) + mpmath.log(7)
        assert abs(chebyshev_G(QQ, 10).value - psi10) < mpmath.mpf("1e-25")
        assert abs(float(psi10) - 7.83201) < 1e-5
        assert abs(chebyshev_G(Field((-4,)), 5).value - (2 * mpmath.log(2) + 2 * mpmath.log(5))) < mpmath.mpf("1e-25")
    with pytest.raises(ValueError):
        chebyshev_G(QQ, 10**8)


def test_chebyshev_trace_csv():
    lines = chebyshev_trace_csv(QQ, 5).splitlines()
    assert lines[0] == "x_jump,G_value"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["2", "3", "4", "5"]


@pytest.mark.parametrize("fld", [QQ, Field((-4,)), Field((5,)), Field((-4, 8)), Field((5, 8))])
def test_lambda_convolution_reproduces_G(fld):
    # sum_{n<=X} Lambda_K(n) from the ideal counts equals G(X) from the splitting data
    X = 3000
    a = dedekind_coefficients(fld, X).coefficients
    from_counts = log_coefficients_from_dirichlet(a)
    from_split = {}
    for _, p, c in von_mangoldt_jumps(fld, X):
        from_split[p] = from_split.get(p, 0) + c
    assert {p: c for p, c in from_counts.items() if c} == from_split


def test_L1_exact_examples():
    with mpmath.workdps(30):
        assert abs(L1_exact(-4) - mpmath.pi / 4) < mpmath.mpf("1e-28")
        assert abs(L1_exact(-3) - mpmath.pi / (3 * mpmath.sqrt(3))) < mpmath.mpf("1e-28")
        five = L1_exact(5)
        assert abs(five - 2 * mpmath.log((1 + mpmath.sqrt(5)) / 2) / mpmath.sqrt(5)) < mpmath.mpf("1e-28")
        assert abs(float(five) - 0.4304089) < 1e-7


@pytest.mark.parametrize("D", [-7, -23, 8, 13, 229, -4003, 1996])
def test_L1_exact_matches_digamma_formula(D):
    # independent oracle: L(1, chi) = -(1/q) sum_a chi(a) digamma(a/q)
    q = abs(D)
    with mpmath.workdps(40):
        ref = -mpmath.fsum(kronecker(D, a) * mpmath.digamma(mpmath.mpf(a) / q) for a in range(1, q)) / q
        assert abs(L1_exact(D) - ref) < mpmath.mpf("1e-25")


def test_L_truncated_examples():
    v, b = L_truncated(-4, 2, 10**4)
    with mpmath.workdps(20):
        assert abs(v - float(mpmath.catalan)) <= b
    assert abs(v - 0.915966) < 1e-6
    v, b = L_truncated(-4, 1, 10**6)
    assert abs(v - math.pi / 4) <= b
    bounds = [L_truncated(-23, 0.8, X)[1] for X in (10**3, 2 * 10**3, 4 * 10**3)]
    assert bounds[0] > bounds[1] > bounds[2]
    with pytest.raises(ValueError):
        L_truncated(-4, 0.5, 100)


def test_truncated_many_matches_single():
    L = TruncatedL(-163, 5000)
    grid = [0.6, 0.75, 0.9, 0.99]
    assert L.many(grid) == [L(s) for s in grid]


def test_partial_sums_below_polya_vinogradov():
    for D in fundamental_discriminants("imaginary", 3, 3000)[::7] + fundamental_discriminants("real", 5, 3000)[::7]:
        assert max_character_partial_sum(D) <= polya_vinogradov(D) + 1


def test_F_rational_at_two():
    z = F_and_Z(QQ, 2, 10**5)
    with mpmath.workdps(30):
        assert abs(z.F - mpmath.zeta(2)) <= z.F_error + mpmath.mpf("1e-20")
        # Z = F'/F = zeta'/zeta + 1/(s-1)
        ref = mpmath.zeta(2, derivative=1) / mpmath.zeta(2) + 1
        assert abs(z.Z - ref) <= 2 * z.Z_tail


def test_F_gaussian_factorization():
    z = F_and_Z(Field((-4,)), 2, 10**5)
    with mpmath.workdps(30):
        ref = mpmath.zeta(2) * mpmath.catalan / (mpmath.pi / 4)
        assert abs(z.F - ref) <= z.F_error


def test_F_near_pole():
    z = F_and_Z(QQ, 1.01, 10**5)
    with mpmath.workdps(30):
        assert abs(z.F - mpmath.mpf("0.01") * mpmath.zeta(mpmath.mpf("1.01"))) <= z.F_error + mpmath.mpf("1e-15")
    assert abs(z.F - 1) < 0.01


def test_F_rejects_bad_input():
    with pytest.raises(ValueError):
        F_and_Z(QQ, 1.001, 1000)
    with pytest.raises(ValueError):
        F_and_Z(Field((-4, 8)), 2, 1000)


def test_mellin_examples():
    r4 = mellin_residual(QQ, 2, 10**4)
    assert r4.residual < 0.05
    r5 = mellin_residual(Field((-3,)), 2, 10**5)
    assert r5.residual < r5.tail_estimate
    obj = json.loads(r5.to_json())
    assert set(obj) >= {"field", "s", "X", "residual", "tail_estimate"}
    with pytest.raises(ValueError):
        mellin_residual(QQ, 2, 100)
    with pytest.raises(ValueError):
        mellin_residual(QQ, 3, 10**4)


def test_mellin_opposite_sign_fails():
    r = mellin_residual(QQ, 2, 10**4)
    assert r.flipped_sign_residual > 1


@pytest.mark.parametrize("fld", [QQ, Field((-4,)), Field((5, 8))])
def test_mellin_residual_decreases(fld):
    res = [mellin_residual(fld, 1.5, X).residual for X in (1000, 4000, 16000, 64000)]
    assert all(b < a for a, b in zip(res, res[1:]))


# --- properties --------------------------------------------------------------

fund = st.integers(3, 3000).flatmap(lambda d: st.sampled_from([d, -d])).filter(is_fundamental)


@settings(max_examples=20, deadline=None)
@given(fund)
def test_coefficients_multiplicative(D):
    a = dedekind_coefficients(Field((D,)), 2000).coefficients
    assert a[1] == 1
    rng = random.Random(D)
    for _ in range(200):
        m, n = rng.randint(1, 44), rng.randint(1, 44)
        if math.gcd(m, n) == 1:
            assert a[m * n] == a[m] * a[n]


@settings(max_examples=20, deadline=None)
@given(fund)
def test_L1_positive_and_matches_residue(D):
    with mpmath.workdps(30):
        val = L1_exact(D)
        assert val > 0
        assert abs(field_invariants(D).rho - val) < mpmath.mpf("1e-10")


@settings(max_examples=20, deadline=None)
@given(st.floats(2.0, 500.0), st.floats(0.0, 100.0))
def test_chebyshev_nondecreasing(x, dx):
    assert chebyshev_G(QQ, x + dx).value >= chebyshev_G(QQ, x).value


@settings(max_examples=15, deadline=None)
@given(fund, fund)
def test_biquadratic_factorization_property(D1, D2):
    if D1 == D2:
        return
    fld = Field((D1, D2))
    assert np.array_equal(dedekind_coefficients(fld, 3000).coefficients, artin_product_coefficients(fld, 3000))
