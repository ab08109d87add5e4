from fractions import Fraction

import pytest
from mpmath import mp

from skewpuiseux import (Alpha, PuiseuxSeries, SkewPoly, parse_poly,
                         pull_unit_through_linear, puiseux_ring,
                         normalize_scaled, scale_iso, scaling_exponent,
                         shift_iso, trace_apply, trace_solve)
from skewpuiseux.errors import Obstruction, PrecisionExhausted

from conftest import rand_series, rng
from props import (check_beta_law, check_dif_identity, check_iso_homomorphisms,
                   check_normalize_post, check_trace_roundtrip)

PS = PuiseuxSeries


def test_shift_square_example():
    R = puiseux_ring(2)
    out = shift_iso(SkewPoly.t_pow(R, 2), PS.one())
    # target ring is delta_(-1); the image is (t-1)^2 = t^2 - 2t + 1 there
    assert (out.coeff(1) + PS.constant(2)).max_abs() == 0
    assert (out.coeff(0) - PS.one()).max_abs() == 0
    assert not out.ring.a.is_zero


def test_shift_by_zero_is_identity():
    R = puiseux_ring(Fraction(3, 2))
    rnd = rng(61)
    f = SkewPoly(R, [rand_series(rnd, 1, 0, 2), rand_series(rnd, 1, 0, 2), PS.one()])
    assert shift_iso(f, PS.zero()).deviation(f) == 0


def test_dif_identity():
    assert check_dif_identity(60) == 60


def test_scale_by_zero_is_identity():
    R = puiseux_ring(2)
    rnd = rng(62)
    f = SkewPoly(R, [rand_series(rnd, 1, 0, 2), PS.one()])
    assert scale_iso(f, 0) is f


def test_scale_square_unit():
    # (x^(-r) t)^2 = alpha^(-r) x^(-2r) t^2 in the underived ring
    R = puiseux_ring(2)
    r = Fraction(1, 2)
    img = scale_iso(SkewPoly.t_pow(R, 2), r)
    lead = img.coeff(2)
    want = PS.x_pow(-1).scale(mp.power(2, mp.mpf("-0.5")))
    assert (lead - want).max_abs() < mp.mpf(2) ** -120
    assert img.coeff(1).is_zero and img.coeff(0).is_zero


def test_scale_ord_bookkeeping():
    rnd = rng(63)
    R = puiseux_ring(Fraction(3, 2))
    for _ in range(40):
        f = SkewPoly(R, [rand_series(rnd, 1, -1, 3) for _ in range(3)] + [PS.one()])
        r = Fraction(rnd.choice([1, -1, 2]), rnd.choice([1, 2, 3]))
        img = scale_iso(f, r)
        for i, c in enumerate(f.coeffs):
            if not c.is_zero:
                assert img.coeff(i).ord() == c.ord() - r * i


def test_beta_law_certified():
    assert check_beta_law() > 0


def test_trace_solve_examples():
    b = trace_solve(PS.x_pow(1), 2, Alpha(4))
    assert (b - PS.from_terms([(1, Fraction(1, 5))])).max_abs() < mp.mpf(2) ** -120
    back = trace_apply(b, 2, Alpha(4))
    assert (back - PS.x_pow(1)).max_abs() < mp.mpf(2) ** -120

    c = trace_solve(PS.constant(6), 2, Alpha(2))
    assert (c - PS.constant(3)).max_abs() < mp.mpf(2) ** -120  # beta_0 = 1

    g = PS.from_terms([(Fraction(1, 2), 2), (1, -3)])
    assert trace_solve(g, 1, Alpha(2)) == g


def test_trace_solve_obstruction_for_complex_alpha():
    # 1 + i^2 = 0 blocks the trace preimage at exponent 2
    a = Alpha(mp.mpc(0, 1), allow_complex=True)
    g = PS.x_pow(2)
    with pytest.raises(Obstruction) as exc:
        trace_solve(g, 2, a)
    assert exc.value.q == 2


def test_trace_roundtrip_random():
    assert check_trace_roundtrip(60) == 60


def test_zero_coefficient_after_shift():
    rnd = rng(64)
    for _ in range(40):
        R = puiseux_ring(rnd.choice([Fraction(2), Fraction(3, 2)]))
        d = rnd.randint(2, 4)
        coeffs = [rand_series(rnd, 1, 0, 3) for _ in range(d)] + [PS.one()]
        coeffs[d - 1] = rand_series(rnd, 1, 0, 3, 3)
        f = SkewPoly(R, coeffs, trim=False)
        b = trace_solve(f.coeffs[d - 1], d, R.alpha)
        out = shift_iso(f, b)
        assert out.coeff(d - 1).max_abs() <= mp.mpf(2) ** -60 * max(1, f.max_abs())


def test_iso_homomorphisms():
    assert check_iso_homomorphisms(60) == 60


def test_scaling_exponent_and_normalize():
    R = puiseux_ring(2)
    f = SkewPoly(R, [PS.x_pow(-2), PS.zero(), PS.one()], trim=False)
    r = scaling_exponent(f)
    assert r == 1
    F1, recs = normalize_scaled(f, r)
    ords = [F1.ring.ord_k(c) for c in F1.coeffs[:-1]]
    assert ords[0] == 0 and F1.coeffs[1].is_zero
    assert F1.is_monic
    assert [rec.kind for rec in recs] == ["scale", "unit_normalize"]


def test_normalize_identity_when_integral():
    R = puiseux_ring(2)
    f = parse_poly("t^2 - 2*t + 1", R)
    assert scaling_exponent(f) == 0
    F1, recs = normalize_scaled(f, 0)
    assert F1 is f and recs == []


def test_scaling_exponent_hidden_raises():
    R = puiseux_ring(2)
    hidden = PS.zero(1, -4)  # O(x^-4): nothing known yet
    f = SkewPoly(R, [hidden, PS.one()], trim=False)
    with pytest.raises(PrecisionExhausted):
        scaling_exponent(f)


def test_normalize_post_random():
    assert check_normalize_post(60) == 60


def test_pull_unit_trivial():
    R = puiseux_ring(2)
    c = PS.x_pow(1)
    c2, u2 = pull_unit_through_linear(PS.one(), c, R)
    assert (c2 - c).max_abs() == 0
    assert (u2 - PS.one()).max_abs() == 0


def test_pull_unit_constant_delta_zero():
    R = puiseux_ring(2)
    u = PS.constant(mp.mpc("1.5", "0.25"))
    c = PS.from_terms([(0, 1), (1, -2)])
    c2, _ = pull_unit_through_linear(u, c, R)
    assert (c2 - c).max_abs() < mp.mpf(2) ** -110  # constants are sigma-fixed


def test_pull_unit_remultiplication():
    rnd = rng(65)
    tol = mp.mpf(2) ** -100
    for _ in range(60):
        R = puiseux_ring(rnd.choice([Fraction(2), Fraction(3, 2)]), 1,
                         rand_series(rnd, 1, 0, 2, 2) if rnd.random() < 0.5 else None)
        u = PS(1, {0: rand_coeff_nonzero(rnd), 1: rand_coeff_nonzero(rnd)}).truncate(10)
        c = rand_series(rnd, 1, 0, 3, 3)
        c2, u2 = pull_unit_through_linear(u, c, R)
        lhs = SkewPoly.constant(R, u) * SkewPoly.t_minus(R, c)
        rhs = SkewPoly.t_minus(R, c2) * SkewPoly.constant(R, u2)
        assert lhs.deviation(rhs) <= tol * max(1, u.max_abs() * (1 + c.max_abs()))


def rand_coeff_nonzero(rnd):
    while True:
        v = mp.mpc(rnd.uniform(-2, 2), rnd.uniform(-2, 2))
        if abs(v) > mp.mpf("0.25"):
            return v
