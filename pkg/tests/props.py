"""Randomized property checks shared by the module suites and the
acceptance gate (which runs them at full case counts)."""

from fractions import Fraction

from mpmath import mp

from skewpuiseux import (ConjSeries, ConjSeriesRing, PuiseuxSeries, SkewPoly,
                         hensel_lift, normalize_scaled, puiseux_ring,
                         scale_back_monic, scale_iso, scaled_power_unit,
                         scaling_exponent, shift_iso, trace_apply, trace_solve,
                         twist_precheck)
from skewpuiseux.errors import TwistCoprimeFailure

from conftest import rand_alpha, rand_coeff, rand_poly, rand_series, rng

LAW_TOL_BITS = 128 - 16  # 2^(-P+16) coefficient error budget


def _law_tol():
    return mp.mpf(2) ** -LAW_TOL_BITS


def rand_conj(rnd, hi=3, nterms=3) -> ConjSeries:
    ks = rnd.sample(range(hi + 1), min(nterms, hi + 1))
    return ConjSeries({k: rand_coeff(rnd) for k in ks})


def rand_conj_poly(ring, rnd, deg=2) -> SkewPoly:
    coeffs = [rand_conj(rnd) for _ in range(deg)]
    coeffs.append(ring.one())
    return SkewPoly(ring, coeffs)


def check_ring_laws(cases: int, seed: int = 101) -> int:
    """Associativity and distributivity of poly_mul on both instances."""
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    CR = ConjSeriesRing()
    while done < cases:
        if done % 2 == 0:
            ring = puiseux_ring(rand_alpha(rnd), 1,
                                rand_series(rnd, 1, 0, 2, 2) if rnd.random() < 0.4 else None)
            f, g, h = (rand_poly(ring, rnd, rnd.randint(1, 3)) for _ in range(3))
        else:
            f, g, h = (rand_conj_poly(CR, rnd, rnd.randint(1, 3)) for _ in range(3))
        scale = max(1, f.max_abs() * g.max_abs() * h.max_abs())
        assert ((f * g) * h).deviation(f * (g * h)) <= tol * scale
        assert (f * (g + h)).deviation(f * g + f * h) <= tol * scale
        assert ((f + g) * h).deviation(f * h + g * h) <= tol * scale
        done += 1
    return done


def check_division_identity(cases: int, seed: int = 202) -> int:
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < cases:
        ring = puiseux_ring(rand_alpha(rnd), 1,
                            rand_series(rnd, 1, 0, 2, 2) if rnd.random() < 0.3 else None)
        f = rand_poly(ring, rnd, rnd.randint(1, 4))
        p = rand_poly(ring, rnd, rnd.randint(1, 2))
        q, r = f.left_divmod(p)
        assert r.degree < p.degree
        scale = max(1, f.max_abs(), q.max_abs() * p.max_abs())
        assert (q * p + r).deviation(f) <= tol * scale
        done += 1
    return done


def check_evaluate_paths(cases: int, seed: int = 303) -> int:
    """Remainder-based substitution vs the delta = 0 closed form; for
    delta != 0 the division identity at t - a is re-multiplied instead."""
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < cases:
        delta_case = done % 2 == 1
        ring = puiseux_ring(rand_alpha(rnd), 1,
                            rand_series(rnd, 1, 0, 2, 2) if delta_case else None)
        f = rand_poly(ring, rnd, rnd.randint(1, 3))
        a = rand_series(rnd, 1, 0, 3, 2)
        val = f.evaluate(a)
        scale = max(1, f.max_abs() * (1 + a.max_abs()) ** max(1, f.degree))
        if not delta_case:
            assert (val - f.evaluate_closed(a)).max_abs() <= tol * scale
        q, r = f.left_divmod(SkewPoly.t_minus(ring, a))
        assert r.degree <= 0
        assert (val - r.coeff(0)).max_abs() <= tol * scale
        assert (q * SkewPoly.t_minus(ring, a) + r).deviation(f) <= tol * scale
        done += 1
    return done


def check_leibniz(cases: int, seed: int = 404) -> int:
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < cases:
        from skewpuiseux import SkewContext
        ctx = SkewContext(rand_alpha(rnd), 1, rand_series(rnd, 1, 0, 2, 2))
        f = rand_series(rnd, 1, 0, 3, 3)
        g = rand_series(rnd, 1, 0, 3, 3)
        lhs = ctx.delta(f * g)
        rhs = ctx.sigma(f) * ctx.delta(g) + ctx.delta(f) * g
        scale = max(1, f.max_abs() * g.max_abs() * (1 + ctx.a.max_abs()))
        assert (lhs - rhs).max_abs() <= tol * scale
        done += 1
    return done


def check_phi_identities(cases: int, seed: int = 505) -> int:
    """phi(f)*x = x*f and x^n f = phi^n(f) x^n for n <= 4, both instances."""
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    CR = ConjSeriesRing()
    while done < cases:
        if done % 2 == 0:
            ring = puiseux_ring(rand_alpha(rnd), 1,
                                rand_series(rnd, 1, 0, 2, 2) if rnd.random() < 0.5 else None)
            f = rand_poly(ring, rnd, rnd.randint(1, 3))
        else:
            ring = CR
            f = rand_conj_poly(CR, rnd, rnd.randint(1, 3))
        x1 = SkewPoly.constant(ring, ring.uniformizer_pow(1))
        scale = max(1, f.max_abs())
        assert (f.conj_by_x() * x1).deviation(f.x_shift(1)) <= tol * scale
        n = 1 + done % 4
        xn = SkewPoly.constant(ring, ring.uniformizer_pow(n))
        assert (f.conj_by_x(n) * xn).deviation(f.x_shift(n)) <= 4 * tol * scale
        # phi is a ring homomorphism
        g = (rand_poly(ring, rnd, 1) if done % 2 == 0 else rand_conj_poly(CR, rnd, 1))
        lhs = (f * g).conj_by_x()
        rhs = f.conj_by_x() * g.conj_by_x()
        assert lhs.deviation(rhs) <= 4 * tol * max(1, f.max_abs() * g.max_abs())
        done += 1
    return done


def check_dif_identity(cases: int, seed: int = 606) -> int:
    """Coefficient of t^(d-1) in (t-b)^d is -(b + b^sigma + ... + b^(sigma^(d-1)))."""
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < cases:
        alpha = rand_alpha(rnd)
        ring = puiseux_ring(alpha, 1,
                            rand_series(rnd, 1, 0, 2, 2) if rnd.random() < 0.4 else None)
        b = rand_series(rnd, 1, 0, 3, 3)
        d = 1 + done % 5
        tb = SkewPoly.t_minus(ring, b)
        power = SkewPoly.one(ring)
        for _ in range(d):
            power = power * tb
        want = -trace_apply(b, d, ring.alpha)
        got = power.coeff(d - 1)
        scale = max(1, (1 + b.max_abs()) ** d)
        assert (got - want).max_abs() <= tol * scale
        done += 1
    return done


def check_trace_roundtrip(cases: int, seed: int = 707) -> int:
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < cases:
        alpha = rand_alpha(rnd)
        L = rnd.choice([1, 2, 3])
        g = rand_series(rnd, L, -2, 4, 4)
        d = rnd.randint(1, 5)
        b = trace_solve(g, d, alpha)
        back = trace_apply(b, d, __import__("skewpuiseux").Alpha(alpha))
        assert (back - g).max_abs() <= tol * max(1, g.max_abs()) * d
        done += 1
    return done


def check_iso_homomorphisms(cases: int, seed: int = 808) -> int:
    """shift_iso and scale_iso are multiplicative and invert correctly."""
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < cases:
        alpha = rand_alpha(rnd)
        a = rand_series(rnd, 1, 0, 2, 2) if rnd.random() < 0.4 else None
        ring = puiseux_ring(alpha, 1, a)
        f = rand_poly(ring, rnd, rnd.randint(1, 2))
        g = rand_poly(ring, rnd, rnd.randint(1, 2))
        scale = max(1, f.max_abs() * g.max_abs())
        if done % 2 == 0:
            b = rand_series(rnd, 1, 0, 2, 2)
            sf, sg, sfg = shift_iso(f, b), shift_iso(g, b), shift_iso(f * g, b)
            bscale = (1 + b.max_abs()) ** (f.degree + g.degree)
            assert sfg.deviation(sf * sg) <= 16 * tol * scale * bscale
            back = shift_iso(sf, -b)
            assert back.deviation(f) <= 16 * tol * max(1, f.max_abs()) * bscale
            # phi(t - c) = (t - b) - c: linear factors shift by the map's b
            c = rand_series(rnd, 1, 0, 2, 2)
            lin = shift_iso(SkewPoly.t_minus(ring, c), b)
            want = SkewPoly.t_minus(lin.ring, c + b)
            assert lin.deviation(want) <= tol * max(1, c.max_abs() + b.max_abs())
        else:
            r = Fraction(rnd.choice([1, -1, 2, 3]), rnd.choice([1, 2, 3]))
            sf, sg, sfg = scale_iso(f, r), scale_iso(g, r), scale_iso(f * g, r)
            assert sfg.deviation(sf * sg) <= 16 * tol * scale * 8
            back = scale_iso(sf, -r)
            assert back.deviation(f) <= 16 * tol * max(1, f.max_abs()) * 8
        done += 1
    return done


def check_beta_law() -> int:
    """Certify (x^(-r) t)^i = beta_i x^(-ri) t^i against brute expansion for
    i <= 4; the verified closed form is beta_i = alpha^(-r i(i-1)/2)."""
    from skewpuiseux import Alpha, alpha_pow
    checked = 0
    mismatched_alt = 0
    for alpha_v in (Fraction(2), Fraction(3, 2)):
        alpha = Alpha(alpha_v)
        for r in (Fraction(1, 2), Fraction(1), Fraction(2, 3), Fraction(-1, 3)):
            ring = puiseux_ring(alpha_v)
            t = SkewPoly.t_pow(ring, 1)
            img = scale_iso(t, r)  # x^(-r) t in the target ring
            power = SkewPoly.one(img.ring)
            for i in range(1, 5):
                power = power * img
                beta = scaled_power_unit(alpha, r, i)
                want_coeff = PuiseuxSeries.x_pow(-r * i).scale(beta).at_ram(img.ring.L)
                want = SkewPoly(img.ring, [img.ring.zero()] * i + [want_coeff])
                assert power.deviation(want) <= mp.mpf(2) ** -100, (alpha_v, r, i)
                alt = alpha_pow(alpha, Fraction(-i * (i + 1), 2))
                from skewpuiseux.scalar import to_mpc
                if abs(to_mpc(alt) - to_mpc(beta)) > mp.mpf(2) ** -100:
                    mismatched_alt += 1
                checked += 1
    assert mismatched_alt > 0  # the i(i+1)/2 variant is not the expansion law
    return checked


def check_normalize_post(cases: int, seed: int = 909) -> int:
    """After r-scaling normalization all coefficient orders are >= 0 with
    equality for at least one index below the degree."""
    rnd = rng(seed)
    done = 0
    while done < cases:
        L = rnd.choice([1, 2])
        ring = puiseux_ring(rand_alpha(rnd), L)
        f = rand_poly(ring, rnd, rnd.randint(2, 4), L=L, lo=-2, hi=3)
        if all(c.is_zero for c in f.coeffs[:-1]):
            continue
        r = scaling_exponent(f)
        F1, _ = normalize_scaled(f, r)
        ords = [F1.ring.ord_k(c) for c in F1.coeffs[:-1]]
        assert all(o >= 0 for o in ords)
        assert min(ords) == 0
        assert F1.is_monic
        done += 1
    return done


def random_liftable(rnd, alpha, d):
    """A monic degree-d polynomial with a known twist-coprime residue split."""
    from skewpuiseux import ResiduePoly
    a_choice = rnd.choice([None, PuiseuxSeries.constant(1),
                           PuiseuxSeries.from_terms([(1, 1)])])
    ring = puiseux_ring(alpha, 1, a_choice)
    m = rnd.randint(1, d - 1)
    for _ in range(64):
        groots = [rand_coeff(rnd) for _ in range(m)]
        hroots = [rand_coeff(rnd) for _ in range(d - m)]
        g = SkewPoly(ring, [ring.from_scalar(c) for c in
                            ResiduePoly.from_roots([(c, 1) for c in groots]).coeffs])
        h = SkewPoly(ring, [ring.from_scalar(c) for c in
                            ResiduePoly.from_roots([(c, 1) for c in hroots]).coeffs])
        try:
            twist_precheck(g, h)
        except TwistCoprimeFailure:
            continue
        pert = [rand_series(rnd, 1, 1, 4, 2) for _ in range(d)]
        f = g * h + SkewPoly(ring, pert)
        return f, g, h
    raise AssertionError("could not draw a liftable instance")


def check_hensel_invariant(instances: int = 25, seed: int = 111, target: int = 12) -> int:
    """ord(f - g_n h_n) >= n+1 after every step; degrees and monicity are
    preserved; x^n h = phi^n(h) x^n holds along the way."""
    rnd = rng(seed)
    tol = _law_tol()
    done = 0
    while done < instances:
        alpha = rnd.choice([Fraction(2), Fraction(3, 2), Fraction(1, 2)])
        d = rnd.randint(2, 6)
        f, g, h = random_liftable(rnd, alpha, d)
        states = []
        gh, hh, achieved = hensel_lift(f, g, h, target, on_state=states.append)
        assert achieved >= target
        for st in states:
            assert st.defect.is_zero or st.defect.ord_k() >= st.n + 1
            assert st.g_cur.is_monic and st.g_cur.degree == g.degree
            assert st.h_cur.is_monic and st.h_cur.degree == h.degree
        if states:
            st = states[min(2, len(states) - 1)]
            ring = st.h_cur.ring
            xn = SkewPoly.constant(ring, ring.uniformizer_pow(st.n))
            lhs = st.h_cur.x_shift(st.n)
            rhs = st.h_cur.conj_by_x(st.n) * xn
            assert lhs.deviation(rhs) <= 64 * tol * max(1, st.h_cur.max_abs())
        done += 1
    return done


def check_end_to_end(cases: int = 50, seed: int = 1212, order: int = 15) -> int:
    """Random 3-linear-factor products re-factor with tiny residual."""
    from skewpuiseux import FactorConfig, newton_puiseux_factor
    rnd = rng(seed)
    bound = mp.mpf(2) ** -80
    done = 0
    while done < cases:
        alpha = rnd.choice([Fraction(2), Fraction(3, 2)])
        ring = puiseux_ring(alpha)
        L = rnd.choice([1, 2, 3])
        zeros = [rand_series(rnd, L, -1, 2, 3) for _ in range(3)]
        f = SkewPoly.one(ring)
        for z in zeros:
            f = f * SkewPoly.t_minus(f.ring.accommodate(z), z)
        fac = newton_puiseux_factor(f, FactorConfig(target_order=order))
        assert fac.residual < bound, (done, fac.residual)
        ev = f.evaluate(fac.zeros[-1])
        ev_ord = ev.ord()
        if ev.trunc is not None:
            ev_ord = min(ev_ord, Fraction(ev.trunc, ev.L))
        assert ev_ord >= order, (done, ev_ord)
        done += 1
    return done
