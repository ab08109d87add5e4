"""Skew Hensel lifting, generic over the base-ring contract.

Given monic f and a residue-level factorization res(f) = res(g)*res(h)
whose left factor is coprime to every uniformizer-twist of the right one,
the loop constructs corrections p_n, q_n of bounded degree so that
g_n = g + sum p_k x^k and h_n = h + sum q_k x^k satisfy
ord(f - g_n h_n) >= n+1 after each step:

  defect           = f - g h                    (order >= n)
  f_n              with defect = f_n x^n;  its residue is the n-twist of
                    the coefficient-of-x^n slice of the defect
  Bezout           a res(g) + b twist_n(res(h)) = 1 in K[t]
  left division    b f_n = q g + p_n, deg p_n < deg g   (residue level)
  q_n              = constant-term part of a f_n + q h^(phi^n)

Corrections are lifted residue polynomials, which is exactly what the
order-increase argument consumes; the defect is updated incrementally with
exact ring products.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from . import residue as residue_mod
from . import scalar
from .errors import (PrecisionExhausted, SkewError, TwistCoprimeFailure,
                     UsageError)
from .scalar import INF
from .skewpoly import SkewPoly


@dataclass
class HenselState:
    """Snapshot after one correction step (for invariant checks)."""

    n: int
    g_cur: SkewPoly
    h_cur: SkewPoly
    defect: SkewPoly


def _lift(ring, rp: residue_mod.ResiduePoly) -> SkewPoly:
    return SkewPoly(ring, [ring.from_scalar(c) for c in rp.coeffs])


def _defect_slice(defect: SkewPoly, n: int) -> residue_mod.ResiduePoly:
    """Residue polynomial made of each coefficient's x^n term."""
    return residue_mod.ResiduePoly(
        [scalar.to_mpc(c.terms.get(n, 0)) for c in defect.coeffs])


def _scrub(defect: SkewPoly, n: int, tol) -> SkewPoly:
    """Clear cancellation dust at exponents <= n after the step-n correction."""
    return SkewPoly(defect.ring,
                    [c.drop_small_upto(n, tol) for c in defect.coeffs])


def twist_precheck(g: SkewPoly, h: SkewPoly, tol=None):
    """Raise TwistCoprimeFailure if res(g) is not coprime to the n-twisted
    res(h) for some n >= 1."""
    ring = g.ring
    fail = ring.twist_coprime(g.reduce_residue(), h.reduce_residue(), tol)
    if fail is not None:
        n, witness = fail
        raise TwistCoprimeFailure(n, witness)


def hensel_lift(f: SkewPoly, g: SkewPoly, h: SkewPoly, target_k: int,
                on_state=None):
    """Lift res(f) = res(g) res(h) to f = g_hat h_hat + O(x^target_k).

    Returns (g_hat, h_hat, achieved_order_k).  ``on_state`` receives a
    HenselState after every correction step.
    """
    ring = f.ring.unify(g.ring).unify(h.ring)
    f = f.in_ring(ring)
    g = g.in_ring(ring)
    h = h.in_ring(ring)
    if not (f.is_monic and g.is_monic and h.is_monic):
        raise UsageError("hensel_lift needs monic f, g, h")
    d, m = f.degree, g.degree
    if h.degree != d - m:
        raise UsageError("degree mismatch: deg f != deg g + deg h")
    if f.ord_k() < 0 or g.ord_k() < 0 or h.ord_k() < 0:
        raise UsageError("hensel_lift needs integral coefficients")
    avail = min((INF if c.trunc is None else c.trunc for c in f.coeffs), default=INF)
    if avail < target_k:
        raise PrecisionExhausted(
            f"f is only known to order {avail} < requested {target_k}")

    gres = g.reduce_residue()
    hres = h.reduce_residue()
    fres = f.reduce_residue()
    mismatch = (fres - gres * hres).max_abs()
    if mismatch > mp.mpf(2) ** -(mp.prec // 4):
        raise UsageError(f"res(f) != res(g)res(h) (deviation {mismatch})")

    twist_precheck(g, h)

    g_cur, h_cur = g, h
    defect = f - g_cur * h_cur
    # corrections can grow with n (the true factors may have geometrically
    # growing coefficients); cancellation dust is judged against this scale
    scale = max(mp.mpf(1), f.max_abs())
    floor = mp.mpf(2) ** -(mp.prec - 24)
    while True:
        if defect.is_zero:
            break
        o = defect.ord_k()
        if o >= target_k:
            break
        n = int(o)
        if n < 1:
            raise SkewError("hensel invariant violated: defect has order 0")
        fn_res = ring.fn_residue(_defect_slice(defect, n), n)
        hres_tw = ring.residue_twist(hres, n)
        one, a_res, b_res, _ = residue_mod.ext_gcd(gres, hres_tw)
        if one.degree != 0:
            raise TwistCoprimeFailure(n, one)
        q_res, p_res = (b_res * fn_res).divmod(gres, tol=floor)
        qn_res = a_res * fn_res + q_res * hres_tw
        # deg q_n < d - m is automatic (deg f_n < d); trim numeric dust
        if qn_res.degree >= d - m:
            scale_n = max(scale, fn_res.max_abs())
            dust = max(abs(c) for c in qn_res.coeffs[d - m:])
            if dust > scale_n * mp.mpf(2) ** -(mp.prec // 4):
                raise SkewError(f"hensel correction degree overflow ({dust})")
            qn_res = residue_mod.ResiduePoly(qn_res.coeffs[:d - m], trim=False)
        xn = SkewPoly.constant(ring, ring.uniformizer_pow(n))
        p_corr = _lift(ring, p_res) * xn
        q_corr = _lift(ring, qn_res) * xn
        g_new = g_cur + p_corr
        h_new = h_cur + q_corr
        defect = defect - (p_corr * h_cur + g_cur * q_corr + p_corr * q_corr)
        g_cur, h_cur = g_new, h_new
        scale = max(scale, fn_res.max_abs(), p_res.max_abs(), qn_res.max_abs(),
                    b_res.max_abs())
        defect = _scrub(defect, n, scale * floor)
        if not defect.is_zero and defect.ord_k() <= n:
            raise SkewError(f"hensel step did not raise the defect order at n={n}")
        if on_state is not None:
            on_state(HenselState(n, g_cur, h_cur, defect))

    achieved = defect.ord_k() if not defect.is_zero else INF
    return (_truncate_monic(g_cur, target_k), _truncate_monic(h_cur, target_k),
            achieved)


def _truncate_monic(p: SkewPoly, target_k: int) -> SkewPoly:
    """Truncate all coefficients but keep the (exact) leading 1 untouched."""
    coeffs = [c.truncate(target_k) for c in p.coeffs[:-1]] + [p.coeffs[-1]]
    return SkewPoly(p.ring, coeffs, trim=False)
