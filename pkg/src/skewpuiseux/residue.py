"""Commutative C[t] toolkit over big complex scalars.

This is the residue level of the local theory: polynomial arithmetic,
a deterministic Durand-Kerner root finder with clustering, extended gcd
with tolerance-aware degree collapse, the affine map T governing how
conjugation by the uniformizer acts on residue roots, orbit partitions
under T, and the all-n twisted-coprimality decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from . import scalar
from .errors import RootFindingError, UsageError
from .scalar import Alpha, conj_scalar, to_mpc


def cluster_tol():
    return mp.mpf(2) ** -(mp.prec // 3)


def gcd_tol():
    return mp.mpf(2) ** -(mp.prec // 2)


class ResiduePoly:
    """Dense polynomial over big complex scalars; index i = coefficient of t^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, *, trim: bool = True):
        coeffs = [to_mpc(c) for c in coeffs]
        if trim:
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if coeffs:
                # degree honesty: drop leading dust relative to the body
                eps = scalar.zero_eps() * max(abs(c) for c in coeffs)
                while coeffs and abs(coeffs[-1]) < eps:
                    coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def from_roots(cls, pairs) -> "ResiduePoly":
        """Monic product of (t - c)^mult over (root, mult) pairs."""
        p = cls([1], trim=False)
        for c, mult in pairs:
            for _ in range(mult):
                p = p * cls([-to_mpc(c), 1], trim=False)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if self.is_zero:
            raise UsageError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return mp.mpc(0)

    def monic(self) -> "ResiduePoly":
        if self.is_zero:
            return self
        c = self.lc
        return ResiduePoly([x / c for x in self.coeffs], trim=False)

    def eval(self, w):
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc

    def derivative(self) -> "ResiduePoly":
        return ResiduePoly([i * c for i, c in enumerate(self.coeffs)][1:], trim=False)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return ResiduePoly([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return ResiduePoly([-c for c in self.coeffs], trim=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ResiduePoly):
            return ResiduePoly([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return ResiduePoly([])
        out = [mp.mpc(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ResiduePoly(out)

    __rmul__ = __mul__

    def divmod(self, other, tol=None):
        """Long division; trailing coefficients of the remainder below
        tol-scale are collapsed so degrees drop honestly."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if tol is None:
            tol = gcd_tol()
        scale_bound = max(self.max_abs(), other.max_abs(), mp.mpf(1))
        r = list(self.coeffs)
        q = [mp.mpc(0)] * max(0, len(r) - other.degree)
        inv = 1 / other.lc
        while len(r) - 1 >= other.degree and r:
            k = len(r) - 1 - other.degree
            c = r[-1] * inv
            q[k] += c
            for j, b in enumerate(other.coeffs):
                r[k + j] -= c * b
            r.pop()
            while r and abs(r[-1]) < tol * scale_bound:
                r.pop()
        return ResiduePoly(q, trim=False), ResiduePoly(r, trim=False)

    def conj_coeffs(self) -> "ResiduePoly":
        return ResiduePoly([conj_scalar(c) for c in self.coeffs], trim=False)

    def max_abs(self):
        if self.is_zero:
            return mp.mpf(0)
        return max(abs(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, ResiduePoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({scalar.fmt_scalar(c)})*t^{i}" for i, c in enumerate(self.coeffs))
        return f"<ResiduePoly {body or '0'}>"


@dataclass(frozen=True)
class RootsReport:
    pairs: list
    residual: object

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def roots(p: ResiduePoly, tol=None, max_iter: int = 512) -> RootsReport:
    """All complex roots with multiplicities.

    Durand-Kerner from the deterministic start points (0.4+0.9i)^k, then
    single-linkage clustering at ``tol`` (default 2^(-P/3)), then a few
    multiplicity-aware Newton steps to sharpen each cluster center.
    """
    if p.degree < 1:
        raise UsageError("root finding needs degree >= 1")
    if tol is None:
        tol = cluster_tol()
    q = p.monic()
    d = q.degree
    if d == 1:
        r = -q.coeff(0)
        return RootsReport([(r, 1)], abs(p.eval(r)))

    base = mp.mpc("0.4", "0.9")
    zs = [base ** (k + 1) for k in range(d)]
    hard = mp.mpf(2) ** -(mp.prec - 12)
    soft = mp.mpf(2) ** -(mp.prec // 3)
    prev = mp.inf
    settled = False
    for _ in range(max_iter):
        maxstep = mp.mpf(0)
        for k in range(d):
            denom = mp.mpc(1)
            for j in range(d):
                if j != k:
                    denom *= zs[k] - zs[j]
            if denom == 0:
                denom = mp.mpc(hard)
            step = q.eval(zs[k]) / denom
            zs[k] = zs[k] - step
            a = abs(step)
            if a > maxstep:
                maxstep = a
        if maxstep < hard:
            settled = True
            break
        # multiple roots stall around the sqrt-precision floor
        if maxstep < soft and maxstep > prev / 2:
            settled = True
            break
        prev = maxstep
    if not settled:
        raise RootFindingError(f"root iteration did not settle in {max_iter} steps",
                               best=zs)

    # iterates around an m-fold root stall at radius ~eps^(1/m), so the
    # right clustering radius is not known a priori: escalate it until the
    # clustered-and-polished roots re-expand to the input polynomial
    order = sorted(range(d), key=lambda k: (mp.re(zs[k]), mp.im(zs[k])))
    zs = [zs[k] for k in order]
    dq = q.derivative()
    good = mp.mpf(2) ** -(mp.prec // 2) * max(mp.mpf(1), q.max_abs())
    best = None
    radius = tol
    for _ in range(max(2, mp.prec // 8)):
        pairs = _cluster_polish(q, dq, zs, radius, hard)
        dev = (ResiduePoly.from_roots(pairs) - q).max_abs()
        if best is None or dev < best[0]:
            best = (dev, pairs)
        if dev <= good:
            break
        radius *= 4
    pairs = best[1]
    residual = max(abs(p.eval(r)) for r, _ in pairs)
    return RootsReport(pairs, residual)


def _cluster_polish(q, dq, zs, radius, hard):
    """Single-linkage clustering at the given radius, then multiplicity-aware
    Newton steps on each cluster center."""
    d = len(zs)
    labels = list(range(d))
    for i in range(d):
        for j in range(i + 1, d):
            if abs(zs[i] - zs[j]) <= radius:
                old, new = labels[j], labels[i]
                for k in range(d):
                    if labels[k] == old:
                        labels[k] = new
    clusters: dict = {}
    for k in range(d):
        clusters.setdefault(labels[k], []).append(zs[k])
    pairs = []
    for members in clusters.values():
        mult = len(members)
        center = sum(members) / mult
        for _ in range(3):
            pd = dq.eval(center)
            if abs(pd) < hard:
                break
            center = center - mult * q.eval(center) / pd
        pairs.append((center, mult))
    pairs.sort(key=lambda rm: (mp.re(rm[0]), mp.im(rm[0])))
    return pairs


def ext_gcd(p: ResiduePoly, q: ResiduePoly, tol=None):
    """Extended Euclid: returns (g, a, b, kappa) with a*p + b*q = g.

    If p, q are coprime, g is normalized to the constant 1; kappa is a
    rough growth estimate for conditioning the Bezout identity.
    """
    if tol is None:
        tol = gcd_tol()
    one = ResiduePoly([1], trim=False)
    zero = ResiduePoly([])
    r0, r1 = p, q
    s0, s1 = one, zero
    t0, t1 = zero, one
    kappa = mp.mpf(1)
    while not r1.is_zero:
        quo, rem = r0.divmod(r1, tol=tol)
        kappa *= max(mp.mpf(1), quo.max_abs())
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero:
        return r0, s0, t0, kappa
    if r0.degree == 0:
        c = r0.coeff(0)
        return one, s0 * (1 / c), t0 * (1 / c), kappa
    c = r0.lc
    return r0.monic(), s0 * (1 / c), t0 * (1 / c), kappa


class TMap:
    """The affine map T(w) = alpha_eff^(-1) w + a0 (alpha_eff^(-1) - 1) on
    residue roots, where alpha_eff = alpha^(1/L) is the multiplier of sigma
    on the working uniformizer.  T^n uses alpha_eff^(-n) in the same shape.
    """

    __slots__ = ("alpha", "L", "a0")

    def __init__(self, alpha, L: int = 1, a0=0):
        self.alpha = alpha if isinstance(alpha, Alpha) else Alpha(alpha)
        self.L = L
        self.a0 = to_mpc(a0)

    @property
    def is_identity(self) -> bool:
        return self.alpha.is_one

    def mult(self, n: int):
        """alpha_eff^(-n)."""
        return self.alpha.pow(Fraction(-n, self.L))

    def alpha_eff(self):
        return self.alpha.pow(Fraction(1, self.L))

    def apply(self, w, n: int = 1):
        if self.is_identity:
            return to_mpc(w)
        s = self.mult(n)
        return s * w + self.a0 * (s - 1)

    def __repr__(self):
        return f"TMap(alpha={self.alpha!r}, L={self.L}, a0={self.a0})"


def twist_residue(p: ResiduePoly, n: int, tmap: TMap) -> ResiduePoly:
    """Residue image of phi^n: substitute t -> alpha_eff^(-n) t + a0(alpha_eff^(-n)-1).

    A value c is a root of the result iff T^n(c) is a root of p.
    """
    if n == 0 or tmap.is_identity or p.is_zero:
        return p
    s = to_mpc(tmap.mult(n))
    lin = ResiduePoly([tmap.a0 * (s - 1), s], trim=False)
    acc = ResiduePoly([p.coeffs[-1]], trim=False)
    for i in range(p.degree - 1, -1, -1):
        acc = acc * lin + ResiduePoly([p.coeffs[i]], trim=False)
    return acc


def orbit_exponent(tmap: TMap, c1, c, tol=None):
    """The n >= 0 with T^n(c1) = c, or None.  Decided in closed form:
    membership means (c + a0) = alpha_eff^(-n) (c1 + a0)."""
    if tol is None:
        tol = cluster_tol()
    c1 = to_mpc(c1)
    c = to_mpc(c)
    scale_bound = 1 + abs(c1) + abs(c)
    if tmap.is_identity:
        return 0 if abs(c - c1) <= tol * scale_bound else None
    z1 = c1 + tmap.a0
    z = c + tmap.a0
    if abs(z1) <= tol:
        # c1 is the fixed point of T; its orbit is {c1}
        return 0 if abs(c - c1) <= tol * scale_bound else None
    ratio = z / z1
    # the ratio must be (tiny-or-not) real positive: relative imaginary test
    if abs(ratio) == 0 or mp.re(ratio) <= 0 or abs(mp.im(ratio)) > 16 * tol * abs(ratio):
        return None
    ln_alpha_eff = mp.log(to_mpc(tmap.alpha_eff()).real)
    nf = -mp.log(mp.re(ratio)) / ln_alpha_eff
    n = int(mp.nint(nf))
    if n < 0 or abs(nf - n) > mp.mpf("0.25") or n > 10 ** 6:
        return None
    if abs(tmap.apply(c1, n) - c) <= 16 * tol * scale_bound:
        return n
    return None


@dataclass
class OrbitPartition:
    """Residue roots split into the T-orbit of a base root and the rest."""

    base_root: object
    members: list    # (root, exponent n with root = T^n(base), multiplicity)
    outsiders: list  # (root, multiplicity)

    @property
    def j(self) -> int:
        return sum(m for _, _, m in self.members)


def orbit_partition(root_pairs, c1, tmap: TMap, tol=None) -> OrbitPartition:
    members = []
    outsiders = []
    for root, mult in root_pairs:
        n = orbit_exponent(tmap, c1, root, tol)
        if n is None:
            outsiders.append((root, mult))
        else:
            members.append((root, n, mult))
    return OrbitPartition(to_mpc(c1), members, outsiders)


def _twist_hit(tmap: TMap, c, cprime, tol):
    """Smallest n >= 1 with T^n(c) = cprime, or None."""
    c = to_mpc(c)
    cprime = to_mpc(cprime)
    scale_bound = 1 + abs(c) + abs(cprime)
    if tmap.is_identity:
        return 1 if abs(c - cprime) <= tol * scale_bound else None
    z = c + tmap.a0
    zp = cprime + tmap.a0
    if abs(z) <= tol:
        return 1 if abs(zp) <= tol else None
    ratio = zp / z
    if abs(ratio) == 0 or mp.re(ratio) <= 0 or abs(mp.im(ratio)) > 16 * tol * abs(ratio):
        return None
    nf = -mp.log(mp.re(ratio)) / mp.log(to_mpc(tmap.alpha_eff()).real)
    n = int(mp.nint(nf))
    if n < 1 or abs(nf - n) > mp.mpf("0.25") or n > 10 ** 6:
        return None
    if abs(tmap.apply(c, n) - cprime) <= 16 * tol * scale_bound:
        return n
    return None


def twist_coprime_affine(gres: ResiduePoly, hres: ResiduePoly, tmap: TMap, tol=None):
    """Decide for all n >= 1 at once whether gres is coprime to the
    n-twisted hres.  Fails iff some root c of gres and root c' of hres have
    T^n(c) = c' for an integer n >= 1 (at most one candidate n per pair).

    Returns None when coprime for all n, else (n, witness_factor).
    """
    if tol is None:
        tol = cluster_tol()
    if gres.degree < 1 or hres.degree < 1:
        return None
    groots = roots(gres, tol)
    hroots = roots(hres, tol)
    best = None
    for c, _ in groots:
        for cp, _ in hroots:
            n = _twist_hit(tmap, c, cp, tol)
            if n is not None and (best is None or n < best[0]):
                best = (n, ResiduePoly([-c, 1], trim=False))
    return best


def twist_coprime_periodic(gres: ResiduePoly, hres: ResiduePoly, twist_fn,
                           period: int, tol=None):
    """Twisted coprimality when phi acts on residues with a finite period:
    check n = 1..period explicitly via the extended gcd."""
    if tol is None:
        tol = gcd_tol()
    if gres.degree < 1 or hres.degree < 1:
        return None
    for n in range(1, period + 1):
        g, _, _, _ = ext_gcd(gres, twist_fn(hres, n), tol)
        if g.degree > 0:
            return (n, g)
    return None


def twist_coprime_check(gres: ResiduePoly, hres: ResiduePoly, *, tmap=None,
                        twist_fn=None, period=None, tol=None):
    """Decide coprimality of gres against every n >= 1 twist of hres.

    With ``tmap`` the affine closed-form criterion decides all n at once;
    with ``twist_fn``/``period`` the twists are enumerated over one period.
    Returns None when coprime for all n, else (n, witness_factor).
    """
    if tmap is not None:
        return twist_coprime_affine(gres, hres, tmap, tol=tol)
    if twist_fn is not None and period is not None:
        return twist_coprime_periodic(gres, hres, twist_fn, period, tol=tol)
    raise UsageError("twist_coprime_check needs either tmap or twist_fn+period")


def refine_factor_pair(p: ResiduePoly, u: ResiduePoly, v: ResiduePoly,
                       iters: int = 2, tol=None):
    """Sharpen a coprime monic factorization p ~ u*v by Newton steps on the
    coefficients: solve u*dv + du*v = p - uv through the Bezout identity.

    Root-based factor reconstruction is limited by the sqrt-of-epsilon
    accuracy floor at multiple roots; this correction converges
    quadratically to the full working precision instead.
    """
    if tol is None:
        tol = gcd_tol()
    g, a, b = ext_gcd(u, v, tol)[:3]
    if g.degree != 0:
        return u, v
    floor = mp.mpf(2) ** -(mp.prec - 8)
    for _ in range(iters):
        e = p - u * v
        if e.is_zero or e.max_abs() < floor:
            break
        q, du = (b * e).divmod(u, tol=floor)
        dv = a * e + q * v
        if du.degree >= max(u.degree, 1):
            du = ResiduePoly(du.coeffs[:u.degree], trim=False)
        if dv.degree >= max(v.degree, 1):
            dv = ResiduePoly(dv.coeffs[:v.degree], trim=False)
        u = u + du
        v = v + dv
    return u, v


# ---------------------------------------------------------------------------
# Delta-set diagnostics


def gamma_elements(alpha_eff, d: int, depth: int):
    """All d/(alpha_eff^(-n_1)+...+alpha_eff^(-n_d)) - 1 with 0 <= n_k <= depth."""
    a = to_mpc(alpha_eff).real
    out = []

    def rec(slots, n_min, acc):
        if slots == 0:
            out.append(d / acc - 1)
            return
        for n in range(n_min, depth + 1):
            rec(slots - 1, n, acc + a ** (-n))

    rec(d, 0, mp.mpf(0))
    return out


def delta_set_member(c, a0, alpha_eff, d: int, depth: int = 24, tol=None):
    """Diagnostic decision whether c lies in the set
    {a0 (d/(alpha_eff^(-n_1)+...+alpha_eff^(-n_d)) - 1)}.

    Returns ("member", (n_1..n_d)), ("nonmember", None) or ("unknown", None)
    when the search depth is exhausted without a decision.  Not on the
    factorization critical path: the driver certifies splits directly.
    """
    if tol is None:
        tol = cluster_tol()
    c = to_mpc(c)
    a0 = to_mpc(a0)
    a = to_mpc(alpha_eff).real
    if a == 1:
        return ("member", tuple([0] * d)) if abs(c) <= tol else ("nonmember", None)
    if abs(a0) <= tol:
        return ("member", tuple([0] * d)) if abs(c) <= tol else ("nonmember", None)
    ratio = c / a0
    if abs(mp.im(ratio)) > tol * (1 + abs(ratio)):
        return ("nonmember", None)
    x = mp.re(ratio)
    if a > 1 and x < -tol:
        return ("nonmember", None)
    if a < 1 and x > tol:
        return ("nonmember", None)
    if x <= -1 + tol:
        return ("nonmember", None)
    target = d / (1 + x)  # required sum of alpha_eff^(-n_k)

    unknown = [False]

    def rec(slots, remaining, n_min):
        if slots == 0:
            return [] if abs(remaining) <= tol * d else None
        for n in range(n_min, depth + 1):
            v = a ** (-n)
            if a > 1:
                if v * slots < remaining - tol:
                    # terms only shrink from here on; within this depth nothing fits
                    break
                if v > remaining + tol:
                    continue
            else:
                if v > remaining + tol:
                    break
                if v * slots < remaining - tol and n == depth:
                    unknown[0] = True
            got = rec(slots - 1, remaining - v, n)
            if got is not None:
                return [n] + got
        else:
            if slots > 0 and a ** (-mp.mpf(depth)) * slots >= remaining - tol and a > 1:
                unknown[0] = True
        return None

    hit = rec(d, mp.mpf(target), 0)
    if hit is not None:
        return ("member", tuple(hit))
    return ("unknown", None) if unknown[0] else ("nonmember", None)
