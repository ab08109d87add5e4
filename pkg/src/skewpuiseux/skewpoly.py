"""Skew polynomial rings A[t, sigma, delta] over a base-ring contract.

Multiplication follows the rule t*a = sigma(a)*t + delta(a).  Two local
instances are shipped: Puiseux-series coefficients with the twist
sigma(x) = alpha*x and inner derivation delta_a, and the skew power series
ring C[[x, rho]] (rho = complex conjugation) with a central t.  A thin
complex-field instance C[t, rho] (no uniformizer) supports substitution
examples.  Everything a polynomial needs from its coefficients goes through
the ring object, so the lifting and factoring engines stay generic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import residue as residue_mod
from . import scalar
from .errors import ContextMismatch, NotMonicError, UsageError
from .puiseux import PuiseuxSeries, SkewContext
from .scalar import INF, conj_scalar, is_negligible, to_mpc


class BaseRing:
    """Capability set a coefficient domain must provide.

    The maximal ideal is generated by a uniformizer; orders (``ord_k``) are
    measured in integer units of it.  ``phi`` is conjugation by the
    uniformizer: phi(p) * x = x * p.
    """

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_scalar(self, c):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def is_one_value(self, a) -> bool:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sigma(self, a):
        raise NotImplementedError

    def delta(self, a):
        raise NotImplementedError

    def ord_k(self, a):
        raise NotImplementedError

    def residue(self, a):
        raise NotImplementedError

    def x_shift(self, a, j: int):
        """Left-multiply a by uniformizer^j (exact exponent bookkeeping)."""
        raise NotImplementedError

    def uniformizer_pow(self, j: int):
        raise NotImplementedError

    def phi_coeff(self, a, n: int = 1):
        raise NotImplementedError

    def phi_t(self, n: int = 1):
        """phi^n(t) as a pair (c1, c0) meaning c1*t + c0."""
        raise NotImplementedError

    def residue_twist(self, p, n: int):
        """Residue image of phi^n applied to a polynomial with residue p."""
        raise NotImplementedError

    def fn_residue(self, slice_n, n: int):
        """Residue of f_n where (f - g h) = f_n x^n, given the plain
        coefficient-of-x^n slice of the defect."""
        raise NotImplementedError

    def twist_coprime(self, gres, hres, tol=None):
        """Decide coprimality of gres against the n-twisted hres for all
        n >= 1; returns None if coprime, else (n, witness)."""
        raise NotImplementedError

    def coerce(self, a):
        return a

    def accommodate(self, a) -> "BaseRing":
        """A ring (possibly ramification-refined) that can hold ``a``."""
        return self

    def unify(self, other: "BaseRing") -> "BaseRing":
        if self is other or self == other:
            return self
        raise ContextMismatch(f"incompatible rings {self!r} and {other!r}")


class PuiseuxRing(BaseRing):
    """Puiseux-series coefficients with sigma(x) = alpha*x and delta = delta_a."""

    __slots__ = ("ctx",)

    def __init__(self, ctx: SkewContext):
        self.ctx = ctx

    @property
    def L(self) -> int:
        return self.ctx.L

    @property
    def alpha(self):
        return self.ctx.alpha

    @property
    def a(self) -> PuiseuxSeries:
        return self.ctx.a

    def zero(self):
        return PuiseuxSeries.zero(self.L)

    def one(self):
        return PuiseuxSeries.one(self.L)

    def from_scalar(self, c):
        return PuiseuxSeries.constant(c, self.L)

    def is_zero(self, a) -> bool:
        return a.is_zero

    def is_one_value(self, a) -> bool:
        return set(a.terms) == {0} and to_mpc(a.terms[0]) == 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def sigma(self, a):
        return self.ctx.sigma(a)

    def delta(self, a):
        return self.ctx.delta(a)

    def ord_k(self, a):
        return a.at_ram(self.L).ord_k()

    def residue(self, a):
        return to_mpc(a.residue())

    def x_shift(self, a, j: int):
        return a.at_ram(self.L).x_shift(j)

    def uniformizer_pow(self, j: int):
        return PuiseuxSeries(self.L, {j: 1}, None, normalize=False)

    def phi_coeff(self, a, n: int = 1):
        return a

    def phi_t(self, n: int = 1):
        # phi^n(t) = alpha_eff^(-n) * t + a*(alpha_eff^(-n) - 1)
        s = self.alpha.pow(Fraction(-n, self.L))
        c1 = self.from_scalar(s)
        c0 = self.a.scale(s) - self.a if not self.a.is_zero else self.zero()
        return c1, c0

    def tmap(self) -> residue_mod.TMap:
        a0 = to_mpc(self.a.residue()) if not self.a.is_zero else scalar.mp.mpc(0)
        return residue_mod.TMap(self.alpha, self.L, a0)

    def residue_twist(self, p, n: int):
        return residue_mod.twist_residue(p, n, self.tmap())

    def fn_residue(self, slice_n, n: int):
        # left-shift by y^(-n) is plain here; phi^n then twists the slice
        return residue_mod.twist_residue(slice_n, n, self.tmap())

    def twist_coprime(self, gres, hres, tol=None):
        return residue_mod.twist_coprime_affine(gres, hres, self.tmap(), tol=tol)

    def coerce(self, a):
        if not isinstance(a, PuiseuxSeries):
            a = PuiseuxSeries.constant(a)
        return a.at_ram(self.L)

    def accommodate(self, a) -> "PuiseuxRing":
        if isinstance(a, PuiseuxSeries) and self.L % a.L:
            return self.at_ram(self.L * (a.L // gcd(self.L, a.L)))
        return self

    def at_ram(self, L: int) -> "PuiseuxRing":
        return PuiseuxRing(self.ctx.at_ram(L))

    def with_a(self, a: PuiseuxSeries) -> "PuiseuxRing":
        L = self.L * (a.L // gcd(self.L, a.L))
        return PuiseuxRing(SkewContext(self.alpha, L, a.at_ram(L)))

    def unify(self, other: "BaseRing") -> "BaseRing":
        if self is other:
            return self
        if not isinstance(other, PuiseuxRing):
            raise ContextMismatch("cannot mix Puiseux and non-Puiseux coefficients")
        if not self.alpha == other.alpha:
            raise ContextMismatch("rings have different alpha")
        L = self.L * (other.L // gcd(self.L, other.L))
        if self.a.at_ram(L).terms != other.a.at_ram(L).terms:
            raise ContextMismatch("rings have different derivation parameter")
        return self.at_ram(L)

    def __eq__(self, other):
        return (isinstance(other, PuiseuxRing) and self.alpha == other.alpha
                and self.ctx == other.ctx)

    __hash__ = None

    def __repr__(self):
        return f"PuiseuxRing(alpha={self.alpha!r}, L={self.L}, a={self.a})"


class ConjSeries:
    """Element of the skew power series ring C[[x, rho]]: a sparse map
    k -> u_k with x*u = conj(u)*x, so (sum u_i x^i)(sum v_j x^j) collects
    u_i * rho^i(v_j) at x^(i+j)."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms: dict, trunc=None, *, normalize: bool = True):
        self.trunc = trunc
        if normalize:
            eps = scalar.zero_eps()
            self.terms = {k: c for k, c in terms.items()
                          if (trunc is None or k < trunc) and not is_negligible(c, eps)}
        else:
            self.terms = dict(terms)
        if any(k < 0 for k in self.terms):
            raise UsageError("C[[x,rho]] has no negative powers")

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @property
    def is_zero(self):
        return not self.terms

    def ord_k(self):
        if self.terms:
            return min(self.terms)
        return INF if self.trunc is None else self.trunc

    def __add__(self, other):
        t = self.trunc if other.trunc is None else (
            other.trunc if self.trunc is None else min(self.trunc, other.trunc))
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return ConjSeries(terms, t)

    def __neg__(self):
        return ConjSeries({k: -c for k, c in self.terms.items()}, self.trunc,
                          normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ta = INF if self.trunc is None else self.trunc
        tb = INF if other.trunc is None else other.trunc
        t = min(ta + other.ord_k(), tb + self.ord_k())
        terms: dict = {}
        for i, u in self.terms.items():
            for j, v in other.terms.items():
                k = i + j
                if k >= t:
                    continue
                w = v if i % 2 == 0 else conj_scalar(v)
                terms[k] = terms.get(k, 0) + u * w
        return ConjSeries(terms, None if t == INF else int(t))

    def conj_map(self):
        """phi on C[[x,rho]]: conjugate every coefficient, exponents fixed."""
        return ConjSeries({k: conj_scalar(c) for k, c in self.terms.items()},
                          self.trunc, normalize=False)

    def drop_small_upto(self, k_max: int, tol):
        terms = {k: c for k, c in self.terms.items()
                 if k > k_max or abs(to_mpc(c)) > tol}
        return ConjSeries(terms, self.trunc, normalize=False)

    def x_shift(self, j: int):
        """Left-multiply by x^j: x^j * u_k x^k = rho^j(u_k) x^(j+k)."""
        terms = {}
        for k, c in self.terms.items():
            if k + j < 0:
                raise UsageError("shift below x^0 in C[[x,rho]]")
            terms[k + j] = c if j % 2 == 0 else conj_scalar(c)
        t = None if self.trunc is None else self.trunc + j
        return ConjSeries(terms, t, normalize=False)

    def max_abs(self):
        if not self.terms:
            return scalar.mp.mpf(0)
        return max(abs(to_mpc(c)) for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, ConjSeries):
            return NotImplemented
        return self.terms == other.terms and self.trunc == other.trunc

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{scalar.fmt_scalar(c)}*x^{k}" for k, c in sorted(self.terms.items()))
        return f"<ConjSeries {body or '0'}>"


class ConjSeriesRing(BaseRing):
    """C[[x, rho]] as coefficient ring of R = A[t] with central t
    (sigma = id, delta = 0 at the polynomial level)."""

    def zero(self):
        return ConjSeries({}, None, normalize=False)

    def one(self):
        return ConjSeries({0: 1}, None, normalize=False)

    def from_scalar(self, c):
        return ConjSeries.constant(c)

    def is_zero(self, a) -> bool:
        return a.is_zero

    def is_one_value(self, a) -> bool:
        return set(a.terms) == {0} and to_mpc(a.terms[0]) == 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def sigma(self, a):
        return a

    def delta(self, a):
        return self.zero()

    def ord_k(self, a):
        return a.ord_k()

    def residue(self, a):
        return to_mpc(a.terms.get(0, 0))

    def x_shift(self, a, j: int):
        return a.x_shift(j)

    def uniformizer_pow(self, j: int):
        if j < 0:
            raise UsageError("C[[x,rho]] has no negative powers")
        return ConjSeries({j: 1}, None, normalize=False)

    def phi_coeff(self, a, n: int = 1):
        return a if n % 2 == 0 else a.conj_map()

    def phi_t(self, n: int = 1):
        return self.one(), self.zero()

    def residue_twist(self, p, n: int):
        return p if n % 2 == 0 else p.conj_coeffs()

    def fn_residue(self, slice_n, n: int):
        # t is central: right division by x^n is a plain exponent shift
        return slice_n

    def twist_coprime(self, gres, hres, tol=None):
        return residue_mod.twist_coprime_periodic(
            gres, hres, lambda p, n: self.residue_twist(p, n), 2, tol=tol)

    def coerce(self, a):
        if isinstance(a, ConjSeries):
            return a
        return ConjSeries.constant(a)

    def unify(self, other):
        if isinstance(other, ConjSeriesRing):
            return self
        raise ContextMismatch("cannot mix C[[x,rho]] with other coefficient rings")

    def __eq__(self, other):
        return isinstance(other, ConjSeriesRing)

    __hash__ = None

    def __repr__(self):
        return "ConjSeriesRing()"


class ComplexConjRing(BaseRing):
    """C[t, rho]: plain complex coefficients, sigma = complex conjugation.
    A field, so no uniformizer; supports arithmetic and substitution only."""

    def zero(self):
        return scalar.mp.mpc(0)

    def one(self):
        return scalar.mp.mpc(1)

    def from_scalar(self, c):
        return to_mpc(c)

    def is_zero(self, a) -> bool:
        return is_negligible(a)

    def is_one_value(self, a) -> bool:
        return to_mpc(a) == 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def sigma(self, a):
        return conj_scalar(a)

    def delta(self, a):
        return self.zero()

    def ord_k(self, a):
        return INF if self.is_zero(a) else 0

    def coerce(self, a):
        return to_mpc(a)

    def unify(self, other):
        if isinstance(other, ComplexConjRing):
            return self
        raise ContextMismatch("cannot mix C[t,rho] with other coefficient rings")

    def __eq__(self, other):
        return isinstance(other, ComplexConjRing)

    __hash__ = None

    def __repr__(self):
        return "ComplexConjRing()"


class SkewPoly:
    """Dense polynomial sum_i c_i t^i over a base ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: BaseRing, coeffs, *, trim: bool = True):
        self.ring = ring
        coeffs = [ring.coerce(c) for c in coeffs]
        if trim:
            while coeffs and ring.is_zero(coeffs[-1]):
                coeffs.pop()
        self.coeffs = coeffs

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ring):
        return cls(ring, [])

    @classmethod
    def one(cls, ring):
        return cls(ring, [ring.one()])

    @classmethod
    def constant(cls, ring, c):
        return cls(ring, [c])

    @classmethod
    def t_pow(cls, ring, d: int):
        return cls(ring, [ring.zero()] * d + [ring.one()], trim=False)

    @classmethod
    def t_minus(cls, ring, c):
        return cls(ring, [ring.neg(ring.coerce(c)), ring.one()], trim=False)

    # -- structure -----------------------------------------------------------

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

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.ring.is_one_value(self.coeffs[-1])

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero()

    def ord_k(self):
        """min over coefficient orders, in uniformizer units."""
        if self.is_zero:
            return INF
        return min(self.ring.ord_k(c) for c in self.coeffs)

    def ord(self):
        """x-adic order as an exact Fraction (+inf for the zero polynomial);
        {p : ord(p) >= n} is the two-sided ideal generated by x^n."""
        o = self.ord_k()
        if o == INF:
            return INF
        return Fraction(int(o), getattr(self.ring, "L", 1))

    def map_coeffs(self, fn) -> "SkewPoly":
        return SkewPoly(self.ring, [fn(c) for c in self.coeffs])

    def in_ring(self, ring: BaseRing) -> "SkewPoly":
        return SkewPoly(ring, [ring.coerce(c) for c in self.coeffs], trim=False)

    # -- ring operations ------------------------------------------------------

    def _common(self, other: "SkewPoly"):
        ring = self.ring.unify(other.ring)
        return ring, self.in_ring(ring), other.in_ring(ring)

    def __add__(self, other):
        ring, a, b = self._common(other)
        n = max(len(a.coeffs), len(b.coeffs))
        return SkewPoly(ring, [ring.add(a.coeff(i), b.coeff(i)) for i in range(n)])

    def __neg__(self):
        return SkewPoly(self.ring, [self.ring.neg(c) for c in self.coeffs], trim=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SkewPoly):
            other = SkewPoly.constant(self.ring, other)
        ring, a, b = self._common(other)
        if a.is_zero or b.is_zero:
            return SkewPoly.zero(ring)
        acc = [ring.zero()] * (a.degree + b.degree + 1)
        tb = list(b.coeffs)  # t^i * b, built up iteratively
        for i, ci in enumerate(a.coeffs):
            if not ring.is_zero(ci):
                for j, gj in enumerate(tb):
                    acc[j] = ring.add(acc[j], ring.mul(ci, gj))
            if i < a.degree:
                tb = a._t_mul_in(ring, tb)
        return SkewPoly(ring, acc)

    @staticmethod
    def _t_mul_in(ring, coeffs):
        if not coeffs:
            return []
        out = [ring.delta(coeffs[0])]
        for i in range(1, len(coeffs)):
            out.append(ring.add(ring.sigma(coeffs[i - 1]), ring.delta(coeffs[i])))
        out.append(ring.sigma(coeffs[-1]))
        return out

    def lmul_base(self, c) -> "SkewPoly":
        """Left multiplication by a base element (coefficient-wise)."""
        ring = self.ring
        c = ring.coerce(c)
        return SkewPoly(ring, [ring.mul(c, ci) for ci in self.coeffs])

    def x_shift(self, j: int) -> "SkewPoly":
        """Left multiplication by uniformizer^j (coefficient-wise, exact)."""
        ring = self.ring
        return SkewPoly(ring, [ring.x_shift(c, j) for c in self.coeffs], trim=False)

    def left_divmod(self, p: "SkewPoly"):
        """f = q*p + r with deg r < deg p; requires p monic."""
        ring, f, p = self._common(p)
        if not p.is_monic:
            raise NotMonicError("left division requires a monic divisor")
        dp = p.degree
        r = list(f.coeffs)
        q = [ring.zero()] * max(0, len(r) - dp)
        while len(r) - 1 >= dp and r:
            k = len(r) - 1 - dp
            c = r[-1]
            q[k] = ring.add(q[k], c)
            # subtract (c t^k) * p; leading terms cancel exactly since p is monic
            sub = SkewPoly(ring, [ring.zero()] * k + [c], trim=False) * p
            for j, s in enumerate(sub.coeffs):
                r[j] = ring.sub(r[j], s)
            r.pop()
            while r and ring.is_zero(r[-1]):
                r.pop()
        return SkewPoly(ring, q), SkewPoly(ring, r)

    def evaluate(self, a):
        """(sigma, delta)-substitution of a: the remainder of left division
        by t - a.  f(a) = 0 iff t - a divides f on the right."""
        if self.is_zero:
            return self.ring.zero()
        ring = self.ring.accommodate(a)
        _, rem = self.left_divmod(SkewPoly.t_minus(ring, a))
        return rem.coeff(0)

    def evaluate_closed(self, a):
        """Closed-form substitution for delta = 0:
        f(a) = f_0 + f_1 a + f_2 a^sigma a + f_3 a^(sigma^2) a^sigma a + ..."""
        ring = self.ring.accommodate(a)
        a = ring.coerce(a)
        if self.is_zero:
            return ring.zero()
        val = self.coeffs[0]
        chain = ring.one()
        spow = a  # sigma^(i-1)(a) at iteration i
        for i in range(1, len(self.coeffs)):
            chain = ring.mul(spow, chain)
            val = ring.add(val, ring.mul(self.coeffs[i], chain))
            spow = ring.sigma(spow)
        return val

    def reduce_residue(self):
        """Coefficient-wise residue; requires all coefficient orders >= 0."""
        ring = self.ring
        out = []
        for c in self.coeffs:
            o = ring.ord_k(c)
            if o < 0:
                raise UsageError("reduction requires nonnegative coefficient orders")
            out.append(ring.residue(c))
        return residue_mod.ResiduePoly(out)

    def conj_by_x(self, n: int = 1) -> "SkewPoly":
        """phi^n with phi the conjugation by the uniformizer: phi(f)*x = x*f."""
        ring = self.ring
        if self.is_zero or n == 0:
            return self
        c1, c0 = ring.phi_t(n)
        lin = SkewPoly(ring, [c0, c1], trim=False)
        acc = SkewPoly.constant(ring, ring.phi_coeff(self.coeffs[-1], n))
        for i in range(self.degree - 1, -1, -1):
            acc = acc * lin + SkewPoly.constant(ring, ring.phi_coeff(self.coeffs[i], n))
        return acc

    def truncate(self, T_k) -> "SkewPoly":
        return SkewPoly(self.ring, [c.truncate(T_k) for c in self.coeffs])

    # -- measurement -----------------------------------------------------------

    def max_abs(self):
        if self.is_zero:
            return scalar.mp.mpf(0)
        return max(c.max_abs() for c in self.coeffs)

    def deviation(self, other) -> object:
        return (self - other).max_abs()

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        try:
            _, a, b = self._common(other)
        except ContextMismatch:
            return False
        return a.coeffs == b.coeffs

    __hash__ = None

    def __str__(self):
        from .parsing import poly_to_str
        return poly_to_str(self)

    def __repr__(self):
        try:
            return f"<SkewPoly {self}>"
        except Exception:
            return f"<SkewPoly deg={self.degree}>"


def puiseux_ring(alpha, L: int = 1, a: PuiseuxSeries | None = None) -> PuiseuxRing:
    """Convenience constructor for the main coefficient ring."""
    return PuiseuxRing(SkewContext(alpha, L, a))
