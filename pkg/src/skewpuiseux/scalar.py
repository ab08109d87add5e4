"""Scalar layer: exact rationals, exact Gaussian rationals, big complex
floats, and the multiplier alpha with its rational powers.

Numeric coefficients are mpmath values computed at the ambient working
precision; enter a computation through ``with bits(P):`` to fix it.  Exact
coefficients (Fraction / GaussianRational) are used by the ring-law unit
tests only and never mix with numeric ones inside a single series.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import UsageError

Rational = Fraction

INF = float("inf")


def bits(prec: int):
    """Context manager fixing the working precision in bits."""
    return mp.workprec(prec)


def working_bits() -> int:
    return mp.prec


_ZERO_EPS_BITS = None  # None: derive from ambient precision


def set_zero_eps_bits(bits_: int | None):
    """Override the noise threshold to 2^(-bits_); None restores the
    default 2^(-P/2)."""
    global _ZERO_EPS_BITS
    _ZERO_EPS_BITS = bits_


def zero_eps():
    """Magnitude below which a numeric coefficient counts as noise."""
    if _ZERO_EPS_BITS is not None:
        return mp.mpf(2) ** -_ZERO_EPS_BITS
    return mp.mpf(2) ** -(mp.prec // 2)


def to_mpf(x):
    if isinstance(x, Fraction):
        # correctly rounded in one step (mpf(num)/den would round twice)
        return mp.make_mpf(mpmath.libmp.from_rational(
            x.numerator, x.denominator, mp.prec, mpmath.libmp.round_nearest))
    return mp.mpf(x)


def to_mpc(x):
    if isinstance(x, Fraction):
        return mp.mpc(to_mpf(x))
    if isinstance(x, GaussianRational):
        return mp.mpc(to_mpf(x.re), to_mpf(x.im))
    return mp.mpc(x)


def is_exact(c) -> bool:
    return isinstance(c, (int, Fraction, GaussianRational))


def is_negligible(c, eps=None) -> bool:
    """Zero test: exact scalars exactly, numeric ones against a threshold."""
    if isinstance(c, (int, Fraction)):
        return c == 0
    if isinstance(c, GaussianRational):
        return c.re == 0 and c.im == 0
    if eps is None:
        eps = zero_eps()
    return abs(c) < eps


def conj_scalar(c):
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, GaussianRational):
        return GaussianRational(c.re, -c.im)
    return mpmath.conj(c)


class GaussianRational:
    """Exact a + b*i with rational a, b.  Supports field arithmetic with
    ints and Fractions; never coerces to floats."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


class Alpha:
    """The positive real multiplier of the twist x -> alpha*x.

    Stored exactly as a Fraction whenever possible so that the alpha == 1
    test and integer powers stay exact; rational powers materialize lazily
    to big floats at the ambient precision.  A non-real value is accepted
    only with ``allow_complex=True`` (diagnostic mode: the factorization
    guarantees do not apply there).
    """

    __slots__ = ("exact", "numeric", "allow_complex")

    def __init__(self, value, allow_complex: bool = False):
        self.allow_complex = allow_complex
        self.exact = None
        self.numeric = None
        if isinstance(value, Alpha):
            self.exact = value.exact
            self.numeric = value.numeric
            self.allow_complex = allow_complex or value.allow_complex
            value = None
        elif isinstance(value, (int, Fraction)):
            self.exact = Fraction(value)
        elif isinstance(value, str):
            self.exact = Fraction(value)
        elif isinstance(value, GaussianRational):
            if value.im == 0:
                self.exact = value.re
            else:
                self.numeric = to_mpc(value)
        else:
            z = mp.mpc(value)
            if z.imag == 0:
                self.numeric = z.real
            else:
                self.numeric = z
        if self.exact is not None and self.exact <= 0:
            raise UsageError("alpha must be a positive real (or complex with allow_complex)")
        if self.numeric is not None and isinstance(self.numeric, mp.mpc) and not allow_complex:
            raise UsageError("complex alpha requires allow_complex=True")
        if self.numeric is not None and self.numeric == 0:
            raise UsageError("alpha must be nonzero")

    @property
    def is_one(self) -> bool:
        return self.exact == 1

    @property
    def is_real_positive(self) -> bool:
        if self.exact is not None:
            return self.exact > 0
        return not isinstance(self.numeric, mp.mpc) and self.numeric > 0

    def real_value(self):
        if self.exact is not None:
            return to_mpf(self.exact)
        return self.numeric

    def pow(self, q: Fraction):
        """alpha**q for rational q; exact Fraction result when possible."""
        q = Fraction(q)
        if self.exact is not None:
            if self.exact == 1 or q == 0:
                return Fraction(1)
            if q.denominator == 1:
                return self.exact ** q.numerator
            base = to_mpf(self.exact)
            return mp.power(base, to_mpf(q))
        if not isinstance(self.numeric, mp.mpc):
            return mp.power(self.numeric, to_mpf(q))
        # polar convention: (r e^{i theta})^q = r^q e^{i theta q}, theta in (-pi, pi]
        r, theta = mpmath.polar(self.numeric)
        qf = to_mpf(q)
        return mp.power(r, qf) * mp.mpc(mp.cos(theta * qf), mp.sin(theta * qf))

    def __eq__(self, other):
        if not isinstance(other, Alpha):
            return NotImplemented
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        return self.real_value() == other.real_value() if self.numeric is not None else False

    def __repr__(self):
        if self.exact is not None:
            return f"Alpha({self.exact})"
        return f"Alpha({self.numeric})"


def alpha_pow(alpha, q):
    """Power alpha**q of the twist multiplier, as exact value or big float."""
    if not isinstance(alpha, Alpha):
        alpha = Alpha(alpha)
    return alpha.pow(q)


# ---------------------------------------------------------------------------
# deterministic formatting


def _fmt_mpf(x) -> str:
    if mpmath.isnan(x) or mpmath.isinf(x):
        return str(x)
    if x == int(x) and abs(x) < mp.mpf(10) ** 18:
        return str(int(x))
    digits = int(mp.prec / 3.321928) + 3
    s = mp.nstr(x, digits, strip_zeros=True)
    return s


def fmt_scalar(c) -> str:
    """Canonical text form of a coefficient; parses back to the same value."""
    if isinstance(c, int):
        return str(c)
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, GaussianRational):
        re, im = c.re, c.im
        if im == 0:
            return fmt_scalar(re)
        if re == 0:
            return f"{fmt_scalar(im)}i"
        sign = "+" if im > 0 else "-"
        return f"{fmt_scalar(re)}{sign}{fmt_scalar(abs(im))}i"
    z = mp.mpc(c)
    re, im = z.real, z.imag
    if im == 0:
        return _fmt_mpf(re)
    if re == 0:
        return f"{_fmt_mpf(im)}i"
    sign = "+" if im >= 0 else "-"
    return f"{_fmt_mpf(re)}{sign}{_fmt_mpf(abs(im))}i"


def fmt_exponent(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"
