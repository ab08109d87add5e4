import random
from fractions import Fraction

import pytest
from mpmath import mp

from skewpuiseux import PuiseuxSeries, SkewPoly, bits, puiseux_ring

PREC = 128


@pytest.fixture(autouse=True)
def working_precision():
    with bits(PREC):
        yield


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def rand_coeff(rnd, scale=2.0):
    return mp.mpc(rnd.uniform(-scale, scale), rnd.uniform(-scale, scale))


def rand_series(rnd, L=1, lo=0, hi=3, nterms=3, scale=2.0) -> PuiseuxSeries:
    span = list(range(lo * L, hi * L + 1))
    ks = rnd.sample(span, min(nterms, len(span)))
    return PuiseuxSeries(L, {k: rand_coeff(rnd, scale) for k in ks})


def rand_poly(ring, rnd, deg=2, L=None, lo=0, hi=3, nterms=3) -> SkewPoly:
    L = L or getattr(ring, "L", 1)
    coeffs = [rand_series(rnd, L, lo, hi, nterms) for _ in range(deg)]
    coeffs.append(PuiseuxSeries.one(L))
    return SkewPoly(ring, coeffs)


def rand_alpha(rnd):
    return rnd.choice([Fraction(2), Fraction(3, 2), Fraction(1, 2)])


def max_dev(a, b):
    return (a - b).max_abs()


def tol_bits(k: int):
    return mp.mpf(2) ** -k
