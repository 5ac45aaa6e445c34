"""Multiprecision helpers on top of gmpy2.

Centralizes context handling, conversions from Python scalars (including
Fraction) and deterministic decimal formatting.  gmpy2 2.3.x has a broken
__format__ for mpfr, so scientific notation is assembled manually from
mpfr.digits().
"""
import math
from fractions import Fraction

import gmpy2

DEFAULT_PRECISION = 128


def ctx(bits):
    """Context manager setting the working precision in bits."""
    return gmpy2.context(precision=bits)


def digits_for(bits):
    """Decimal digits that round-trip an mpfr of the given precision."""
    return int(math.ceil(bits * math.log10(2))) + 3


def to_mpfr(x, bits):
    """Convert a real scalar (int, float, str, Fraction, mpfr) at the given precision."""
    with ctx(bits):
        if isinstance(x, Fraction):
            return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
        if isinstance(x, complex):
            if x.imag != 0:
                raise ValueError("complex value where a real scalar is required")
            x = x.real
        return gmpy2.mpfr(x)


def to_mpc(x, bits):
    """Convert a scalar (real or complex) to mpc at the given precision."""
    with ctx(bits):
        if isinstance(x, complex):
            return gmpy2.mpc(gmpy2.mpfr(x.real), gmpy2.mpfr(x.imag))
        if isinstance(x, gmpy2.mpc):
            return gmpy2.mpc(x)
        return gmpy2.mpc(to_mpfr(x, bits))


def sci(x, ndigits):
    """Deterministic scientific-notation string with ndigits significant digits."""
    if not isinstance(x, gmpy2.mpfr):
        # explicit precision: conversion must not round through the ambient context
        x = gmpy2.mpfr(x, int(math.ceil(ndigits * math.log2(10))) + 8)
    if gmpy2.is_nan(x):
        return "nan"
    if gmpy2.is_infinite(x):
        return "-inf" if x < 0 else "inf"
    if x == 0:
        return "0.0e+00"
    mant, exp10, _ = x.digits(10, ndigits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    # digits() returns value = 0.mant * 10**exp10
    body = mant[0] + "." + (mant[1:] or "0")
    return "%s%se%+03d" % (sign, body, exp10 - 1)


def sci_c(x, ndigits):
    """Scientific notation for a complex value as a 're+imj' pair."""
    if not isinstance(x, gmpy2.mpc):
        x = gmpy2.mpc(x, precision=int(math.ceil(ndigits * math.log2(10))) + 8)
    re = sci(x.real, ndigits)
    im = sci(x.imag, ndigits)
    if not im.startswith("-"):
        im = "+" + im
    return re + im + "j"


def factorial_exact(n):
    return math.factorial(n)


def double_factorial_exact(n):
    """n!! for n >= -1 as an exact integer ((-1)!! = 0!! = 1)."""
    if n in (-1, 0):
        return 1
    if n < -1:
        raise ValueError("double factorial needs n >= -1")
    out = 1
    for k in range(n, 0, -2):
        out *= k
    return out


def log_factorial(n, bits):
    """log(n!) at working precision; exact-path result is identical for small n."""
    with ctx(bits):
        if n <= 64:
            return gmpy2.log(gmpy2.mpfr(math.factorial(n)))
        return gmpy2.lgamma(gmpy2.mpfr(n + 1))[0]


def log_double_factorial(n, bits):
    """log(n!!) at working precision.

    For even n = 2m: n!! = 2^m m!.  For odd n = 2m-1: n!! = (2m)!/(2^m m!).
    """
    with ctx(bits):
        if n <= 64:
            return gmpy2.log(gmpy2.mpfr(double_factorial_exact(n)))
        if n % 2 == 0:
            m = n // 2
            return m * gmpy2.log(gmpy2.mpfr(2)) + log_factorial(m, bits)
        m = (n + 1) // 2
        return log_factorial(2 * m, bits) - m * gmpy2.log(gmpy2.mpfr(2)) - log_factorial(m, bits)
