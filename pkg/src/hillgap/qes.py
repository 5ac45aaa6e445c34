"""Tridiagonal recurrence systems for the two-frequency family.

Expanding eigenfunctions as exp(-alpha*cos2x) times a cosine or sine series
turns the eigenvalue problem into a three-term recurrence on the series
coefficients, one tridiagonal system per symmetry class.  At integer values of
the shape parameter a super- or sub-diagonal entry vanishes and the system
block-triangularizes: the finite block's eigenvalues are then exact operator
eigenvalues, and whole families of instability zones close.

The recurrence eigenvalues mu relate to operator eigenvalues by
lambda = mu - 2*alpha^2.
"""
from dataclasses import dataclass, field
from enum import Enum

import gmpy2
import numpy as np

from . import mpx
from .errors import ComplexLeak, ConvergenceFailure, RangeError
from .potential import TwoTermParams, from_two_term
from .spectrum import spectrum_slices, default_precision


class Symmetry(Enum):
    """Which trigonometric series multiplies the exponential prefactor."""
    PER_EVEN_COS = "per_even_cos"
    PER_ODD_SIN = "per_odd_sin"
    ANTI_COS = "anti_cos"
    ANTI_SIN = "anti_sin"


@dataclass
class RecurrenceSystem:
    """One truncated tridiagonal system: rows indexed by the frequencies ks.

    sub[i] couples row i to row i-1 (sub[0] unused), sup[i] couples row i to
    row i+1 (sup[-1] dropped by truncation).
    """
    symmetry: Symmetry
    alpha: object
    t: object
    M: int
    ks: list
    diag: list
    sub: list
    sup: list
    precision_bits: int

    def dense(self):
        with mpx.ctx(self.precision_bits):
            a = [[gmpy2.mpfr(0)] * self.M for _ in range(self.M)]
            for i in range(self.M):
                a[i][i] = self.diag[i]
                if i > 0:
                    a[i][i - 1] = self.sub[i]
                if i + 1 < self.M:
                    a[i][i + 1] = self.sup[i]
            return a


def build_recurrence(symmetry: Symmetry, alpha, t, M: int,
                     precision_bits: int = 128) -> RecurrenceSystem:
    """Truncated recurrence for one symmetry class, M rows.

    Generic row at frequency k: sub = 2*alpha*(t-1+k), diag = k^2,
    sup = 2*alpha*(t-1-k).  Three rows differ: the even-cosine row k = 2 has
    sub = 4*alpha*(t+1) (the constant mode feeds it twice), and the k = 1
    rows pick up -+2*alpha*t on the diagonal from the cos2x product
    (anti_cos: 1 + 2*alpha*t, anti_sin: 1 - 2*alpha*t).
    """
    if M < 4:
        raise RangeError("need M >= 4 rows")
    symmetry = Symmetry(symmetry)
    with mpx.ctx(precision_bits):
        a = gmpy2.mpfr(alpha)
        tt = gmpy2.mpfr(t)
        if symmetry is Symmetry.PER_EVEN_COS:
            ks = [2 * i for i in range(M)]
        elif symmetry is Symmetry.PER_ODD_SIN:
            ks = [2 * i + 2 for i in range(M)]
        else:
            ks = [2 * i + 1 for i in range(M)]
        diag = []
        sub = []
        sup = []
        for k in ks:
            d = gmpy2.mpfr(k * k)
            lo = 2 * a * (tt - 1 + k)
            hi = 2 * a * (tt - 1 - k)
            if symmetry is Symmetry.PER_EVEN_COS and k == 2:
                lo = 4 * a * (tt + 1)
            if symmetry is Symmetry.ANTI_COS and k == 1:
                d = d + 2 * a * tt
            if symmetry is Symmetry.ANTI_SIN and k == 1:
                d = d - 2 * a * tt
            diag.append(d)
            sub.append(lo)
            sup.append(hi)
        sub[0] = gmpy2.mpfr(0)
        return RecurrenceSystem(symmetry, a, tt, M, ks, diag, sub, sup,
                                precision_bits)


def _charpoly_newton(sys: RecurrenceSystem, seed, prec):
    """Polish one eigenvalue seed by Newton on the tridiagonal char poly.

    D_0 = d_0 - mu, D_i = (d_i - mu) D_{i-1} - sub_i sup_{i-1} D_{i-2}, with
    the parallel derivative recurrence.
    """
    with mpx.ctx(prec):
        mu = gmpy2.mpfr(seed)
        tol = gmpy2.mpfr(2) ** (-(prec - 8))
        off = [sys.sub[i] * sys.sup[i - 1] for i in range(sys.M)]
        for _ in range(prec):
            d_prev2, d_prev = gmpy2.mpfr(1), sys.diag[0] - mu
            p_prev2, p_prev = gmpy2.mpfr(0), gmpy2.mpfr(-1)
            for i in range(1, sys.M):
                di = sys.diag[i] - mu
                d_cur = di * d_prev - off[i] * d_prev2
                p_cur = -d_prev + di * p_prev - off[i] * p_prev2
                d_prev2, d_prev = d_prev, d_cur
                p_prev2, p_prev = p_prev, p_cur
            if p_prev == 0:
                break
            step = d_prev / p_prev
            mu = mu - step
            if abs(step) <= tol * max(gmpy2.mpfr(1), abs(mu)):
                return mu
        raise ConvergenceFailure("Newton polish stalled near mu = %s" % mu)


def mu_spectrum(sys: RecurrenceSystem, first=None, *, leak_tol=1e-8):
    """Sorted recurrence eigenvalues, float64-seeded then Newton-polished.

    The truncated system is not symmetric, so complex seed pairs can appear;
    any with |Im| above leak_tol * max(1, |mu|) raise ComplexLeak, smaller
    ones are flattened to the real line before polishing.
    """
    m = np.zeros((sys.M, sys.M))
    for i in range(sys.M):
        m[i, i] = float(sys.diag[i])
        if i > 0:
            m[i, i - 1] = float(sys.sub[i])
        if i + 1 < sys.M:
            m[i, i + 1] = float(sys.sup[i])
    seeds = np.linalg.eigvals(m)
    bad = [z for z in seeds
           if abs(z.imag) > leak_tol * max(1.0, abs(z))]
    if bad:
        raise ComplexLeak("non-real recurrence eigenvalues, worst = %s"
                          % max(bad, key=lambda z: abs(z.imag)))
    seeds = sorted(float(z.real) for z in seeds)
    if first is not None:
        seeds = seeds[:first]
    return [_charpoly_newton(sys, s, sys.precision_bits) for s in seeds]


def lambda_spectrum(sys: RecurrenceSystem, first=None, *, leak_tol=1e-8):
    """Operator eigenvalues from the recurrence: lambda = mu - 2*alpha^2."""
    mus = mu_spectrum(sys, first, leak_tol=leak_tol)
    with mpx.ctx(sys.precision_bits):
        shift = 2 * sys.alpha * sys.alpha
        return [mu - shift for mu in mus]


@dataclass
class ZoneVerdict:
    n: int
    parity: str
    gamma: object
    verdict: str
    method: str
    tol: object


@dataclass
class ScanReport:
    """Closed-versus-open verdicts for zones 1..n_max at one (alpha, t)."""
    alpha: object
    t: object
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n,parity,gamma,verdict,method,tol"]
        for r in self.rows:
            lines.append("%d,%s,%s,%s,%s,%s" % (
                r.n, r.parity, mpx.sci(r.gamma, 25), r.verdict, r.method,
                mpx.sci(r.tol, 8)))
        return "\n".join(lines) + "\n"


def closed_gap_scan(alpha, t, n_max, *, tol=None, precision_bits=192,
                    method="matrix") -> ScanReport:
    """Which instability zones close at this (alpha, t).

    Integer |t| makes a super-diagonal entry vanish, so a whole parity family
    of zones collapses; the scan just measures every gamma_n and compares with
    tol (default 2^-(precision_bits/2)).  Zone lengths are even in t, so only
    |t| matters.
    """
    prec = precision_bits
    with mpx.ctx(prec):
        if tol is None:
            tol = gmpy2.mpfr(2) ** (-(prec // 2))
        else:
            tol = gmpy2.mpfr(tol)
        params = TwoTermParams(alpha, abs(gmpy2.mpfr(t)), precision_bits=prec)
        v = from_two_term(params)
        if method == "series":
            from .gapseries import gap_series
            slices = [gap_series(v, n) for n in range(1, n_max + 1)]
        else:
            slices = spectrum_slices(v, n_max, gmpy2.mpfr(2) ** (-(prec // 2 + 8)),
                                     precision_bits=prec)
        report = ScanReport(gmpy2.mpfr(alpha), gmpy2.mpfr(t))
        for s in slices:
            parity = "per+" if s.n % 2 == 0 else "per-"
            verdict = "closed" if abs(s.gamma) < tol else "open"
            report.rows.append(ZoneVerdict(s.n, parity, s.gamma, verdict,
                                           method, tol))
        return report
