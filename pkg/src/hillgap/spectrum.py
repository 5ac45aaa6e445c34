"""Periodic/antiperiodic eigenvalues of -y'' + v(x)y via truncated Fourier matrices.

The operator acts on exp(ikx) with k ranging over the even lattice (periodic
boundary conditions) or the odd lattice (antiperiodic).  The truncated matrix
is Hermitian banded: diagonal k^2, off-diagonal (k,m) entry V(k-m).  Eigenvalues
are computed by inertia-count bisection on a banded LDL^H factorization, which
stays robust at arbitrary precision: no orthogonal transforms, no accumulation,
and the ordering of eigenvalues is correct by construction.
"""
import warnings
from dataclasses import dataclass, field
from enum import Enum
from math import ceil, log2

import gmpy2

from . import mpx
from .errors import (NonRealPotential, TruncationTooSmall, ConvergenceFailure,
                     HypothesisNotMet, LocalizationViolation)
from .potential import Potential, l2_norm


class Parity(Enum):
    PER_PLUS = "per+"    # y(0) = y(pi), lattice 2Z
    PER_MINUS = "per-"   # y(0) = -y(pi), lattice 2Z - 1


def lattice_sites(parity, M):
    """Ascending lattice sites k with |k| <= M of the parity's residue class."""
    rem = 0 if parity == Parity.PER_PLUS else 1
    return [k for k in range(-M, M + 1) if (k - rem) % 2 == 0]


@dataclass
class TruncatedOperator:
    parity: Parity
    M: int
    sites: list
    diag: list            # k^2 as exact ints, ascending site order
    bands: list           # bands[r-1] = V(-2r) = entry (i, i+r), constant along the band
    half_bandwidth: int
    precision_bits: int
    real_symmetric: bool  # all band entries real

    def dimension(self):
        return len(self.sites)

    def dense(self):
        """Dense matrix (list of lists, mpc) for small-scale checks."""
        n = self.dimension()
        with mpx.ctx(self.precision_bits):
            zero = gmpy2.mpc(0)
            A = [[zero for _ in range(n)] for _ in range(n)]
            for i in range(n):
                A[i][i] = gmpy2.mpc(self.diag[i])
                for r in range(1, self.half_bandwidth + 1):
                    if i + r < n:
                        A[i][i + r] = self.bands[r - 1]
                        A[i + r][i] = self.bands[r - 1].conjugate()
            return A


def build_truncated(v: Potential, parity: Parity, M: int) -> TruncatedOperator:
    if not v.real_valued:
        raise NonRealPotential("matrix construction requires a real-valued potential")
    if M < v.degree_bound:
        raise TruncationTooSmall("M=%d below degree bound %d" % (M, v.degree_bound))
    sites = lattice_sites(parity, M)
    K = v.half_bandwidth
    bands = [v.coeff(-2 * r) for r in range(1, K + 1)]
    real_sym = all(b.imag == 0 for b in bands)
    return TruncatedOperator(parity, M, sites, [k * k for k in sites], bands,
                             K, v.precision_bits, real_sym)


def _gershgorin(op):
    with mpx.ctx(op.precision_bits + 32):
        R = gmpy2.mpfr(0)
        for b in op.bands:
            R += 2 * abs(b)
        lo = gmpy2.mpfr(min(op.diag)) - R
        hi = gmpy2.mpfr(max(op.diag)) + R
        return lo, hi


def _inertia(op, sigma, pivmin, limit=None):
    """Number of eigenvalues of the truncated matrix below sigma.

    LDL^H without pivoting on (A - sigma*I); the count of negative pivots is
    the inertia.  Zero pivots are nudged to -pivmin, which at bisection
    resolution only shifts the count at isolated points.  With `limit`, stops
    early once the count exceeds it.
    """
    n = op.dimension()
    w = op.half_bandwidth
    diag = op.diag
    complex_path = not op.real_symmetric
    if complex_path:
        bands = list(op.bands)
    else:
        bands = [b.real for b in op.bands]

    def fresh(i):
        row = [diag[i] - sigma]
        for r in range(1, w + 1):
            row.append(bands[r - 1] if i + r < n else None)
        return row

    window = {}
    neg = 0
    for j in range(n):
        row = window.pop(j, None)
        if row is None:
            row = fresh(j)
        d = row[0]
        if abs(d) <= pivmin:
            d = -pivmin
        if d < 0:
            neg += 1
            if limit is not None and neg > limit:
                return neg
        for p in range(1, w + 1):
            jp = j + p
            if jp >= n:
                break
            cjp = row[p]
            if cjp == 0:
                continue
            target = window.get(jp)
            if target is None:
                target = fresh(jp)
                window[jp] = target
            if complex_path:
                target[0] -= gmpy2.norm(cjp) / d
                fac = cjp.conjugate() / d
                for q in range(p + 1, w + 1):
                    if j + q >= n:
                        break
                    target[q - p] -= fac * row[q]
            else:
                fac = cjp / d
                for q in range(p, w + 1):
                    if j + q >= n:
                        break
                    target[q - p] -= fac * row[q]
    return neg


def eigenvalues(op: TruncatedOperator, first=None):
    """Ascending eigenvalues (all, or the lowest `first`) by bisection.

    Each eigenvalue is located to absolute tolerance 2^-(prec-8) * max(1, |lambda|).
    """
    n = op.dimension()
    want = n if first is None else min(first, n)
    prec = op.precision_bits
    with mpx.ctx(prec + 32):
        lo0, hi0 = _gershgorin(op)
        scale = max(abs(lo0), abs(hi0), gmpy2.mpfr(1))
        pivmin = scale * gmpy2.mpfr(2) ** (-(prec + 64))
        eps = gmpy2.mpfr(2) ** (-(prec - 8))
        out = []
        prev = lo0
        for k in range(want):
            a, b = prev, hi0
            # inertia(b) >= n >= k+1 always at the upper Gershgorin bound
            it = 0
            while b - a > eps * max(gmpy2.mpfr(1), abs(a), abs(b)):
                it += 1
                if it > prec + 160:
                    raise ConvergenceFailure(
                        "bisection stalled at eigenvalue index %d" % k)
                mid = (a + b) / 2
                if _inertia(op, mid, pivmin, limit=k + 1) >= k + 1:
                    b = mid
                else:
                    a = mid
            lam = (a + b) / 2
            out.append(lam)
            prev = a
        return out


@dataclass
class SpectrumSlice:
    """One instability zone: lambda_n^- <= lambda_n^+ with gamma_n = difference."""
    n: int
    lambda_minus: object
    lambda_plus: object
    gamma: object
    method: str
    M_used: int
    precision_bits: int
    flags: dict = field(default_factory=dict, compare=False)


def default_precision(v: Potential, n_max: int) -> int:
    """Working precision keeping gamma_n above the eigenvalue-resolution floor.

    With two-term provenance, gamma_n shrinks like (|alpha|/2)^n, so the rule
    64 + ceil(n_max*log2(2/|alpha|)) + 4*n_max keeps it resolvable near n^2;
    otherwise 128 bits.
    """
    prov = v.provenance
    if prov.get("kind") == "two_term":
        a = abs(complex(prov["alpha"]))
        if a > 0:
            bits = 64 + ceil(n_max * log2(2.0 / a)) + 4 * n_max
            return max(64, bits, v.precision_bits)
    return max(128, v.precision_bits)


def _pair_slices(v, n_max, M, prec, norm):
    vp = v if v.precision_bits == prec else Potential(v.coeffs, prec, v.provenance)
    ev = {}
    for parity in (Parity.PER_PLUS, Parity.PER_MINUS):
        op = build_truncated(vp, parity, M)
        ev[parity] = eigenvalues(op, first=n_max + 1)
    with mpx.ctx(prec + 32):
        floor_deg = gmpy2.mpfr(2) ** (-(prec - 8))
        use_loc = norm <= 0.25
        slices = []
        for n in range(1, n_max + 1):
            evs = ev[Parity.PER_PLUS] if n % 2 == 0 else ev[Parity.PER_MINUS]
            lm, lp = evs[n - 1], evs[n]
            gamma = lp - lm
            flags = {}
            if gamma < floor_deg * max(gmpy2.mpfr(1), gmpy2.mpfr(n * n)):
                flags["degenerate"] = True
            if use_loc:
                # computed edges carry bisection residue, so the disc radius
                # gets the same resolution floor as the degeneracy test
                slack = floor_deg * max(gmpy2.mpfr(1), gmpy2.mpfr(n * n))
                ok = (abs(lm - n * n) <= 4 * norm + slack) and \
                    (abs(lp - n * n) <= 4 * norm + slack)
                flags["localization_ok"] = ok
                if not ok:
                    warnings.warn("localization bound failed at n=%d" % n,
                                  LocalizationViolation)
            slices.append(SpectrumSlice(n, lm, lp, gamma, "matrix", M, prec, flags))
        return slices


def spectrum_slices(v: Potential, n_max: int, rel_tol, *,
                    precision_bits=None, max_doublings=8):
    """Slices for n = 1..n_max, with truncation doubled until gaps stabilize.

    Starting from M0 = max(2*n_max, degree_bound + 16), M is doubled until
    every gamma_n changes by at most rel_tol * max(gamma_n, floor), where
    floor = 2^-(prec-16) absorbs gaps below resolution.
    """
    if not v.real_valued:
        raise NonRealPotential("spectrum requires a real-valued potential")
    prec = precision_bits if precision_bits is not None else default_precision(v, n_max)
    norm = l2_norm(Potential(v.coeffs, prec, v.provenance))
    M = max(2 * n_max, v.degree_bound + 16)
    prev = _pair_slices(v, n_max, M, prec, norm)
    with mpx.ctx(prec + 32):
        floor = gmpy2.mpfr(2) ** (-(prec - 16))
        tol = gmpy2.mpfr(rel_tol)
        for _ in range(max_doublings):
            M *= 2
            cur = _pair_slices(v, n_max, M, prec, norm)
            # a gap is stable when it moved by less than rel_tol relatively,
            # or by less than the eigenvalue-resolution floor absolutely
            stable = all(abs(c.gamma - p.gamma)
                         <= max(tol * abs(c.gamma),
                                floor * max(gmpy2.mpfr(1), gmpy2.mpfr(c.n * c.n)))
                         for c, p in zip(cur, prev))
            if stable:
                return cur
            prev = cur
    raise ConvergenceFailure("gaps did not stabilize up to M=%d" % M)


def localization_check(slc: SpectrumSlice, norm) -> bool:
    """|lambda_n^+- - n^2| <= 4*norm; meaningful only under norm <= 1/4."""
    if norm > 0.25:
        raise HypothesisNotMet("localization check needs l2 norm <= 1/4")
    n2 = slc.n * slc.n
    if slc.n == 0:
        return abs(slc.lambda_minus) <= 4 * norm and abs(slc.lambda_plus) <= 4 * norm
    return (abs(slc.lambda_minus - n2) <= 4 * norm
            and abs(slc.lambda_plus - n2) <= 4 * norm)


def slices_to_csv(slices) -> str:
    """CSV report: full working precision, scientific notation."""
    lines = ["n,lambda_minus,lambda_plus,gamma,method,M_used,precision_bits"]
    for s in slices:
        nd = mpx.digits_for(s.precision_bits)
        lines.append("%d,%s,%s,%s,%s,%d,%d" % (
            s.n, mpx.sci(s.lambda_minus, nd), mpx.sci(s.lambda_plus, nd),
            mpx.sci(s.gamma, nd), s.method, s.M_used, s.precision_bits))
    return "\n".join(lines) + "\n"
