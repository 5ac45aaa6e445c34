"""Instability-zone lengths from the reduced 2x2 system's lattice-walk series.

For zone index n the off-corner entry of the reduced system is a sum over
lattice walks between the resonant sites -n and +n; the diagonal entry sums
walks returning to the start.  Each order-k term is a k-fold sum of products
V(step)/(n^2 - j^2 + z) over interior sites j != +-n, which a transfer
(dynamic-programming) recursion evaluates in O(depth * J * K) instead of
enumerating exponentially many walks.

The two zone edges solve the split fixed-point equations
    z = Re(diag(z)) +- |offdiag(z)|,
and the gap is the difference of the two solutions, sandwiched by the
two-sided bound 2*|offdiag| * (1 -+ 3*norm^2/n^2) inside the validity region
9*norm <= n.
"""
import json
from dataclasses import dataclass, field

import gmpy2

from . import mpx
from .errors import (ValidityRegion, TailNotConverged, NoContraction,
                     ImaginaryResidue, BoundViolated)
from .potential import Potential, l2_norm
from .spectrum import SpectrumSlice


@dataclass
class SEntries:
    """Series values at one (n, z): diagonal alpha_n and off-corners s21/s12.

    s11 and s22 are accumulated by two independent recursions and agree to the
    truncation tail; alpha_n is the s11 stream.  order_terms/order21 record the
    per-order contributions actually summed (for diagnostics and order tests).
    """
    n: int
    z: object
    alpha_n: object
    s21: object
    s12: object
    depth_used: int
    lattice_cut: int
    s22: object = None
    in_validity_region: bool = True
    order21: list = field(default_factory=list, repr=False)


def _dp_engine(v, n, z, depth, J, prec, stop_rel=None, trace=None):
    """Accumulate series orders 0..depth on the lattice (n+2Z) cap [-J, J] minus {+-n}.

    Two amplitude streams share the transfer kernel
        new(j) = w(j) * sum_m V(m) * old(j - m),     w(j) = 1/(n^2 - j^2 + z):
    the A-stream is seeded with the walk factor entering from +n's side,
    V(j+n)*w(j), and contracts against V(n-j) (s21 orders) and V(-n-j) (s11);
    the B-stream is seeded with V(j-n)*w(j) and contracts against V(n-j) (s22)
    and V(-n-j) (s12).  With stop_rel set, iteration ends early once two
    consecutive orders contribute below stop_rel relative to the running sums.
    """
    with mpx.ctx(prec):
        zr = gmpy2.mpfr(z)
        sites = [j for j in range(-J, J + 1)
                 if (j - n) % 2 == 0 and j != n and j != -n]
        idx = {j: i for i, j in enumerate(sites)}
        w = [1 / (n * n - j * j + zr) for j in sites]
        freqs = list(v.coeffs.items())

        zero = gmpy2.mpc(0)
        s11 = gmpy2.mpc(0)
        s22 = gmpy2.mpc(0)
        s21 = gmpy2.mpc(v.coeff(2 * n))
        s12 = gmpy2.mpc(v.coeff(-2 * n))
        order21 = [s21]
        if trace is not None:
            trace.write(json.dumps({"k": 0, "partial_s21": str(s21)}) + "\n")

        A = [v.coeff(j + n) * w[i] for i, j in enumerate(sites)]
        B = [v.coeff(j - n) * w[i] for i, j in enumerate(sites)]

        depth_used = 0
        small_streak = 0
        for k in range(1, depth + 1):
            t21 = zero
            t11 = zero
            t22 = zero
            t12 = zero
            for i, j in enumerate(sites):
                a = A[i]
                b = B[i]
                if a != 0:
                    t21 += v.coeff(n - j) * a
                    t11 += v.coeff(-n - j) * a
                if b != 0:
                    t22 += v.coeff(n - j) * b
                    t12 += v.coeff(-n - j) * b
            s21 += t21
            s11 += t11
            s22 += t22
            s12 += t12
            order21.append(t21)
            depth_used = k
            if trace is not None:
                trace.write(json.dumps({"k": k, "partial_s21": str(s21)}) + "\n")
            if stop_rel is not None:
                scale = max(abs(s21), abs(s11), gmpy2.mpfr(2) ** (-(prec - 4)))
                if max(abs(t21), abs(t11), abs(t22), abs(t12)) <= stop_rel * scale:
                    small_streak += 1
                    if small_streak >= 2:
                        break
                else:
                    small_streak = 0
            if k == depth:
                break
            # kernel step for both streams
            newA = [zero] * len(sites)
            newB = [zero] * len(sites)
            for i, j in enumerate(sites):
                accA = zero
                accB = zero
                for m, Vm in freqs:
                    src = idx.get(j - m)
                    if src is not None:
                        a = A[src]
                        if a != 0:
                            accA += Vm * a
                        b = B[src]
                        if b != 0:
                            accB += Vm * b
                if accA != 0:
                    newA[i] = accA * w[i]
                if accB != 0:
                    newB[i] = accB * w[i]
            A = newA
            B = newB

        return SEntries(n, zr, s11, s21, s12, depth_used, J, s22=s22,
                        order21=order21)


def s_entries(v: Potential, n: int, z, depth: int, J: int, *,
              tail_tol=None, strict=False, trace=None) -> SEntries:
    """Series entries at (n, z) truncated at the given order and lattice cut.

    The contraction hypothesis 9*norm <= n is recorded in in_validity_region;
    with strict=True it is enforced instead.  A tail check runs only when
    tail_tol is given (low-depth evaluations are legitimate otherwise).
    """
    prec = v.precision_bits
    norm = l2_norm(v)
    valid = 9 * norm <= n
    if strict and not valid:
        raise ValidityRegion("9*norm = %s exceeds n = %d" % (norm, n))
    if abs(gmpy2.mpfr(z)) > 1:
        raise ValidityRegion("|z| must be <= 1, got %s" % z)
    K = v.half_bandwidth
    if K > 0 and J < n + 2 * K * depth:
        raise ValidityRegion("lattice cut J=%d cannot hold walks of depth %d" % (J, depth))
    ent = _dp_engine(v, n, z, depth, J, prec, trace=trace)
    ent.in_validity_region = valid
    if tail_tol is not None and len(ent.order21) > 1:
        with mpx.ctx(prec):
            tol = mpx.to_mpfr(tail_tol, prec)
            last = abs(ent.order21[-1])
            floor = gmpy2.mpfr(2) ** (-(prec - 32))
            if last > tol * max(abs(ent.s21), floor):
                raise TailNotConverged(
                    "last order %s above %s of accumulated sum" % (last, tail_tol))
    return ent


def _auto_entries(v, n, z, prec, tail_tol, trace=None):
    """Run to full working depth, stopping early once orders fall below rounding."""
    depth_cap = max(4 * n, 16, prec)
    K = max(v.half_bandwidth, 1)
    J = n + 2 * K * depth_cap
    stop_rel = gmpy2.mpfr(2) ** (-(prec - 8))
    ent = _dp_engine(v, n, z, depth_cap, J, prec, stop_rel=stop_rel, trace=trace)
    ent.in_validity_region = 9 * l2_norm(v) <= n
    with mpx.ctx(prec):
        last = abs(ent.order21[-1]) if ent.order21 else gmpy2.mpfr(0)
        floor = gmpy2.mpfr(2) ** (-(prec - 32))
        if ent.depth_used >= depth_cap and last > tail_tol * max(abs(ent.s21), floor):
            raise TailNotConverged(
                "depth cap %d hit with relative tail above %s" % (depth_cap, tail_tol))
    return ent


def _defaults(prec):
    fp_tol = gmpy2.mpfr(2) ** (-(prec - 16))
    tail_tol = gmpy2.mpfr("1e-7")
    imag_rel = gmpy2.mpfr(2) ** (-(prec - 24))
    return fp_tol, tail_tol, imag_rel


def solve_z(v: Potential, n: int, branch: str, *, max_iter=100,
            fp_tol=None, tail_tol=None, trace=None):
    """Edge offset z solving z = Re(alpha_n(z)) +- |beta_n(z)| from z = 0.

    branch "plus" gives the upper zone edge, "minus" the lower.  Plain
    fixed-point iteration; inside the validity region the map contracts at
    rate <= 2*norm^2/n^2.  Raises NoContraction past max_iter iterations and
    ImaginaryResidue if the diagonal series leaves the real line.
    """
    if branch not in ("plus", "minus"):
        raise ValueError("branch must be 'plus' or 'minus'")
    prec = v.precision_bits
    d_fp, d_tail, d_imag = _defaults(prec)
    fp_tol = d_fp if fp_tol is None else gmpy2.mpfr(fp_tol)
    tail_tol = d_tail if tail_tol is None else gmpy2.mpfr(tail_tol)
    sign = 1 if branch == "plus" else -1
    with mpx.ctx(prec):
        z = gmpy2.mpfr(0)
        for it in range(max_iter):
            ent = _auto_entries(v, n, z, prec, tail_tol)
            al = ent.alpha_n
            scale = max(abs(al), gmpy2.mpfr(1))
            if v.real_valued and abs(al.imag) > d_imag * scale:
                raise ImaginaryResidue("Im(alpha_n) = %s at z = %s" % (al.imag, z))
            z_new = al.real + sign * abs(ent.s21)
            step = z_new - z
            if trace is not None:
                trace.write(json.dumps({
                    "iter": it, "z": str(z), "alpha": str(al),
                    "abs_beta": str(abs(ent.s21)), "residual": str(step)}) + "\n")
            if abs(z_new) > 1:
                raise ValidityRegion("iterate left |z| <= 1: z = %s" % z_new)
            z = z_new
            if abs(step) <= fp_tol:
                return z
        raise NoContraction("no fixed point after %d iterations at n = %d" % (max_iter, n))


def gap_series(v: Potential, n: int, *, max_iter=100, fp_tol=None,
               tail_tol=None, trace=None) -> SpectrumSlice:
    """Zone slice from the series route: gamma = z^+ - z^-, with the sandwich check.

    Inside the validity region a failed two-sided bound raises BoundViolated;
    outside it the result only carries sandwich_ok=False (the hypothesis of
    the bound is then not granted).
    """
    prec = v.precision_bits
    d_fp, d_tail, _ = _defaults(prec)
    fp = d_fp if fp_tol is None else gmpy2.mpfr(fp_tol)
    tt = d_tail if tail_tol is None else gmpy2.mpfr(tail_tol)
    zp = solve_z(v, n, "plus", max_iter=max_iter, fp_tol=fp, tail_tol=tt, trace=trace)
    zm = solve_z(v, n, "minus", max_iter=max_iter, fp_tol=fp, tail_tol=tt, trace=trace)
    with mpx.ctx(prec):
        gamma = zp - zm
        ent = _auto_entries(v, n, zp, prec, tt)
        norm = l2_norm(v)
        b2 = 2 * abs(ent.s21)
        margin = 3 * norm * norm / (n * n)
        low = b2 * (1 - margin)
        high = b2 * (1 + margin)
        slack = 64 * fp * max(gmpy2.mpfr(1), b2)
        sandwich_ok = (gamma >= low - slack) and (gamma <= high + slack)
        degenerate = abs(gamma) <= 2 * fp
        if not sandwich_ok and ent.in_validity_region and not degenerate:
            raise BoundViolated(
                "gamma = %s outside [%s, %s] at n = %d" % (gamma, low, high, n))
        K = max(v.half_bandwidth, 1)
        flags = {"sandwich_low": low, "sandwich_high": high,
                 "sandwich_ok": sandwich_ok, "degenerate": degenerate,
                 "in_validity_region": ent.in_validity_region}
        return SpectrumSlice(n, n * n + zm, n * n + zp, gamma, "series",
                             n + 2 * K * max(4 * n, 16, prec), prec, flags)


def deriv_bound_fd_check(v: Potential, n: int, z0, h, *, depth=None) -> bool:
    """Central finite differences of alpha_n and beta_n stay within norm^2/n^2.

    Requires |z0| + h <= 1 and the validity hypothesis 9*norm <= n; the bound
    gets an O(h^2) slack of 10*h^2*(norm^2/n^2) for the difference quotient.
    """
    prec = v.precision_bits
    norm = l2_norm(v)
    with mpx.ctx(prec):
        z0 = gmpy2.mpfr(z0)
        h = gmpy2.mpfr(h)
        if abs(z0) + h > 1:
            raise ValidityRegion("|z0| + h must be <= 1")
        if 9 * norm > n:
            raise ValidityRegion("derivative bound needs 9*norm <= n")
        _, d_tail, _ = _defaults(prec)
        ep = _auto_entries(v, n, z0 + h, prec, d_tail)
        em = _auto_entries(v, n, z0 - h, prec, d_tail)
        dal = abs(ep.alpha_n - em.alpha_n) / (2 * h)
        dbe = abs(ep.s21 - em.s21) / (2 * h)
        bound = norm * norm / (n * n)
        slack = 10 * h * h * bound
        return dal <= bound + slack and dbe <= bound + slack
