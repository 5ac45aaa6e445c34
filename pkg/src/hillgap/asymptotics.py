"""Closed-form zone-length predictions and ratio diagnostics.

Two regimes for the two-frequency family: the small-coupling limit, where the
n-th zone length is an explicit degree-n monomial in the coupling times a
factored polynomial in the shape parameter, and the large-index limit, where
the factored polynomial collapses to trigonometric factors via its infinite
product.  A Gamma-function tail product ties the two regimes together exactly.
"""
from dataclasses import dataclass, field

import gmpy2

from . import mpx
from .errors import RangeError
from .gapseries import gap_series
from .potential import TwoTermParams, from_two_term
from .spectrum import spectrum_slices, default_precision


@dataclass
class GapPrediction:
    """A predicted zone length, with the regime and inputs that produced it."""
    n: int
    value: object
    regime: str
    inputs: dict = field(default_factory=dict, compare=False)


def predict_alpha_to_zero(alpha, t, n, precision_bits=128) -> GapPrediction:
    """Leading zone length as the coupling tends to zero.

    Even n: 8*|alpha|^n / (2^n ((n-1)!)^2) * |prod_{k<=n/2} (t^2 - (2k-1)^2)|;
    odd n carries t and squared even integers instead.
    """
    if n < 1:
        raise RangeError("need n >= 1")
    with mpx.ctx(precision_bits):
        a = abs(gmpy2.mpc(alpha))
        tt = gmpy2.mpfr(t)
        fac = mpx.factorial_exact(n - 1)
        val = 8 * a ** n / (2 ** n * fac * fac)
        if n % 2 == 0:
            for k in range(1, n // 2 + 1):
                val *= abs(tt * tt - (2 * k - 1) ** 2)
        else:
            val *= abs(tt)
            for k in range(1, (n - 1) // 2 + 1):
                val *= abs(tt * tt - (2 * k) ** 2)
        return GapPrediction(n, val, "alpha_to_zero",
                             {"alpha": alpha, "t": t,
                              "precision_bits": precision_bits})


def predict_n_to_infty(alpha, t, n, precision_bits=128) -> GapPrediction:
    """Leading zone length as the index grows, coupling fixed.

    Even n: 8*|alpha|^n / (2^n ((n-2)!!)^2) * |cos(pi t / 2)|; odd n swaps the
    cosine for (2/pi)*|sin(pi t / 2)|.  Needs n >= 3.
    """
    if n < 3:
        raise RangeError("large-index prediction needs n >= 3")
    with mpx.ctx(precision_bits):
        a = abs(gmpy2.mpc(alpha))
        tt = gmpy2.mpfr(t)
        dfac = mpx.double_factorial_exact(n - 2)
        val = 8 * a ** n / (2 ** n * dfac * dfac)
        half_pi_t = gmpy2.const_pi() * tt / 2
        if n % 2 == 0:
            val *= abs(gmpy2.cos(half_pi_t))
        else:
            val *= 2 / gmpy2.const_pi() * abs(gmpy2.sin(half_pi_t))
        return GapPrediction(n, val, "n_to_infty",
                             {"alpha": alpha, "t": t,
                              "precision_bits": precision_bits})


def predict_coeff_form(a1, a2, n, precision_bits=128) -> GapPrediction:
    """Small-coupling zone length straight from the two Fourier coefficients.

    a1 and a2 are the frequency-2 and frequency-4 coefficients of the
    potential.  Even n: 8/(2^n ((n-1)!)^2) * |prod_{k<=n/2} (a1^2/4 + (2k-1)^2 a2)|;
    odd n carries an extra |a1/2| and squared even integers.
    """
    if n < 1:
        raise RangeError("need n >= 1")
    with mpx.ctx(precision_bits):
        c1 = gmpy2.mpfr(a1)
        c2 = gmpy2.mpfr(a2)
        fac = mpx.factorial_exact(n - 1)
        val = gmpy2.mpfr(8) / (2 ** n * fac * fac)
        if n % 2 == 0:
            for k in range(1, n // 2 + 1):
                val *= abs(c1 * c1 / 4 + (2 * k - 1) ** 2 * c2)
        else:
            val *= abs(c1 / 2)
            for k in range(1, (n - 1) // 2 + 1):
                val *= abs(c1 * c1 / 4 + (2 * k) ** 2 * c2)
        return GapPrediction(n, val, "coeff_form",
                             {"a1": a1, "a2": a2,
                              "precision_bits": precision_bits})


def tail_product(t, k_start, precision_bits=128):
    """prod_{k >= k_start} (1 - t^2/(2k-1)^2), evaluated by Gamma functions.

    With a = -(1+t)/2, b = -(1-t)/2, c = -1/2 the product telescopes to
    Gamma(k_start+c)^2 / (Gamma(k_start+a) * Gamma(k_start+b)).  Requires
    2*k_start - 1 > |t| so no factor vanishes.
    """
    with mpx.ctx(precision_bits):
        tt = gmpy2.mpfr(t)
        if 2 * k_start - 1 <= abs(tt):
            raise RangeError("tail product needs 2*k_start - 1 > |t|")
        a = -(1 + tt) / 2
        b = -(1 - tt) / 2
        c = gmpy2.mpfr(-0.5)
        return (gmpy2.gamma(k_start + c) ** 2
                / (gmpy2.gamma(k_start + a) * gmpy2.gamma(k_start + b)))


@dataclass
class RatioRow:
    n: int
    alpha: object
    gamma: object
    predicted: object
    ratio: object
    ratio_error: object
    scaled_error: object = None
    indeterminate: bool = False


@dataclass
class RatioReport:
    """Computed-over-predicted diagnostics for one of the two regimes.

    Ladder mode halves the coupling and reports per-n error quotients between
    consecutive rungs; sweep mode walks the index at one coupling and reports
    the error scaled by n/log(n).
    """
    mode: str
    t: object
    rows: list
    quotients: list = field(default_factory=list)

    def to_csv(self) -> str:
        if self.mode == "alpha_ladder":
            lines = ["n,alpha,gamma,predicted,ratio,ratio_error"]
        else:
            lines = ["n,alpha,gamma,predicted,ratio,ratio_error,scaled_error"]
        for r in self.rows:
            cells = [str(r.n), mpx.sci(r.alpha, 17), mpx.sci(r.gamma, 25),
                     mpx.sci(r.predicted, 25)]
            if r.indeterminate:
                cells += ["indeterminate", ""]
            else:
                cells += [mpx.sci(r.ratio, 17), mpx.sci(r.ratio_error, 17)]
            if self.mode != "alpha_ladder":
                cells.append("" if r.scaled_error is None else mpx.sci(r.scaled_error, 17))
            lines.append(",".join(cells))
        if self.quotients:
            lines.append("")
            lines.append("n,alpha_hi,alpha_lo,error_quotient")
            for q in self.quotients:
                lines.append("%d,%s,%s,%s" % (
                    q["n"], mpx.sci(q["alpha_hi"], 17), mpx.sci(q["alpha_lo"], 17),
                    "" if q["quotient"] is None else mpx.sci(q["quotient"], 17)))
        return "\n".join(lines) + "\n"


def _gammas(alpha, t, n_values, method, prec, rel_tol):
    params = TwoTermParams(alpha, t, precision_bits=prec)
    v = from_two_term(params)
    n_max = max(n_values)
    if method == "series":
        return {n: gap_series(v, n).gamma for n in n_values}
    slices = spectrum_slices(v, n_max, rel_tol, precision_bits=prec)
    return {n: slices[n - 1].gamma for n in n_values}


def ratio_report(t, n_values, *, alpha=None, alpha_ladder=None,
                 method="matrix", precision_bits=None,
                 rel_tol="1e-9") -> RatioReport:
    """Computed gaps against the matching closed-form regime.

    Exactly one of alpha (index sweep, large-index predictions) or
    alpha_ladder (shrinking-coupling ladder, small-coupling predictions) must
    be given.  Zero predictions flag the row indeterminate rather than divide.
    """
    if (alpha is None) == (alpha_ladder is None):
        raise ValueError("give exactly one of alpha or alpha_ladder")
    n_values = sorted(n_values)
    if alpha_ladder is not None:
        rows = []
        errs = {}
        for a in alpha_ladder:
            prec = precision_bits
            if prec is None:
                probe = from_two_term(TwoTermParams(a, t))
                prec = default_precision(probe, max(n_values)) + 64
            gam = _gammas(a, t, n_values, method, prec, rel_tol)
            with mpx.ctx(prec):
                for n in n_values:
                    pred = predict_alpha_to_zero(a, t, n, prec)
                    row = RatioRow(n, gmpy2.mpfr(a), gam[n], pred.value, None, None)
                    if pred.value == 0:
                        row.indeterminate = True
                    else:
                        row.ratio = gam[n] / pred.value
                        row.ratio_error = abs(row.ratio - 1)
                        errs[(a, n)] = row.ratio_error
                    rows.append(row)
        quotients = []
        for a_hi, a_lo in zip(alpha_ladder, alpha_ladder[1:]):
            for n in n_values:
                e_hi = errs.get((a_hi, n))
                e_lo = errs.get((a_lo, n))
                q = None
                if e_hi is not None and e_lo is not None and e_lo > 0:
                    q = e_hi / e_lo
                quotients.append({"n": n, "alpha_hi": gmpy2.mpfr(a_hi),
                                  "alpha_lo": gmpy2.mpfr(a_lo), "quotient": q})
        return RatioReport("alpha_ladder", t, rows, quotients)

    prec = precision_bits
    if prec is None:
        probe = from_two_term(TwoTermParams(alpha, t))
        prec = default_precision(probe, max(n_values)) + 64
    gam = _gammas(alpha, t, n_values, method, prec, rel_tol)
    rows = []
    with mpx.ctx(prec):
        for n in n_values:
            pred = predict_n_to_infty(alpha, t, n, prec)
            row = RatioRow(n, gmpy2.mpfr(alpha), gam[n], pred.value, None, None)
            if pred.value == 0:
                row.indeterminate = True
            else:
                row.ratio = gam[n] / pred.value
                row.ratio_error = abs(row.ratio - 1)
                row.scaled_error = row.ratio_error * n / gmpy2.log(n)
            rows.append(row)
    return RatioReport("n_sweep", t, rows)


def least_squares_slope(xs, ys):
    """Ordinary least-squares slope of ys against xs, in mpfr arithmetic."""
    n = len(xs)
    if n < 2 or n != len(ys):
        raise ValueError("need two or more paired points")
    xs = [gmpy2.mpfr(x) for x in xs]
    ys = [gmpy2.mpfr(y) for y in ys]
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)
