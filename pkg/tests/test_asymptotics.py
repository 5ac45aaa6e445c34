"""Closed-form predictions, the Gamma tail product tying the two regimes
together, harmonic-sum and walk-ratio brackets, and the ratio diagnostics.
"""
import math
from fractions import Fraction as F

import gmpy2
import pytest

from hillgap import mpx
from hillgap.asymptotics import (least_squares_slope, predict_alpha_to_zero,
                                 predict_coeff_form, predict_n_to_infty,
                                 ratio_report, tail_product)
from hillgap.errors import RangeError
from hillgap.exactcomb import enumerate_positive_walks, p_polynomial_exact


def rel(a, b):
    return abs(a - b) / max(abs(b), gmpy2.mpfr(2) ** -200)


def test_small_coupling_literals():
    with mpx.ctx(128):
        p1 = predict_alpha_to_zero("0.2", "1.5", 1)
        assert rel(p1.value, gmpy2.mpfr("1.2")) < 1e-30
        p2 = predict_alpha_to_zero("0.2", "1.5", 2)
        assert rel(p2.value, gmpy2.mpfr("0.1")) < 1e-30
        p3 = predict_alpha_to_zero("0.2", "1.5", 3)
        assert rel(p3.value, gmpy2.mpfr("0.00525")) < 1e-30
        assert p1.regime == "alpha_to_zero"


def test_small_coupling_matches_walk_polynomial():
    # the prediction is |P_n(t)| * alpha^n with P_n the exact walk polynomial
    t = F(3, 2)
    a = F(1, 5)
    for n in range(1, 11):
        exact = abs(p_polynomial_exact(n).evaluate(t)) * a ** n
        with mpx.ctx(192):
            got = predict_alpha_to_zero("0.2", "1.5", n, 192).value
            want = mpx.to_mpfr(exact, 192)
            assert rel(got, want) < 1e-40, n


def test_large_index_literals():
    with mpx.ctx(128):
        p4 = predict_n_to_infty("0.2", "1", 4)
        # cos(pi/2) kills even zones at t = 1, up to rounding in pi itself
        assert p4.value < gmpy2.mpfr(2) ** -100
        p3 = predict_n_to_infty("0.2", "1", 3)
        want = 2 / gmpy2.const_pi() * gmpy2.mpfr("0.008")
        assert rel(p3.value, want) < 1e-30
        p5 = predict_n_to_infty("0.1", "0.5", 5)
        want5 = (8 * gmpy2.mpfr("0.1") ** 5 / (2 ** 5 * 9)
                 * 2 / gmpy2.const_pi() * gmpy2.sin(gmpy2.const_pi() / 4))
        assert rel(p5.value, want5) < 1e-30


def test_coeff_form_reduces_to_two_term_prediction():
    # a1 = -2 alpha t, a2 = -alpha^2 turns each factor into
    # alpha^2 (t^2 - (2k-1)^2)
    with mpx.ctx(192):
        a = gmpy2.mpfr("0.3")
        t = gmpy2.mpfr("1.7")
        for n in range(1, 9):
            direct = predict_alpha_to_zero(a, t, n, 192).value
            reduced = predict_coeff_form(-2 * a * t, -a * a, n, 192).value
            assert rel(reduced, direct) < 1e-45, n


def test_tail_product_ties_the_regimes_together():
    with mpx.ctx(128):
        for n in (4, 8, 16, 24, 40):
            pa = predict_alpha_to_zero("0.2", "0.3", n).value
            pi_ = predict_n_to_infty("0.2", "0.3", n).value
            tail = tail_product("0.3", n // 2 + 1)
            assert abs(pa * tail / pi_ - 1) < 1e-12, n


def test_tail_product_partial_products_converge_to_cosine():
    with mpx.ctx(128):
        t = gmpy2.mpfr("0.7")
        partial = gmpy2.mpfr(1)
        for k in range(1, 40):
            partial *= 1 - t * t / (2 * k - 1) ** 2
        want = gmpy2.cos(gmpy2.const_pi() * t / 2)
        assert rel(partial * tail_product(t, 40), want) < 1e-30


def test_domain_errors():
    with pytest.raises(RangeError):
        predict_alpha_to_zero("0.1", "1", 0)
    with pytest.raises(RangeError):
        predict_n_to_infty("0.1", "1", 2)
    with pytest.raises(RangeError):
        tail_product("5", 2)
    with pytest.raises(RangeError):
        tail_product("3", 2)
    tail_product("2.9", 2)  # just inside the domain


def test_harmonic_sum_identity_exact():
    # sum_{0<i<n} 1/(n^2 - (n-2i)^2) collapses to H_{n-1}/(2n)
    for n in range(2, 61):
        s = sum(F(1, n * n - (n - 2 * i) ** 2) for i in range(1, n))
        h = sum(F(1, j) for j in range(1, n))
        assert s == h / (2 * n), n


def test_harmonic_sum_log_bracket():
    for n in range(3, 201):
        s = sum(F(1, n * n - (n - 2 * i) ** 2) for i in range(1, n))
        assert math.log(n) / (2 * n) <= float(s) <= (1 + math.log(n)) / (2 * n)


def _ratio(walk, n, z):
    out = F(1)
    for v in walk.interior():
        out *= F(n * n - v * v, 1) / (n * n - v * v + z)
    return float(out)


Z_POS = [F(0), F(1, 10), F(3, 10), F(1, 2), F(7, 10), F(9, 10), F(99, 100)]
Z_NEG = [-z for z in Z_POS]


def test_dense_walk_ratio_two_sided_brackets():
    # the all-2s walk admits two-sided log-weight brackets on both half-ranges
    for n in range(3, 13):
        walk = next(enumerate_positive_walks(n, 1))
        ln = math.log(n)
        for z in Z_POS:
            r = _ratio(walk, n, z)
            assert 1 - float(z) * ln / n <= r <= 1 - float(z) * ln / (4 * n), (n, z)
        for z in Z_NEG:
            r = _ratio(walk, n, z)
            a = float(-z)
            assert 1 + a * ln / (2 * n) <= r <= 1 + 2 * a * ln / n, (n, z)


def test_walk_ratio_one_sided_brackets_hold_for_every_walk():
    # only one side of each bracket survives once step-4 moves are allowed
    for n in range(3, 11):
        ln = math.log(n)
        for walk in enumerate_positive_walks(n, 2):
            for z in Z_POS:
                assert _ratio(walk, n, z) >= 1 - float(z) * ln / n, (n, walk, z)
            for z in Z_NEG:
                a = float(-z)
                assert _ratio(walk, n, z) <= 1 + 2 * a * ln / n, (n, walk, z)


def test_sparse_walk_breaks_the_dense_upper_bound():
    # the (4,4) walk skips the slow sites, so its ratio sits above the all-2s
    # upper bound near z = 1: the two-sided bracket is a dense-walk fact only
    from hillgap.exactcomb import Walk
    n, z = 4, F(99, 100)
    upper = 1 - float(z) * math.log(n) / (4 * n)
    assert _ratio(Walk((4, 4)), n, z) > upper


def test_ratio_report_requires_exactly_one_mode():
    with pytest.raises(ValueError):
        ratio_report("1.5", [1, 2])
    with pytest.raises(ValueError):
        ratio_report("1.5", [1, 2], alpha="0.1", alpha_ladder=["0.1"])


def test_ladder_reports_error_quartering():
    # halving the coupling quarters the relative error of the small-coupling
    # prediction: the next correction is one order further down in alpha^2
    rep = ratio_report("1.5", [1, 2, 3, 4],
                       alpha_ladder=["0.04", "0.02", "0.01"], method="matrix")
    assert rep.mode == "alpha_ladder"
    assert len(rep.rows) == 12
    assert len(rep.quotients) == 8
    for q in rep.quotients:
        assert q["quotient"] is not None
        assert 3.5 <= float(q["quotient"]) <= 4.5, q
    csv = rep.to_csv()
    lines = csv.splitlines()
    assert lines[0] == "n,alpha,gamma,predicted,ratio,ratio_error"
    assert "n,alpha_hi,alpha_lo,error_quotient" in lines


def test_ladder_flags_vanishing_prediction_indeterminate():
    # at t = 1 the even-zone prediction vanishes identically
    rep = ratio_report("1", [2], alpha_ladder=["0.05", "0.025"],
                       method="matrix", precision_bits=192)
    assert all(r.indeterminate for r in rep.rows)
    assert all(q["quotient"] is None for q in rep.quotients)
    csv = rep.to_csv()
    assert "indeterminate" in csv


def test_sweep_report_structure():
    rep = ratio_report("0.3", [3, 4, 5], alpha="0.3", method="matrix",
                       precision_bits=160)
    assert rep.mode == "n_sweep"
    assert rep.quotients == []
    assert len(rep.rows) == 3
    for r in rep.rows:
        assert r.scaled_error is not None
        assert not r.indeterminate
    header = rep.to_csv().splitlines()[0]
    assert header.endswith(",scaled_error")


def test_least_squares_slope_recovers_exact_line():
    with mpx.ctx(128):
        xs = [gmpy2.mpfr(i) for i in range(1, 7)]
        ys = [3 * x - 2 for x in xs]
        assert abs(least_squares_slope(xs, ys) - 3) < 1e-30
    with pytest.raises(ValueError):
        least_squares_slope([1], [2])
    with pytest.raises(ValueError):
        least_squares_slope([1, 2], [1, 2, 3])
