"""Tridiagonal recurrence route: entry formulas, the lambda = mu - 2 alpha^2
shift, spectral agreement with the truncated-matrix route, and closed-zone
scans at integer shape values.
"""
import gmpy2
import pytest

import hillgap as hg
from hillgap import mpx
from hillgap.errors import ComplexLeak, RangeError
from hillgap.qes import (RecurrenceSystem, Symmetry, build_recurrence,
                         closed_gap_scan, lambda_spectrum, mu_spectrum)
from hillgap.spectrum import Parity, build_truncated, eigenvalues


def test_frequency_lattices_per_symmetry():
    assert build_recurrence(Symmetry.PER_EVEN_COS, "0.1", "1", 5).ks == [0, 2, 4, 6, 8]
    assert build_recurrence(Symmetry.PER_ODD_SIN, "0.1", "1", 5).ks == [2, 4, 6, 8, 10]
    assert build_recurrence(Symmetry.ANTI_COS, "0.1", "1", 5).ks == [1, 3, 5, 7, 9]
    assert build_recurrence(Symmetry.ANTI_SIN, "0.1", "1", 5).ks == [1, 3, 5, 7, 9]


def test_zero_coupling_decouples():
    for sym in Symmetry:
        sys = build_recurrence(sym, 0, "1.5", 6)
        for i, k in enumerate(sys.ks):
            assert sys.diag[i] == k * k
            assert sys.sub[i] == 0
            assert sys.sup[i] == 0


def test_entry_formulas():
    with mpx.ctx(160):
        a = gmpy2.mpfr("0.3")
        t = gmpy2.mpfr("2.5")
        sys = build_recurrence(Symmetry.PER_EVEN_COS, a, t, 6, 160)
        assert sys.sub[0] == 0
        assert sys.sub[1] == 4 * a * (t + 1)  # constant mode feeds k=2 twice
        for i in range(2, 6):
            k = sys.ks[i]
            assert sys.sub[i] == 2 * a * (t - 1 + k)
        for i in range(6):
            k = sys.ks[i]
            assert sys.diag[i] == k * k
            assert sys.sup[i] == 2 * a * (t - 1 - k)

        cos1 = build_recurrence(Symmetry.ANTI_COS, a, t, 6, 160)
        sin1 = build_recurrence(Symmetry.ANTI_SIN, a, t, 6, 160)
        assert cos1.diag[0] == 1 + 2 * a * t
        assert sin1.diag[0] == 1 - 2 * a * t
        for i in range(1, 6):
            assert cos1.diag[i] == cos1.ks[i] ** 2
            assert sin1.diag[i] == sin1.ks[i] ** 2
        odd = build_recurrence(Symmetry.PER_ODD_SIN, a, t, 6, 160)
        for i in range(1, 6):
            assert odd.sub[i] == 2 * a * (t - 1 + odd.ks[i])


def test_string_symmetry_and_row_minimum():
    sys = build_recurrence("anti_cos", "0.1", "1", 4)
    assert sys.symmetry is Symmetry.ANTI_COS
    with pytest.raises(RangeError):
        build_recurrence(Symmetry.ANTI_COS, "0.1", "1", 3)


def test_dense_reflects_band_structure():
    sys = build_recurrence(Symmetry.PER_ODD_SIN, "0.2", "1.3", 5, 128)
    m = sys.dense()
    for i in range(5):
        for j in range(5):
            if i == j:
                assert m[i][j] == sys.diag[i]
            elif j == i - 1:
                assert m[i][j] == sys.sub[i]
            elif j == i + 1:
                assert m[i][j] == sys.sup[i]
            else:
                assert m[i][j] == 0


def test_lambda_is_shifted_mu():
    sys = build_recurrence(Symmetry.PER_EVEN_COS, "0.07", "2", 12, 160)
    mus = mu_spectrum(sys, 5)
    lams = lambda_spectrum(sys, 5)
    with mpx.ctx(160):
        shift = 2 * gmpy2.mpfr("0.07") ** 2
        for mu, lam in zip(mus, lams):
            assert lam == mu - shift


def test_recurrence_matches_matrix_eigenvalues():
    alpha, t = "0.05", "1"
    v = hg.from_two_term(hg.TwoTermParams(alpha, t, precision_bits=192))
    plus = sorted(
        lambda_spectrum(build_recurrence(Symmetry.PER_EVEN_COS, alpha, t, 24, 192))
        + lambda_spectrum(build_recurrence(Symmetry.PER_ODD_SIN, alpha, t, 24, 192)))[:10]
    minus = sorted(
        lambda_spectrum(build_recurrence(Symmetry.ANTI_COS, alpha, t, 24, 192))
        + lambda_spectrum(build_recurrence(Symmetry.ANTI_SIN, alpha, t, 24, 192)))[:8]
    ref_plus = eigenvalues(build_truncated(v, Parity.PER_PLUS, 64), 10)
    ref_minus = eigenvalues(build_truncated(v, Parity.PER_MINUS, 64), 8)
    with mpx.ctx(192):
        for got, want in zip(plus, ref_plus):
            assert abs(got - want) <= 1e-40 * max(1, abs(want))
        for got, want in zip(minus, ref_minus):
            assert abs(got - want) <= 1e-40 * max(1, abs(want))


def test_ground_state_exact_at_unit_shape():
    # at t = 1 the constant-coefficient mode decouples: mu = 0 exactly,
    # so the lowest eigenvalue is exactly -2 alpha^2
    with mpx.ctx(192):
        a = gmpy2.mpfr("0.3")
        sys = build_recurrence(Symmetry.PER_EVEN_COS, a, 1, 20, 192)
        lam0 = lambda_spectrum(sys, 1)[0]
        assert lam0 == -2 * a * a


def test_even_zones_close_at_t_three():
    alpha = "0.1"
    v = hg.from_two_term(hg.TwoTermParams(alpha, "3", precision_bits=192))
    slices = hg.spectrum_slices(v, 6, "1e-12", precision_bits=192)
    with mpx.ctx(192):
        assert abs(slices[3].gamma) < 1e-20  # n = 4
        assert abs(slices[5].gamma) < 1e-20  # n = 6
        assert slices[1].gamma > gmpy2.mpfr("0.1")  # n = 2 stays open


def test_complex_leak_detection():
    # a deliberately skew system: eigenvalues of [[0,-1],[1,0]]-style blocks
    # are imaginary pairs and must be refused, not silently flattened
    with mpx.ctx(128):
        zero = gmpy2.mpfr(0)
        one = gmpy2.mpfr(1)
        sys = RecurrenceSystem(Symmetry.ANTI_COS, zero, zero, 4,
                               [1, 3, 5, 7], [zero] * 4,
                               [zero, one, one, one],
                               [-one, -one, -one, zero], 128)
        with pytest.raises(ComplexLeak):
            mu_spectrum(sys)


def test_closed_gap_scan_structure_and_verdicts():
    rep = closed_gap_scan("0.1", "2", 9, precision_bits=192)
    verdicts = {r.n: r.verdict for r in rep.rows}
    assert verdicts[1] == "open"
    for n in (3, 5, 7, 9):
        assert verdicts[n] == "closed", n
    parities = {r.n: r.parity for r in rep.rows}
    assert parities[1] == "per-"
    assert parities[2] == "per+"
    csv = rep.to_csv()
    assert csv.splitlines()[0] == "n,parity,gamma,verdict,method,tol"
    assert len(csv.splitlines()) == 10


def test_scan_is_even_in_shape_parameter():
    rep_pos = closed_gap_scan("0.1", "1", 4, precision_bits=160)
    rep_neg = closed_gap_scan("0.1", "-1", 4, precision_bits=160)
    with mpx.ctx(160):
        for a, b in zip(rep_pos.rows, rep_neg.rows):
            assert abs(abs(a.gamma) - abs(b.gamma)) < 1e-30
            assert a.verdict == b.verdict
