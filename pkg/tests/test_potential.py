import json

import gmpy2
import pytest
from hypothesis import given, strategies as st

import hillgap as hg
from hillgap import mpx
from hillgap.potential import Potential


def two_term(alpha, t, bits=128, regime=hg.Regime.BOTH_REAL):
    return hg.from_two_term(hg.TwoTermParams(alpha, t, regime, bits))


def test_two_term_coefficients():
    v = two_term("0.1", "1.5", 128)
    with mpx.ctx(128):
        a = gmpy2.mpfr("0.1")
        t = gmpy2.mpfr("1.5")
        assert v.coeff(2) == -2 * a * t
        assert v.coeff(-2) == -2 * a * t
        assert v.coeff(4) == -a * a
        assert v.coeff(-4) == -a * a
        assert v.coeff(6) == 0
        assert v.coeff(0) == 0
    assert v.degree_bound == 4
    assert v.half_bandwidth == 2
    assert v.real_valued


def test_zero_mean_enforced():
    with pytest.raises(ValueError):
        Potential({0: 1.0, 2: 0.5, -2: 0.5}, 128)
    # explicit zero at frequency 0 is tolerated and dropped
    v = Potential({0: 0.0, 2: 0.5, -2: 0.5}, 128)
    assert 0 not in v.coeffs


def test_odd_frequency_rejected():
    with pytest.raises(ValueError):
        Potential({3: 1.0}, 128)


def test_zero_coefficients_dropped():
    v = hg.from_coeff_pair("0.25", 0, 128)
    assert set(v.coeffs) == {2, -2}
    assert v.degree_bound == 2


def test_real_valued_flag():
    assert hg.mathieu("0.3", 128).real_valued
    v = Potential({2: 1j, -2: 1j}, 128)
    assert not v.real_valued
    w = Potential({2: 1 + 2j, -2: 1 - 2j}, 128)
    assert w.real_valued


def test_real_valued_at_high_precision():
    # conjugation must not round through a lower-precision context
    v = hg.mathieu("0.1", 224)
    assert v.real_valued
    assert v.coeffs[2] == v.coeffs[-2]


def test_regime_invariants():
    hg.TwoTermParams("0.1", "1.5", hg.Regime.BOTH_REAL, 128)
    with pytest.raises(ValueError):
        hg.TwoTermParams(0.1 + 0.2j, "1.5", hg.Regime.BOTH_REAL, 128)
    hg.TwoTermParams(0.1j, 2j, hg.Regime.BOTH_IMAGINARY, 128)
    with pytest.raises(ValueError):
        hg.TwoTermParams("0.1", 2j, hg.Regime.BOTH_IMAGINARY, 128)
    hg.TwoTermParams(0.1 + 0.05j, 1.5 - 0.25j, hg.Regime.GENERAL_COMPLEX, 128)


def test_two_term_real_valued_in_every_regime():
    assert two_term("0.1", "1.5").real_valued
    assert two_term(0.1j, 1.5j, regime=hg.Regime.BOTH_IMAGINARY).real_valued
    assert two_term(0.1 + 0.03j, 1.5 - 0.2j,
                    regime=hg.Regime.GENERAL_COMPLEX).real_valued


def test_l2_norm_closed_form():
    v = two_term("0.1", "1.5", 160)
    with mpx.ctx(160):
        a = gmpy2.mpfr("0.1")
        t = gmpy2.mpfr("1.5")
        expect = gmpy2.sqrt(8 * t * t * a * a + 2 * a ** 4)
        assert abs(hg.l2_norm(v) - expect) <= gmpy2.mpfr(2) ** -150


def test_scale_by_dilation():
    v = hg.mathieu("0.05", 128)
    w = hg.scale_by(v, 2)
    with mpx.ctx(128):
        assert w.coeff(4) == 4 * v.coeff(2)
        assert w.coeff(2) == 0
    assert w.degree_bound == 4
    with pytest.raises(ValueError):
        hg.scale_by(v, 0)
    with pytest.raises(ValueError):
        hg.scale_by(v, -2)


def test_scale_by_identity():
    v = hg.mathieu("0.05", 128)
    assert hg.scale_by(v, 1) is v


def test_json_roundtrip():
    v = two_term("0.1", "1.5", 192)
    s = hg.to_json(v)
    data = json.loads(s)
    assert data["precision_bits"] == 192
    assert [row[0] for row in data["coeffs"]] == sorted(m for m in v.coeffs)
    w = hg.from_json(s)
    assert w == v


def test_json_roundtrip_complex_coeffs():
    v = Potential({2: 1 + 2j, -2: 1 - 2j}, 128)
    w = hg.from_json(hg.to_json(v))
    assert w == v


def test_equality_ignores_provenance():
    v = two_term("0.1", "1.5", 128)
    w = hg.from_coeff_pair(v.coeff(2), v.coeff(4), 128)
    assert v == w
    assert v != two_term("0.1", "1.4", 128)


@given(st.integers(min_value=1, max_value=4),
       st.fractions(min_value=-2, max_value=2),
       st.fractions(min_value=-2, max_value=2))
def test_conjugate_symmetric_potentials_report_real(K, re, im):
    coeffs = {}
    for r in range(1, K + 1):
        c = complex(re, im)
        coeffs[2 * r] = c
        coeffs[-2 * r] = complex(re, -im)
    v = Potential(coeffs, 128)
    assert v.real_valued


@given(st.fractions(min_value=-2, max_value=2).filter(lambda q: q != 0))
def test_broken_symmetry_reports_non_real(im):
    v = Potential({2: complex(1, float(im)), -2: complex(1, float(im))}, 128)
    assert not v.real_valued
