"""Fourier-side representation of pi-periodic trigonometric-polynomial potentials.

A potential v(x) = sum_m V(m) exp(imx) is stored sparsely as a map from even
frequencies m to complex coefficients.  The mean V(0) is required to vanish;
constructors reject a nonzero mean instead of shifting the spectrum.
"""
import json
from dataclasses import dataclass, field
from enum import Enum

import gmpy2

from . import mpx


class Regime(Enum):
    BOTH_REAL = "both-real"
    BOTH_IMAGINARY = "both-imaginary"
    GENERAL_COMPLEX = "general-complex"


@dataclass(frozen=True)
class TwoTermParams:
    """Parameters (alpha, t) of the two-term potential -4*alpha*t*cos2x - 2*alpha^2*cos4x."""
    alpha: object
    t: object
    regime: Regime = Regime.BOTH_REAL
    precision_bits: int = mpx.DEFAULT_PRECISION

    def __post_init__(self):
        a = mpx.to_mpc(self.alpha, self.precision_bits)
        t = mpx.to_mpc(self.t, self.precision_bits)
        if self.regime == Regime.BOTH_REAL and (a.imag != 0 or t.imag != 0):
            raise ValueError("both-real regime requires real alpha and t")
        if self.regime == Regime.BOTH_IMAGINARY and (a.real != 0 or t.real != 0):
            raise ValueError("both-imaginary regime requires pure imaginary alpha and t")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class Potential:
    """Sparse Fourier coefficients of a real- or complex-valued potential.

    coeffs maps even integers m to mpc values V(m); exactly-zero entries are
    dropped at construction.  Values are immutable after construction.
    """
    coeffs: dict
    precision_bits: int = mpx.DEFAULT_PRECISION
    provenance: dict = field(default_factory=dict, compare=False)
    degree_bound: int = field(init=False)
    real_valued: bool = field(init=False)

    def __post_init__(self):
        clean = {}
        for m, val in self.coeffs.items():
            if not isinstance(m, int) or m % 2 != 0:
                raise ValueError("frequencies must be even integers, got %r" % (m,))
            c = mpx.to_mpc(val, self.precision_bits)
            if m == 0:
                if c != 0:
                    raise ValueError("potential must have zero mean (V(0) = 0)")
                continue
            if c == 0:
                continue
            clean[m] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "degree_bound",
                           max((abs(m) for m in clean), default=0))
        with mpx.ctx(self.precision_bits):
            real = all(-m in clean and clean[-m] == clean[m].conjugate()
                       for m in clean)
        object.__setattr__(self, "real_valued", real)

    def coeff(self, m):
        """V(m) at working precision (zero for absent frequencies)."""
        c = self.coeffs.get(m)
        if c is not None:
            return c
        with mpx.ctx(self.precision_bits):
            return gmpy2.mpc(0)

    @property
    def half_bandwidth(self):
        """Largest lattice step K in units of 2 (degree_bound / 2)."""
        return self.degree_bound // 2

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return (self.coeffs == other.coeffs
                and self.precision_bits == other.precision_bits)


def from_two_term(p: TwoTermParams) -> Potential:
    """Potential with V(2) = -2*alpha*t and V(4) = -alpha^2.

    In the both-real and both-imaginary regimes the coefficients come out
    real and conjugate-symmetric; in the general-complex regime the
    negative-frequency coefficients are the conjugates of the positive ones,
    so the potential is real-valued in every regime.
    """
    bits = p.precision_bits
    with mpx.ctx(bits):
        v2 = -2 * p.alpha * p.t
        v4 = -p.alpha * p.alpha
        coeffs = {2: v2, -2: v2.conjugate(), 4: v4, -4: v4.conjugate()}
    prov = {"kind": "two_term", "alpha": p.alpha, "t": p.t, "regime": p.regime.value}
    return Potential(coeffs, bits, prov)


def from_coeff_pair(a1, a2, precision_bits=mpx.DEFAULT_PRECISION) -> Potential:
    """Real-valued potential with V(2) = a1, V(4) = a2 and conjugate negatives."""
    bits = precision_bits
    with mpx.ctx(bits):
        c1 = mpx.to_mpc(a1, bits)
        c2 = mpx.to_mpc(a2, bits)
        coeffs = {2: c1, -2: c1.conjugate(), 4: c2, -4: c2.conjugate()}
    prov = {"kind": "coeff_pair", "a1": c1, "a2": c2}
    return Potential(coeffs, bits, prov)


def mathieu(a, precision_bits=mpx.DEFAULT_PRECISION) -> Potential:
    """The one-term potential 2a*cos2x (V(+-2) = a for real a)."""
    return from_coeff_pair(a, 0, precision_bits)


def l2_norm(v: Potential):
    """sqrt(sum_m |V(m)|^2) as an mpfr at the potential's precision."""
    with mpx.ctx(v.precision_bits):
        s = gmpy2.mpfr(0)
        for c in v.coeffs.values():
            s += gmpy2.norm(c)  # |c|^2
        return gmpy2.sqrt(s)


def scale_by(v: Potential, m: int) -> Potential:
    """Dilation x -> mx with amplitude m^2: new coefficients Vtilde(m*k) = m^2 V(k)."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("scale factor must be a positive integer")
    if m == 1:
        return v
    with mpx.ctx(v.precision_bits):
        coeffs = {m * k: (m * m) * c for k, c in v.coeffs.items()}
    prov = dict(v.provenance)
    prov["scaled_by"] = m * prov.get("scaled_by", 1)
    return Potential(coeffs, v.precision_bits, prov)


def to_json(v: Potential) -> str:
    """Serialize as {"coeffs": [[m, re, im], ...], "precision_bits": p}.

    Frequencies ascending; re/im as decimal strings with enough digits to
    round-trip exactly at the stored precision.
    """
    nd = mpx.digits_for(v.precision_bits)
    rows = []
    for m in sorted(v.coeffs):
        c = v.coeffs[m]
        rows.append([m, mpx.sci(c.real, nd), mpx.sci(c.imag, nd)])
    return json.dumps({"coeffs": rows, "precision_bits": v.precision_bits})


def from_json(s: str) -> Potential:
    data = json.loads(s)
    bits = int(data["precision_bits"])
    coeffs = {}
    with mpx.ctx(bits):
        for m, re, im in data["coeffs"]:
            coeffs[int(m)] = gmpy2.mpc(gmpy2.mpfr(re), gmpy2.mpfr(im))
    return Potential(coeffs, bits)
