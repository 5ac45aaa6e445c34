"""Exact small-coupling combinatorics: walk polynomials and index identities.

The leading small-coupling term of the n-th zone length is a finite sum over
monotone lattice walks from -n to +n with even step sizes.  Everything here is
big-rational arithmetic (fractions.Fraction), so equalities are decidable, not
approximate.
"""
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import RangeError


@dataclass(frozen=True)
class Walk:
    """A monotone walk on the even lattice, stored as its tuple of step sizes."""
    steps: tuple

    def __post_init__(self):
        for s in self.steps:
            if s <= 0 or s % 2 != 0:
                raise ValueError("steps must be positive even integers")

    @property
    def n(self) -> int:
        return sum(self.steps) // 2

    @property
    def vertices(self) -> tuple:
        """All visited sites from -n to +n, endpoints included."""
        n = self.n
        out = [-n]
        for s in self.steps:
            out.append(out[-1] + s)
        return tuple(out)

    def interior(self) -> tuple:
        return self.vertices[1:-1]


def enumerate_positive_walks(n: int, K: int):
    """Yield every walk from -n to +n with steps in {2, 4, ..., 2K}, lexicographically.

    These are the compositions of 2n into parts of size at most 2K; they carry
    the entire leading small-coupling order, since mixed-sign walks cost extra
    powers of the coupling.
    """
    if n < 1 or K < 1:
        raise RangeError("need n >= 1 and K >= 1")

    def rec(remaining, prefix):
        if remaining == 0:
            yield Walk(tuple(prefix))
            return
        for s in range(2, min(2 * K, remaining) + 1, 2):
            prefix.append(s)
            yield from rec(remaining - s, prefix)
            prefix.pop()

    yield from rec(2 * n, [])


@dataclass(frozen=True)
class GapPolynomial:
    """Polynomial coefficient of alpha^alpha_power in a zone-length expansion.

    coeffs maps exponent tuples (one slot per variable) to nonzero Fractions.
    """
    n: int
    coeffs: dict
    alpha_power: int
    variables: tuple

    def __post_init__(self):
        clean = {tuple(e): Fraction(c) for e, c in self.coeffs.items() if c != 0}
        for e in clean:
            if len(e) != len(self.variables):
                raise ValueError("exponent arity does not match variables")
        object.__setattr__(self, "coeffs", clean)

    def evaluate(self, *values):
        if len(values) != len(self.variables):
            raise ValueError("expected %d values" % len(self.variables))
        total = Fraction(0)
        for exps, c in self.coeffs.items():
            term = c
            for v, e in zip(values, exps):
                term = term * v ** e
            total += term
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def to_json(self) -> str:
        terms = [[*e, "%d/%d" % (c.numerator, c.denominator)]
                 for e, c in sorted(self.coeffs.items())]
        return json.dumps({"n": self.n, "terms": terms})

    def __eq__(self, other):
        if not isinstance(other, GapPolynomial):
            return NotImplemented
        return (self.n == other.n and self.alpha_power == other.alpha_power
                and self.coeffs == other.coeffs)


def _denominator(walk: Walk) -> int:
    n = walk.n
    d = 1
    for v in walk.interior():
        d *= n * n - v * v
    return d


def p_polynomial_exact(n: int) -> GapPolynomial:
    """Leading gap coefficient for the two-frequency family, by direct walk sum.

    Step 2 carries weight -2t and one power of the coupling, step 4 carries
    weight -1 and two powers, so every walk lands in the same alpha^n order.
    The overall factor 2 converts the off-corner entry to a zone length.
    """
    coeffs = {}
    for w in enumerate_positive_walks(n, 2):
        c2 = sum(1 for s in w.steps if s == 2)
        c4 = len(w.steps) - c2
        num = 2 * (-2) ** c2 * (-1) ** c4
        key = (c2,)
        coeffs[key] = coeffs.get(key, Fraction(0)) + Fraction(num, _denominator(w))
    return GapPolynomial(n, coeffs, n, ("t",))


def p_polynomial_closed(n: int) -> GapPolynomial:
    """Same coefficient from the factored closed form.

    Even n = 2m:  c_n * prod_{k=1..m} (t^2 - (2k-1)^2);
    odd  n = 2m-1: c_n * t * prod_{k=1..m-1} (t^2 - (2k)^2);
    with c_n = 8*(-1)^n / (2^n * ((n-1)!)^2).
    """
    if n < 1:
        raise RangeError("need n >= 1")
    fact = 1
    for i in range(2, n):
        fact *= i
    c = Fraction(8 * (-1) ** n, 2 ** n * fact * fact)
    # poly as dict degree -> Fraction, expanded by convolution
    poly = {0: Fraction(1)}
    if n % 2 == 0:
        roots = [(2 * k - 1) ** 2 for k in range(1, n // 2 + 1)]
    else:
        poly = {1: Fraction(1)}
        roots = [(2 * k) ** 2 for k in range(1, (n - 1) // 2 + 1)]
    for r in roots:
        new = {}
        for d, v in poly.items():
            new[d + 2] = new.get(d + 2, Fraction(0)) + v
            new[d] = new.get(d, Fraction(0)) - v * r
        poly = new
    coeffs = {(d,): c * v for d, v in poly.items()}
    return GapPolynomial(n, coeffs, n, ("t",))


def p_polynomial_general(n: int, K: int) -> GapPolynomial:
    """Leading coefficient with one indeterminate weight per step size.

    Step 2k carries weight t_k for k < K and weight 1 for k = K, each with k
    powers of the coupling; exponent tuples list (t_1, ..., t_{K-1}) powers.
    With K = 1 the single all-2s walk gives the constant
    2 / (4^(n-1) * ((n-1)!)^2).
    """
    if n < 1 or K < 1:
        raise RangeError("need n >= 1 and K >= 1")
    variables = tuple("t%d" % k for k in range(1, K))
    coeffs = {}
    for w in enumerate_positive_walks(n, K):
        counts = [0] * K
        for s in w.steps:
            counts[s // 2 - 1] += 1
        key = tuple(counts[:-1]) if K > 1 else ()
        coeffs[key] = coeffs.get(key, Fraction(0)) + Fraction(2, _denominator(w))
    return GapPolynomial(n, coeffs, n, variables)


def _spread_sum(values, k, min_gap):
    """Sum of products of k-element increasing selections with index gaps >= min_gap.

    values is the ordered list of available factors; selecting position i rules
    out positions i+1..i+min_gap-1.
    """
    total = 0

    def rec(start, need, prod):
        nonlocal total
        if need == 0:
            total += prod
            return
        last_ok = len(values) - (need - 1) * min_gap - 1
        for i in range(start, last_ok + 1):
            rec(i + min_gap, need - 1, prod * values[i])
    rec(0, k, 1)
    return total


def identity_sides(m: int, k: int, parity: str):
    """Both sides of the spread-out index identity, as exact integers.

    Even family: selections i_1 < ... < i_k from (-m, m) with consecutive
    entries at least 2 apart, factors m^2 - i^2, equal the plain selections
    j_1 < ... < j_k from {1..m} with factors (2j-1)^2.

    Odd family: selections from (-m+1, m) at least 2 apart with factors
    (2m-1)^2 - (2i-1)^2, equal plain selections from {1..m-1} with factors
    (4j)^2.
    """
    if parity == "even":
        if m < 1 or not 1 <= k <= m:
            raise RangeError("even family needs 1 <= k <= m")
        lhs_vals = [m * m - i * i for i in range(-m + 1, m)]
        rhs_vals = [(2 * j - 1) ** 2 for j in range(1, m + 1)]
    elif parity == "odd":
        if m < 2 or not 1 <= k <= m - 1:
            raise RangeError("odd family needs 1 <= k <= m-1")
        lhs_vals = [(2 * m - 1) ** 2 - (2 * i - 1) ** 2 for i in range(-m + 2, m)]
        rhs_vals = [(4 * j) ** 2 for j in range(1, m)]
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    lhs = _spread_sum(lhs_vals, k, 2)
    rhs = _spread_sum(rhs_vals, k, 1)
    return lhs, rhs
