"""Spectral-gap toolkit for 1-D Hill operators with trigonometric-polynomial potentials.

Three mutually cross-validating routes to the instability-zone lengths gamma_n:
a banded arbitrary-precision eigensolver on truncated Fourier matrices, a
lattice-walk series for the reduced 2x2 system, and tridiagonal recurrence
systems with finite invariant blocks at integer parameter values.  Exact
big-rational combinatorics supplies the small-coupling polynomials and the
index identities behind them.
"""
from .potential import (Potential, TwoTermParams, Regime, from_two_term,
                        from_coeff_pair, mathieu, l2_norm, scale_by,
                        to_json, from_json)
from .spectrum import (Parity, TruncatedOperator, SpectrumSlice,
                       build_truncated, eigenvalues, spectrum_slices,
                       localization_check)
from .gapseries import SEntries, s_entries, solve_z, gap_series, deriv_bound_fd_check
from .exactcomb import (Walk, GapPolynomial, enumerate_positive_walks,
                        p_polynomial_exact, p_polynomial_closed,
                        p_polynomial_general, identity_sides)
from .asymptotics import (GapPrediction, predict_alpha_to_zero,
                          predict_n_to_infty, predict_coeff_form, ratio_report)
from .qes import (Symmetry, RecurrenceSystem, build_recurrence, mu_spectrum,
                  lambda_spectrum, closed_gap_scan)
from . import errors

__version__ = "0.1.0"
