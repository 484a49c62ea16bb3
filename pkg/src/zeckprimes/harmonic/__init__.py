"""Harmonic analysis tools: step functions, Fourier sums, Gowers norms, discrepancy."""

from .discrepancy import (
    bounded_quotient_bound,
    discrepancy_1d,
    discrepancy_nalpha,
    discrepancy_star_1d,
    etk_bound_1d,
    etk_parallelotope_bound,
    koksma_check,
    nphi_points,
)
from .fourier import (
    correlation_identity_check,
    fit_decay,
    fourier_G,
    fourier_G_all,
    fourier_Gtilde_direct,
    fourier_Gtilde_matrix,
    gtilde_block_norm,
    gtilde_sup,
    omega,
    wide_blocks,
)
from .gowers import (
    gowers_u2_exact,
    gowers_u2_fourier,
    gowers_u3_drop,
    gowers_u3_estimate,
    gowers_u3_samples,
    paired_drop,
    multiplicative_derivative,
    unimodular,
)
from .inequalities import vdc_check, vdc_general_check, vinogradov_check
from .stepfn import StepFn, build_g_lambda
from .vaaler import TrigPoly, vaaler


def stepfn_integral(f: StepFn) -> complex:
    return f.integral()


def correlation(f: StepFn, t) -> complex:
    """``int f(x) conj f(x + t) dx`` for an exact offset ``t``."""
    return f.correlation(t)
