"""fracdisp: a numerical laboratory for the fundamental solutions of
time-fractional dispersive equations.

Core pieces: Mittag-Leffler and Bessel evaluators (specfun), smooth dyadic
cutoffs and radial Fourier transforms (freq), fundamental-solution kernels and
their asymptotic expansions (kernel), dyadic-block norms (besov), and decay
sweeps with inequality verifiers (estimates).  The ``fracdisp`` command drives
everything from reproducible JSON configurations.
"""

from .besov import BesovSpec, besov_norm, lq_monotonicity_check
from .config import GridSpec, RunConfig
from .errors import (ConvergenceError, DegenerateInputError, DomainError,
                     FracdispError, PoleError, QuadratureError, RangeError)
from .estimates import (FitResult, InequalityReport, SweepRecord,
                        caputo_derivative, decay_sweep, evolve_profile,
                        fit_exponent, gaussian_profile, verify_band_linfty,
                        verify_dispersive_besov, verify_lp_interpolation,
                        verify_mode_ode, verify_sharpness)
from .freq import (CutoffProfile, DyadicBand, RadialProfile, band_project,
                   build_cutoff, lp_norm_radial, psi, radial_fourier)
from .kernel import (KernelSample, KernelSpec, expansion_residual, kernel_band,
                     kernel_full, riesz_constant, sup_search, w1_eval)
from .specfun import (EvalDiagnostics, MLOrder, bessel_j, gamma_real, ml_asymptotic,
                      ml_eval, ml_neg_imag_axis, ml_series, omega_n, recip_gamma)

__version__ = "0.1.0"

__all__ = [
    "BesovSpec", "besov_norm", "lq_monotonicity_check",
    "GridSpec", "RunConfig",
    "ConvergenceError", "DegenerateInputError", "DomainError", "FracdispError",
    "PoleError", "QuadratureError", "RangeError",
    "FitResult", "InequalityReport", "SweepRecord", "caputo_derivative",
    "decay_sweep", "evolve_profile", "fit_exponent", "gaussian_profile",
    "verify_band_linfty", "verify_dispersive_besov", "verify_lp_interpolation",
    "verify_mode_ode", "verify_sharpness",
    "CutoffProfile", "DyadicBand", "RadialProfile", "band_project",
    "build_cutoff", "lp_norm_radial", "psi", "radial_fourier",
    "KernelSample", "KernelSpec", "expansion_residual", "kernel_band",
    "kernel_full", "riesz_constant", "sup_search", "w1_eval",
    "EvalDiagnostics", "MLOrder", "bessel_j", "gamma_real", "ml_asymptotic",
    "ml_eval", "ml_neg_imag_axis", "ml_series", "omega_n", "recip_gamma",
    "__version__",
]
