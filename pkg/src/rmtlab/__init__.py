"""Numerical laboratory for characteristic-polynomial correlators of large
Hermitian random matrices and the group-integral identities behind them.

The package cross-validates every quantity along at least two independent
routes: Monte Carlo sampling against exact finite-N quadrature, determinantal
group integrals against term-by-term Weyl sums and geometric quadrature,
localization sums against direct integration, and large-N asymptotics against
both of the finite-N routes. `python -m rmtlab --help` (or the `rmtlab`
script) lists the command-line entry points, including the full acceptance
suite.
"""

from .matcore import (
    Permutation,
    RngStream,
    Spectrum,
    check_hermitian,
    det,
    det_from_log_entries,
    eig_hermitian,
    log_det,
    permutation_parity,
    permutations,
    vandermonde,
)
from .gue import (
    MCEstimate,
    SpectralParams,
    char_poly_log,
    correlator_mc,
    sample_gue,
    sample_gue_batch,
    spectral_histogram,
)
from .hciz import (
    HcizInput,
    HeatKernelInput,
    PseudoDetResult,
    PseudoSignature,
    compact_normalization,
    disk_quadrature_rank1,
    haar_mc_hciz,
    haar_unitary,
    hciz_compact_det,
    hciz_pseudo_det,
    heat_kernel,
    heat_residual,
    pseudo_convergence_flag,
    weyl_sum,
)
from .kahler import (
    CosetPoint,
    CosetSpace,
    GroupElement2x2,
    MomentumTriple,
    dh_fixed_point_sum,
    dh_integral_numeric,
    form_coefficient,
    generator_basis,
    group_inverse,
    kahler_potential,
    kappa_fields,
    localizability_residual,
    metric_density,
    moebius_action,
    momentum_maps,
    momentum_t_h,
    random_group_element,
    rho_matrix,
)
from .exactrep import (
    ExactRepParams,
    ExactResult,
    TheoremOneInstance,
    WishartReport,
    correlator_exact,
    correlator_integrand,
    gram_gaussian_check,
    gram_reduction_constant,
    norm_constant,
    positive_det_integral,
    wishart_mc_check,
)
from .asymptotic import (
    SaddleValues,
    ScalingParams,
    Splitting,
    asymptotic_correlator,
    enumerate_splittings,
    f_factor,
    gaussian_matrix_integral,
    saddle_points,
    semicircle_density,
)

__version__ = "0.1.0"

__all__ = [
    "CosetPoint",
    "CosetSpace",
    "ExactRepParams",
    "ExactResult",
    "GroupElement2x2",
    "HcizInput",
    "HeatKernelInput",
    "MCEstimate",
    "MomentumTriple",
    "Permutation",
    "PseudoDetResult",
    "PseudoSignature",
    "RngStream",
    "SaddleValues",
    "ScalingParams",
    "SpectralParams",
    "Spectrum",
    "Splitting",
    "TheoremOneInstance",
    "WishartReport",
    "asymptotic_correlator",
    "char_poly_log",
    "check_hermitian",
    "compact_normalization",
    "correlator_exact",
    "correlator_integrand",
    "correlator_mc",
    "det",
    "det_from_log_entries",
    "dh_fixed_point_sum",
    "dh_integral_numeric",
    "disk_quadrature_rank1",
    "eig_hermitian",
    "enumerate_splittings",
    "f_factor",
    "form_coefficient",
    "gaussian_matrix_integral",
    "generator_basis",
    "gram_gaussian_check",
    "gram_reduction_constant",
    "group_inverse",
    "haar_mc_hciz",
    "haar_unitary",
    "hciz_compact_det",
    "hciz_pseudo_det",
    "heat_kernel",
    "heat_residual",
    "kahler_potential",
    "kappa_fields",
    "localizability_residual",
    "log_det",
    "metric_density",
    "moebius_action",
    "momentum_maps",
    "momentum_t_h",
    "norm_constant",
    "permutation_parity",
    "permutations",
    "positive_det_integral",
    "pseudo_convergence_flag",
    "random_group_element",
    "rho_matrix",
    "saddle_points",
    "sample_gue",
    "sample_gue_batch",
    "semicircle_density",
    "spectral_histogram",
    "vandermonde",
    "weyl_sum",
    "wishart_mc_check",
]
