"""Reproducing kernels of invariant-harmonic (M-harmonic) functions on the
unit ball of C^n, with the hypergeometric machinery they are built from.

Hot series loops run on a compiled Cython core when available; the
``BACKEND`` constant reports which implementation was selected (override
with the MHARMONIC_BACKEND environment variable).
"""

from ._backend import BACKEND, get_backend
from .errors import (
    DimensionMismatch,
    DomainError,
    MharmonicError,
    NonConvergent,
    QuadratureFailure,
    TruncationBudgetExceeded,
)
from .geometry import (
    InvariantCoords,
    haar_unitary,
    inner,
    invariant_coords,
    moebius,
    point_from_invariants,
)
from .harmonics import (
    poisson_partial_sum,
    radial_s,
    sphere_monomial_integral,
    sphere_poly_integral,
    surface_measure,
    zonal_h,
    zonal_h_at_one,
    zonal_h_via_jacobi,
)
from .kernels import (
    CoeffCache,
    KernelParams,
    WeightSpec,
    bergman_kernel,
    c0q_closed_form,
    coeff_apqjm,
    coeff_cpq,
    cpq_asymptotic_leading,
    f_s_kernel,
    get_cache,
    harm_szego,
    hol_kernel,
    poisson_szego,
    semiclassical_ratio,
    szego_2f1,
    szego_diagonal,
    szego_fd,
    szego_orthogonal,
    wallach_f,
)
from .multihyper import (
    FD1Params,
    appell_f1,
    appell_f3,
    cpq_unit_double_series,
    fd1,
    fd1_euler_transform,
    fd1_symmetry,
)
from .oracles import (
    OracleReport,
    four_factor_sphere_integral,
    montecarlo_sphere,
    reproducing_check,
    szego_bruteforce,
    theorem_pb_check,
)
from .special import (
    SeriesValue,
    ZETA3,
    digamma,
    f21_log_form,
    gamma_ratio,
    gauss_2f1,
    jacobi_poly,
    pochhammer,
    zeta3,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CoeffCache",
    "DimensionMismatch",
    "DomainError",
    "FD1Params",
    "InvariantCoords",
    "KernelParams",
    "MharmonicError",
    "NonConvergent",
    "OracleReport",
    "QuadratureFailure",
    "SeriesValue",
    "TruncationBudgetExceeded",
    "WeightSpec",
    "ZETA3",
    "appell_f1",
    "appell_f3",
    "bergman_kernel",
    "c0q_closed_form",
    "coeff_apqjm",
    "coeff_cpq",
    "cpq_asymptotic_leading",
    "cpq_unit_double_series",
    "digamma",
    "f21_log_form",
    "f_s_kernel",
    "fd1",
    "fd1_euler_transform",
    "fd1_symmetry",
    "four_factor_sphere_integral",
    "gamma_ratio",
    "gauss_2f1",
    "get_backend",
    "get_cache",
    "haar_unitary",
    "harm_szego",
    "hol_kernel",
    "inner",
    "invariant_coords",
    "jacobi_poly",
    "moebius",
    "montecarlo_sphere",
    "pochhammer",
    "point_from_invariants",
    "poisson_partial_sum",
    "poisson_szego",
    "radial_s",
    "reproducing_check",
    "semiclassical_ratio",
    "sphere_monomial_integral",
    "sphere_poly_integral",
    "surface_measure",
    "szego_2f1",
    "szego_bruteforce",
    "szego_diagonal",
    "szego_fd",
    "szego_orthogonal",
    "theorem_pb_check",
    "wallach_f",
    "zeta3",
    "zonal_h",
    "zonal_h_at_one",
    "zonal_h_via_jacobi",
]
