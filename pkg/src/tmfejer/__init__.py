"""Takenaka-Malmquist bases and Fejer-type positive summation operators.

The package provides the rational orthonormal system attached to a
sequence of points in the unit disc, its Christoffel-Darboux kernel, the
positive summation kernel and the two equivalent operators it induces,
plus experiment drivers and a small CLI for reproducible reports.
"""

__version__ = "0.1.0"

from tmfejer.blaschke import (
    BlaschkeEval,
    PointSequence,
    PoleProximity,
    boundary_derivative_modulus,
    boundary_phase,
    eval_blaschke,
    gamma_density,
    second_derivative,
)
from tmfejer.operators import (
    AnalyticTestFunction,
    CoefficientVector,
    CriticalPoint,
    NearBoundary,
    cesaro_mean,
    coefficients,
    coefficients_of,
    delta,
    extremal_voronovskaya,
    fejer_kernel,
    fejer_kernel_angular,
    partial_sum,
    sigma_positive,
    sigma_rusak,
)
from tmfejer.quadrature import (
    BoundaryGridFunction,
    NoConvergence,
    NormReport,
    adaptive_integrate,
    default_resolution,
    integrate,
    norms,
    refined_maximum,
    refined_minimum,
)
from tmfejer.tm_basis import (
    DiagonalSingularity,
    ExtendedOffCircle,
    IndexOutOfRange,
    TMBasis,
    cd_kernel,
    cd_kernel_diagonal,
    eval_phi,
    phi_jet,
    phi_values,
)

__all__ = [
    "__version__",
    "PointSequence",
    "BlaschkeEval",
    "PoleProximity",
    "eval_blaschke",
    "second_derivative",
    "boundary_derivative_modulus",
    "gamma_density",
    "boundary_phase",
    "TMBasis",
    "IndexOutOfRange",
    "ExtendedOffCircle",
    "DiagonalSingularity",
    "phi_values",
    "phi_jet",
    "eval_phi",
    "cd_kernel",
    "cd_kernel_diagonal",
    "BoundaryGridFunction",
    "NormReport",
    "NoConvergence",
    "integrate",
    "norms",
    "adaptive_integrate",
    "default_resolution",
    "refined_minimum",
    "refined_maximum",
    "AnalyticTestFunction",
    "CoefficientVector",
    "CriticalPoint",
    "NearBoundary",
    "coefficients",
    "coefficients_of",
    "partial_sum",
    "cesaro_mean",
    "fejer_kernel",
    "fejer_kernel_angular",
    "sigma_positive",
    "sigma_rusak",
    "delta",
    "extremal_voronovskaya",
]
