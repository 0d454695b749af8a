"""Spectral toolkit for the 2-D normal Ornstein-Uhlenbeck operator.

The rotating (normal, non-symmetric) OU generator on the plane has an
explicit eigenbasis in the complex variables (z, zbar): the
Hermite-Laguerre-Ito polynomials J_{m,n}.  This package implements that
eigenbasis and everything it powers:

* exact sparse polynomial algebra for J_{m,n}, the creation/annihilation
  operators and the generator (:mod:`hlito.poly`);
* the classical special functions used as independent cross-checks
  (:mod:`hlito.special`);
* the tridiagonal null-vector construction of the eigenfunctions and the
  Hermite-product basis conversions (:mod:`hlito.spectral`);
* the Mehler kernel of the semigroup, its eigen-series, and quadrature
  application (:mod:`hlito.mehler`);
* Gauss-Hermite expansion machinery in L^2 of the stationary measure
  (:mod:`hlito.expansion`);
* exact-transition Monte Carlo and the circle-lattice block decomposition
  (:mod:`hlito.simulate`).

Hot kernels are JIT-compiled with numba when available; set
``HLITO_BACKEND=numpy`` to force the pure-numpy fallback.
"""

__version__ = "0.1.0"

from ._backend import NUMBA_AVAILABLE, active_backend, set_backend
from .expansion import (
    QuadratureExactnessWarning,
    QuadratureGrid,
    build_grid,
    evaluate_expansion,
    expand,
    inner_product,
    parseval_check,
)
from .mehler import (
    MehlerPoint,
    SeriesConvergenceWarning,
    mehler_kernel,
    mehler_series,
    rotation,
    semigroup_apply,
    symmetric_relation_check,
)
from .poly import (
    ComplexPoly,
    DegreeCapError,
    OUParams,
    annihilate,
    apply_generator,
    bar_annihilate,
    bar_creation_op,
    conjugate,
    creation_op,
    generating_function_check,
    hlito,
    hlito_by_creation,
)
from .simulate import (
    LatticeBlock,
    LatticeModel,
    PathEnsemble,
    complex_bm_martingale,
    lattice_decompose,
    lattice_simulate_and_reassemble,
    sample_ou,
    sample_stationary,
    semigroup_mc,
)
from .special import (
    IntegrationError,
    bessel_jn,
    hermite,
    laguerre,
    laguerre_via_bessel,
)
from .spectral import (
    EigenIndex,
    beta_to_poly,
    det_m,
    j_in_hermite_basis,
    monomial_in_j_basis,
    null_vector,
    spectrum,
    tridiagonal_matrix,
)

__all__ = [
    "__version__",
    "NUMBA_AVAILABLE",
    "active_backend",
    "set_backend",
    "ComplexPoly",
    "DegreeCapError",
    "OUParams",
    "hlito",
    "hlito_by_creation",
    "annihilate",
    "bar_annihilate",
    "creation_op",
    "bar_creation_op",
    "apply_generator",
    "conjugate",
    "generating_function_check",
    "hermite",
    "laguerre",
    "bessel_jn",
    "laguerre_via_bessel",
    "IntegrationError",
    "EigenIndex",
    "spectrum",
    "det_m",
    "tridiagonal_matrix",
    "null_vector",
    "beta_to_poly",
    "j_in_hermite_basis",
    "monomial_in_j_basis",
    "QuadratureGrid",
    "QuadratureExactnessWarning",
    "build_grid",
    "inner_product",
    "expand",
    "evaluate_expansion",
    "parseval_check",
    "MehlerPoint",
    "SeriesConvergenceWarning",
    "rotation",
    "mehler_kernel",
    "mehler_series",
    "semigroup_apply",
    "symmetric_relation_check",
    "PathEnsemble",
    "LatticeModel",
    "LatticeBlock",
    "sample_ou",
    "sample_stationary",
    "semigroup_mc",
    "complex_bm_martingale",
    "lattice_decompose",
    "lattice_simulate_and_reassemble",
]
